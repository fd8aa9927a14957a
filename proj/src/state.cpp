#include "ergokit/state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace ergokit {

namespace {

using Complex = std::complex<double>;

void check_dim(int state_dim, const Spectrum& spec) {
  if (state_dim != spec.dim()) {
    throw std::invalid_argument("state dimension " + std::to_string(state_dim) +
                                " does not match spectrum dimension " +
                                std::to_string(spec.dim()));
  }
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve_hermitian(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian eigensolver failed to converge");
  }
  return solver;
}

std::vector<double> clipped_eigenvalues(const Eigen::MatrixXcd& m) {
  const auto solver = solve_hermitian(m);
  std::vector<double> vals(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  bool clipped = false;
  for (double& v : vals) {
    if (v < -kPsdTol || v > 1.0 + kPsdTol) {
      throw NumericalError("density-matrix eigenvalue outside [0, 1]: " + std::to_string(v));
    }
    if (v < 0.0 || v > 1.0) {
      v = std::clamp(v, 0.0, 1.0);
      clipped = true;
    }
  }
  if (clipped) {
    const double sum = std::accumulate(vals.begin(), vals.end(), 0.0);
    if (sum > 0.0) {
      for (double& v : vals) v /= sum;
    }
  }
  return vals;
}

}  // namespace

DiagonalState::DiagonalState(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("diagonal state needs at least one entry");
  double sum = 0.0;
  for (double& p : probs_) {
    if (!std::isfinite(p)) throw std::invalid_argument("diagonal state entries must be finite");
    if (p < -kPsdTol) {
      throw std::invalid_argument("diagonal state violates positivity: entry " +
                                  std::to_string(p));
    }
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kTraceTol) {
    throw std::invalid_argument("diagonal state violates unit trace: sum " + std::to_string(sum));
  }
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  const double herm_gap = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_gap > kHermTol) {
    throw std::invalid_argument("density matrix violates Hermiticity: gap " +
                                std::to_string(herm_gap));
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    throw std::invalid_argument("density matrix violates unit trace: " +
                                std::to_string(tr.real()));
  }
  const auto solver = solve_hermitian(m_);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kPsdTol) {
    throw std::invalid_argument("density matrix violates positivity: min eigenvalue " +
                                std::to_string(min_eig));
  }
}

DensityMatrix::DensityMatrix(const DiagonalState& diag)
    : DensityMatrix([&diag] {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(diag.dim(), diag.dim());
        for (int k = 0; k < diag.dim(); ++k) m(k, k) = diag.prob(k);
        return m;
      }()) {}

double mean_energy(const DensityMatrix& rho, const Spectrum& spec) {
  check_dim(rho.dim(), spec);
  double e = 0.0;
  for (int k = 0; k < spec.dim(); ++k) e += spec.level(k) * rho.matrix()(k, k).real();
  return e;
}

double mean_energy(const DiagonalState& probs, const Spectrum& spec) {
  check_dim(probs.dim(), spec);
  double e = 0.0;
  for (int k = 0; k < spec.dim(); ++k) e += spec.level(k) * probs.prob(k);
  return e;
}

StateSpectrum eigen_spectrum(const DensityMatrix& rho) {
  StateSpectrum out;
  out.ascending = clipped_eigenvalues(rho.matrix());
  std::stable_sort(out.ascending.begin(), out.ascending.end());
  out.descending.assign(out.ascending.rbegin(), out.ascending.rend());
  return out;
}

DiagonalState dephase(const DensityMatrix& rho) {
  std::vector<double> probs(static_cast<std::size_t>(rho.dim()));
  for (int k = 0; k < rho.dim(); ++k) probs[static_cast<std::size_t>(k)] = rho.matrix()(k, k).real();
  return DiagonalState(std::move(probs));
}

DiagonalState passive_rearrangement(const DensityMatrix& rho, const Spectrum& spec) {
  check_dim(rho.dim(), spec);
  return DiagonalState(eigen_spectrum(rho).descending);
}

DiagonalState passive_rearrangement(const DiagonalState& probs, const Spectrum& spec) {
  check_dim(probs.dim(), spec);
  std::vector<double> sorted = probs.probs();
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
  return DiagonalState(std::move(sorted));
}

DiagonalState antipassive_rearrangement(const DensityMatrix& rho, const Spectrum& spec) {
  check_dim(rho.dim(), spec);
  return DiagonalState(eigen_spectrum(rho).ascending);
}

DiagonalState antipassive_rearrangement(const DiagonalState& probs, const Spectrum& spec) {
  check_dim(probs.dim(), spec);
  std::vector<double> sorted = probs.probs();
  std::stable_sort(sorted.begin(), sorted.end());
  return DiagonalState(std::move(sorted));
}

namespace {

double entropy_bits_of(const std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) {
    if (v > 0.0) s -= v * std::log2(v);
  }
  return s;
}

}  // namespace

double entropy_bits(const DensityMatrix& rho) {
  return entropy_bits_of(eigen_spectrum(rho).ascending);
}

double entropy_bits(const DiagonalState& probs) {
  return entropy_bits_of(probs.probs());
}

double coherence_rel_entropy_bits(const DensityMatrix& rho) {
  return entropy_bits(dephase(rho)) - entropy_bits(rho);
}

DensityMatrix pure_from_amplitudes(const DiagonalState& probs) {
  const int d = probs.dim();
  Eigen::VectorXcd amp(d);
  for (int k = 0; k < d; ++k) amp(k) = std::sqrt(probs.prob(k));
  Eigen::MatrixXcd m = amp * amp.adjoint();
  // Keep the diagonal bit-exact so the construction round-trips with dephase.
  for (int k = 0; k < d; ++k) m(k, k) = probs.prob(k);
  return DensityMatrix(std::move(m));
}

namespace {

Eigen::MatrixXcd random_pure(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd z(d);
  for (int k = 0; k < d; ++k) z(k) = Complex(gauss(rng), gauss(rng));
  z.normalize();
  return z * z.adjoint();
}

Eigen::MatrixXcd random_mixed(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::MatrixXcd w = g * g.adjoint();
  return w / w.trace().real();
}

// Mixes `m` (energy e0) with the projector onto the extreme level nearest to
// the target, then applies one linear correction so the residual is at the
// rounding floor.
Eigen::MatrixXcd mix_to_energy(Eigen::MatrixXcd m, double e0, double energy,
                               const Spectrum& spec) {
  const int d = spec.dim();
  const int edge = (energy < e0) ? 0 : d - 1;
  const double eps_edge = spec.level(edge);
  if (std::abs(eps_edge - e0) < 1e-300) return m;
  double t = (e0 - energy) / (e0 - eps_edge);
  t = std::clamp(t, 0.0, 1.0);
  Eigen::MatrixXcd edge_proj = Eigen::MatrixXcd::Zero(d, d);
  edge_proj(edge, edge) = 1.0;
  auto energy_of = [&spec, d](const Eigen::MatrixXcd& x) {
    double e = 0.0;
    for (int k = 0; k < d; ++k) e += spec.level(k) * x(k, k).real();
    return e;
  };
  Eigen::MatrixXcd out = (1.0 - t) * m + t * edge_proj;
  const double residual = energy_of(out) - energy;
  const double denom = eps_edge - e0;
  if (std::abs(denom) > 0.0) {
    t = std::clamp(t - residual / denom, 0.0, 1.0);
    out = (1.0 - t) * m + t * edge_proj;
  }
  if (std::abs(energy_of(out) - energy) > 1e-10) {
    throw NumericalError("energy-matched sample missed the target mean energy");
  }
  return out;
}

}  // namespace

DensityMatrix sample_state_at_energy(const Spectrum& spec, double energy, std::uint64_t seed) {
  const auto st = spec.stats();
  const double grace = 1e-12 * (spec.span() + 1.0);
  if (energy < st.eps_min - grace || energy > st.eps_max + grace) {
    throw std::invalid_argument("target energy outside the spectrum range");
  }
  energy = std::clamp(energy, st.eps_min, st.eps_max);
  const int d = spec.dim();
  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd base = (rng() % 2 == 0) ? random_pure(rng, d) : random_mixed(rng, d);
  double e0 = 0.0;
  for (int k = 0; k < d; ++k) e0 += spec.level(k) * base(k, k).real();
  Eigen::MatrixXcd out = mix_to_energy(std::move(base), e0, energy, spec);
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out));
}

DiagonalState sample_diagonal_state_at_energy(const Spectrum& spec, double energy,
                                              std::uint64_t seed) {
  const auto st = spec.stats();
  const double grace = 1e-12 * (spec.span() + 1.0);
  if (energy < st.eps_min - grace || energy > st.eps_max + grace) {
    throw std::invalid_argument("target energy outside the spectrum range");
  }
  energy = std::clamp(energy, st.eps_min, st.eps_max);
  const int d = spec.dim();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(static_cast<std::size_t>(d));
  double sum = 0.0;
  for (double& v : p) {
    v = expo(rng);
    sum += v;
  }
  for (double& v : p) v /= sum;
  double e0 = 0.0;
  for (int k = 0; k < d; ++k) e0 += spec.level(k) * p[static_cast<std::size_t>(k)];

  const int edge = (energy < e0) ? 0 : d - 1;
  const double eps_edge = spec.level(edge);
  auto mixed = [&](double t) {
    std::vector<double> q(p);
    for (double& v : q) v *= (1.0 - t);
    q[static_cast<std::size_t>(edge)] += t;
    return q;
  };
  auto energy_of = [&](const std::vector<double>& q) {
    double e = 0.0;
    for (int k = 0; k < d; ++k) e += spec.level(k) * q[static_cast<std::size_t>(k)];
    return e;
  };
  double t = (std::abs(eps_edge - e0) < 1e-300) ? 0.0
                                                : std::clamp((e0 - energy) / (e0 - eps_edge), 0.0, 1.0);
  std::vector<double> q = mixed(t);
  const double denom = eps_edge - e0;
  if (std::abs(denom) > 0.0) {
    t = std::clamp(t - (energy_of(q) - energy) / denom, 0.0, 1.0);
    q = mixed(t);
  }
  if (std::abs(energy_of(q) - energy) > 1e-10) {
    throw NumericalError("energy-matched diagonal sample missed the target mean energy");
  }
  return DiagonalState(std::move(q));
}

}  // namespace ergokit
