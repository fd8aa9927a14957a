#include "ergokit/ergotropy.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergokit {

namespace {

void check_dim(int state_dim, const Spectrum& spec) {
  if (state_dim != spec.dim()) {
    throw std::invalid_argument("state dimension " + std::to_string(state_dim) +
                                " does not match spectrum dimension " +
                                std::to_string(spec.dim()));
  }
}

double dot_levels(const std::vector<double>& weights, const Spectrum& spec) {
  double s = 0.0;
  for (int k = 0; k < spec.dim(); ++k) s += weights[static_cast<std::size_t>(k)] * spec.level(k);
  return s;
}

double ergotropy_from(const std::vector<double>& descending, double energy,
                      const Spectrum& spec) {
  return clip_nonnegative(energy - dot_levels(descending, spec), "ergotropy");
}

double anti_ergotropy_from(const std::vector<double>& ascending, double energy,
                           const Spectrum& spec) {
  return clip_nonnegative(dot_levels(ascending, spec) - energy, "anti-ergotropy");
}

}  // namespace

double ergotropy(const DensityMatrix& rho, const Spectrum& spec) {
  check_dim(rho.dim(), spec);
  return ergotropy_from(eigen_spectrum(rho).descending, mean_energy(rho, spec), spec);
}

double ergotropy(const DiagonalState& probs, const Spectrum& spec) {
  check_dim(probs.dim(), spec);
  return ergotropy_from(passive_rearrangement(probs, spec).probs(), mean_energy(probs, spec),
                        spec);
}

double anti_ergotropy(const DensityMatrix& rho, const Spectrum& spec) {
  check_dim(rho.dim(), spec);
  return anti_ergotropy_from(eigen_spectrum(rho).ascending, mean_energy(rho, spec), spec);
}

double anti_ergotropy(const DiagonalState& probs, const Spectrum& spec) {
  check_dim(probs.dim(), spec);
  return anti_ergotropy_from(antipassive_rearrangement(probs, spec).probs(),
                             mean_energy(probs, spec), spec);
}

double coherent_ergotropy(const DensityMatrix& rho, const Spectrum& spec) {
  return clip_nonnegative(ergotropy(rho, spec) - ergotropy(dephase(rho), spec),
                          "coherent ergotropy");
}

double coherent_anti_ergotropy(const DensityMatrix& rho, const Spectrum& spec) {
  return clip_nonnegative(anti_ergotropy(rho, spec) - anti_ergotropy(dephase(rho), spec),
                          "coherent anti-ergotropy");
}

ErgotropyReport ergotropy_report(const DensityMatrix& rho, const Spectrum& spec) {
  return {ergotropy(rho, spec), anti_ergotropy(rho, spec), coherent_ergotropy(rho, spec),
          coherent_anti_ergotropy(rho, spec), mean_energy(rho, spec)};
}

namespace {

// Columns of the eigenbasis reordered by descending eigenvalue.
Eigen::MatrixXcd descending_eigenvectors(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian eigensolver failed to converge");
  }
  return solver.eigenvectors().rowwise().reverse();
}

void check_unitary(const Eigen::MatrixXcd& u) {
  const int d = static_cast<int>(u.rows());
  const double gap =
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (gap > 1e-10) {
    throw NumericalError("optimal unitary is not unitary within tolerance: gap " +
                         std::to_string(gap));
  }
}

}  // namespace

Eigen::MatrixXcd optimal_extraction_unitary(const DensityMatrix& rho, const Spectrum& spec) {
  check_dim(rho.dim(), spec);
  Eigen::MatrixXcd u = descending_eigenvectors(rho).adjoint();
  check_unitary(u);
  return u;
}

Eigen::MatrixXcd optimal_charging_unitary(const DensityMatrix& rho, const Spectrum& spec) {
  check_dim(rho.dim(), spec);
  Eigen::MatrixXcd u = descending_eigenvectors(rho).adjoint().colwise().reverse();
  check_unitary(u);
  return u;
}

}  // namespace ergokit
