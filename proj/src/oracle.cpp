#include "ergokit/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ergokit {

double ergotropy_permutation_oracle(const DiagonalState& probs, const Spectrum& spec) {
  const int d = spec.dim();
  if (probs.dim() != d) throw std::invalid_argument("dimension mismatch");
  if (d > 8) throw std::invalid_argument("permutation oracle is limited to d <= 8");
  std::vector<int> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), 0);
  double energy = 0.0;
  for (int k = 0; k < d; ++k) energy += probs.prob(k) * spec.level(k);
  double best = energy;
  do {
    double dot = 0.0;
    for (int k = 0; k < d; ++k) dot += probs.prob(idx[static_cast<std::size_t>(k)]) * spec.level(k);
    best = std::min(best, dot);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return energy - best;
}

namespace {

// Exact ergotropy of a grid point by direct minimization over all index
// permutations (precomputed by the caller).
double point_ergotropy(const std::vector<double>& p, const Spectrum& spec,
                       const std::vector<std::vector<int>>& perms) {
  const int d = spec.dim();
  double energy = 0.0;
  for (int k = 0; k < d; ++k) energy += p[static_cast<std::size_t>(k)] * spec.level(k);
  double best = energy;
  for (const auto& perm : perms) {
    double dot = 0.0;
    for (int k = 0; k < d; ++k) dot += p[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] * spec.level(k);
    best = std::min(best, dot);
  }
  return energy - best;
}

}  // namespace

double min_ergotropy_grid_oracle(const Spectrum& spec, double energy, int cells_per_dim) {
  const int d = spec.dim();
  if (d > 4) throw std::invalid_argument("grid oracle is limited to d <= 4");
  if (cells_per_dim < 50) throw std::invalid_argument("grid oracle needs cells_per_dim >= 50");
  const auto st = spec.stats();
  if (energy < st.eps_min || energy > st.eps_max) {
    throw std::invalid_argument("energy outside the spectrum range");
  }
  const int n = cells_per_dim;
  const double window = spec.span() > 0.0 ? spec.span() / (2.0 * n) : 1e-12;

  std::vector<std::vector<int>> perms;
  {
    std::vector<int> idx(static_cast<std::size_t>(d));
    std::iota(idx.begin(), idx.end(), 0);
    do {
      perms.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> counts(static_cast<std::size_t>(d), 0);
  std::vector<double> point(static_cast<std::size_t>(d), 0.0);

  auto evaluate_point = [&](void) {
    for (int k = 0; k < d; ++k)
      point[static_cast<std::size_t>(k)] = static_cast<double>(counts[static_cast<std::size_t>(k)]) / n;
    best = std::min(best, point_ergotropy(point, spec, perms));
  };

  if (d == 1) {
    counts[0] = n;
    if (std::abs(spec.level(0) - energy) <= window) evaluate_point();
  } else {
    // Recurse over the first d-2 coordinates; the energy window then pins an
    // integer interval for coordinate d-2, and the last coordinate is fixed by
    // normalization. Identical point set to the naive full enumeration.
    const double e_last = spec.level(d - 1);
    const double e_prev = spec.level(d - 2);
    auto scan_tail = [&](int remaining, double partial_energy_n) {
      // partial_energy_n = sum over fixed prefix of m_k * eps_k.
      const double base = partial_energy_n + remaining * e_last;
      const double slope = e_prev - e_last;  // <= 0
      int j_lo = 0, j_hi = remaining;
      if (slope < 0.0) {
        // base + j*slope within [n*(energy - window), n*(energy + window)]
        const double lo_bound = (base - n * (energy + window)) / (-slope);
        const double hi_bound = (base - n * (energy - window)) / (-slope);
        j_lo = std::max(j_lo, static_cast<int>(std::ceil(lo_bound - 1e-9)));
        j_hi = std::min(j_hi, static_cast<int>(std::floor(hi_bound + 1e-9)));
      } else if (std::abs(base / n - energy) > window) {
        return;
      }
      for (int j = j_lo; j <= j_hi; ++j) {
        const double e_point = (base + j * slope) / n;
        if (std::abs(e_point - energy) > window) continue;
        counts[static_cast<std::size_t>(d - 2)] = j;
        counts[static_cast<std::size_t>(d - 1)] = remaining - j;
        evaluate_point();
      }
    };
    // Depth-first over coordinates 0..d-3.
    auto recurse = [&](auto&& self, int coord, int used, double partial) -> void {
      if (coord == d - 2) {
        scan_tail(n - used, partial);
        return;
      }
      for (int m = 0; m <= n - used; ++m) {
        counts[static_cast<std::size_t>(coord)] = m;
        self(self, coord + 1, used + m, partial + m * spec.level(coord));
      }
    };
    recurse(recurse, 0, 0, 0.0);
  }

  if (!std::isfinite(best)) {
    throw NumericalError("grid oracle: no grid point satisfies the energy slice");
  }
  return best;
}

double worst_case_sampling_oracle(const RandomUnitaryChannel& channel, const Spectrum& spec,
                                  double energy, int n, std::uint64_t seed, Mode mode) {
  if (n < 1) throw std::invalid_argument("sampling oracle needs n >= 1");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const auto rho = sample_state_at_energy(spec, energy, seed + static_cast<std::uint64_t>(i));
    const double de = delta_E(rho, channel, spec);
    best = std::min(best, mode == Mode::Extract ? de : -de);
  }
  return best;
}

}  // namespace ergokit
