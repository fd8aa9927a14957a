#pragma once

#include <cstdint>
#include <string>

#include "ergokit/protocols.hpp"

namespace ergokit {

struct OracleReport {
  double oracle_value;
  double analytic_value;
  double abs_gap;
  std::string method;
  std::size_t samples_or_cells;
};

// E minus the exhaustive minimum of sum_k p_{pi(k)} eps_k over all d!
// permutations. Guarded to d <= 8.
double ergotropy_permutation_oracle(const DiagonalState& probs, const Spectrum& spec);

// Minimum exact ergotropy over the regular simplex grid points whose mean
// energy lies within half a grid-cell energy width (span / cells) of the
// target. Shares no code with the envelope construction. d <= 4,
// cells_per_dim >= 50; throws when the slice is empty.
double min_ergotropy_grid_oracle(const Spectrum& spec, double energy, int cells_per_dim);

// Minimum of delta_E over n seeded random states at the target energy; an
// upper bound on the true worst case.
double worst_case_sampling_oracle(const RandomUnitaryChannel& channel, const Spectrum& spec,
                                  double energy, int n, std::uint64_t seed,
                                  Mode mode = Mode::Extract);

}  // namespace ergokit
