#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ergokit/min_curve.hpp"
#include "ergokit/state.hpp"

namespace ergokit {

// A unitary conjugation channel. Construction checks unitarity to 1e-10.
class UnitaryChannel {
 public:
  explicit UnitaryChannel(Eigen::MatrixXcd matrix);

  const Eigen::MatrixXcd& matrix() const { return u_; }
  int dim() const { return static_cast<int>(u_.rows()); }

 private:
  Eigen::MatrixXcd u_;
};

struct WeightedUnitary {
  double weight;
  UnitaryChannel unitary;
};

// Finite convex mixture of unitary channels; weights must be non-negative and
// sum to one within 1e-12. A single unitary is the one-member case.
class RandomUnitaryChannel {
 public:
  explicit RandomUnitaryChannel(std::vector<WeightedUnitary> members);
  RandomUnitaryChannel(const UnitaryChannel& u);  // implicit one-member wrap

  const std::vector<WeightedUnitary>& members() const { return members_; }
  int dim() const { return members_.front().unitary.dim(); }

 private:
  std::vector<WeightedUnitary> members_;
};

DensityMatrix apply(const UnitaryChannel& channel, const DensityMatrix& rho);
DensityMatrix apply(const RandomUnitaryChannel& channel, const DensityMatrix& rho);

// Tr[rho H] - Tr[channel(rho) H].
double delta_E(const DensityMatrix& rho, const UnitaryChannel& channel, const Spectrum& spec);
double delta_E(const DensityMatrix& rho, const RandomUnitaryChannel& channel,
               const Spectrum& spec);

// Anti-diagonal permutation |eps_{d+1-k}><eps_k|.
UnitaryChannel population_reversal(int d);

struct WorstCaseResult {
  double value;
  double dual_multiplier;
  DensityMatrix witness_state;
};

// Exact min over all states of mean energy E of +/- delta_E(rho, channel),
// via the Lagrangian dual: max over real lambda of
// lambda*E + lambda_min(A - lambda*H), with A = +/-(H - sum_i w_i U_i^dag H U_i).
// The concave scalar objective is maximized by golden-section search on an
// adaptively expanded bracket; the witness is rebuilt from the optimal
// multiplier's minimal eigenspace. Boundary energies (where the state set may
// collapse) are handled by direct evaluation on the extremal level subspace.
WorstCaseResult worst_case_delta_E(const RandomUnitaryChannel& channel, const Spectrum& spec,
                                   double energy, Mode mode);

// Qutrit closed forms. All take the (0, (1+delta)eps, 2eps) parameterization.

// Worst-case extraction of the population reversal: zero below the regime
// threshold, then 2E - 2eps (delta <= 0) or eps3/(eps3-eps2)*(E-eps2)
// (delta >= 0).
double qutrit_worst_rev(double eps, double delta, double energy);

// The unitary that extracts exactly the minimum-curve value from every
// diagonal state: identity below eps_mean, a reversal composed with a
// two-level rotation of weight qbar in the middle regime, and the plain
// reversal above it (delta >= 0).
UnitaryChannel qutrit_diag_optimal_unitary(double eps, double delta, double energy, double alpha,
                                           double theta, double phi);

// Worst-case coherent shortfall of the diagonal-optimal unitary on its
// middle segment.
double qutrit_coherence_penalty(double eps, double delta, double energy);

// State at the requested energy whose coherences realize the full penalty
// against qutrit_diag_optimal_unitary(..., alpha, theta, ...).
DensityMatrix adversarial_coherent_state(double eps, double delta, double energy, double alpha,
                                         double theta);

// Equal mixture of the diagonal-optimal unitary at (alpha, theta) and
// (alpha + pi, theta); coherent contributions average to zero.
RandomUnitaryChannel qutrit_random_unitary_channel(double eps, double delta, double energy,
                                                   double alpha, double theta, double phi);

// Boltzmann weights with the unique real beta (negative above eps_mean)
// matching the requested mean energy to 1e-12.
DiagonalState gibbs_state(const Spectrum& spec, double energy);

// min-curve value minus sqrt(2 ln 2) * eps_max * sqrt(S_bits(gibbs state)).
// May be negative; not clipped.
double pinsker_lower_bound(const Spectrum& spec, double energy, Mode mode);

}  // namespace ergokit
