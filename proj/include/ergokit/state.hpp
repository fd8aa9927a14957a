#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ergokit/spectrum.hpp"

namespace ergokit {

// Probability vector over the ordered energy levels: a state commuting with
// the Hamiltonian. Entries in [-kPsdTol, 0) are clipped to zero at
// construction; the vector is never renormalized, so a clean input passes
// through bit-exact.
class DiagonalState {
 public:
  explicit DiagonalState(std::vector<double> probs);

  const std::vector<double>& probs() const { return probs_; }
  int dim() const { return static_cast<int>(probs_.size()); }
  double prob(int k) const { return probs_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<double> probs_;
};

// Density matrix in the ordered energy eigenbasis. Construction enforces
// Hermiticity, unit trace, and positive semidefiniteness (tolerances in
// common.hpp) and reports which invariant failed.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);
  explicit DensityMatrix(const DiagonalState& diag);

  const Eigen::MatrixXcd& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  Eigen::MatrixXcd m_;
};

// Eigenvalues of a density matrix in both orderings, clipped to [0, 1].
// Renormalized only if the clipping actually changed something.
struct StateSpectrum {
  std::vector<double> ascending;
  std::vector<double> descending;
};

double mean_energy(const DensityMatrix& rho, const Spectrum& spec);
double mean_energy(const DiagonalState& probs, const Spectrum& spec);

StateSpectrum eigen_spectrum(const DensityMatrix& rho);

// Drops the off-diagonal entries; the diagonal (and hence the mean energy)
// is preserved exactly.
DiagonalState dephase(const DensityMatrix& rho);

// Eigenvalues of rho sorted descending (passive) or ascending (anti-passive)
// and placed on the ascending-energy levels. Sorting is stable, so ties keep
// their original index order.
DiagonalState passive_rearrangement(const DensityMatrix& rho, const Spectrum& spec);
DiagonalState passive_rearrangement(const DiagonalState& probs, const Spectrum& spec);
DiagonalState antipassive_rearrangement(const DensityMatrix& rho, const Spectrum& spec);
DiagonalState antipassive_rearrangement(const DiagonalState& probs, const Spectrum& spec);

// Von Neumann / Shannon entropy in bits, with 0*log(0) := 0.
double entropy_bits(const DensityMatrix& rho);
double entropy_bits(const DiagonalState& probs);

// S(dephase(rho)) - S(rho), in bits.
double coherence_rel_entropy_bits(const DensityMatrix& rho);

// Rank-1 projector onto sum_k sqrt(p_k) |eps_k>; same diagonal as probs.
DensityMatrix pure_from_amplitudes(const DiagonalState& probs);

// Deterministic test-ensemble generators: a random pure or mixed state is
// mixed with the extreme level projector at the unique ratio that lands the
// mean energy on `energy` (within 1e-10).
DensityMatrix sample_state_at_energy(const Spectrum& spec, double energy, std::uint64_t seed);
DiagonalState sample_diagonal_state_at_energy(const Spectrum& spec, double energy,
                                              std::uint64_t seed);

}  // namespace ergokit
