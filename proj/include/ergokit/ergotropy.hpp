#pragma once

#include <Eigen/Dense>

#include "ergokit/state.hpp"

namespace ergokit {

struct ErgotropyReport {
  double ergotropy;
  double anti_ergotropy;
  double coherent_ergotropy;
  double coherent_anti_ergotropy;
  double mean_energy;
};

// Maximum unitarily extractable energy: E - (descending eigenvalues dotted
// with ascending levels). Computed from sorted spectra, never by searching
// over unitaries. Values in [-kNegClip, 0) are clipped to 0.
double ergotropy(const DensityMatrix& rho, const Spectrum& spec);
double ergotropy(const DiagonalState& probs, const Spectrum& spec);

// Maximum unitarily injectable energy: (ascending dot ascending) - E.
double anti_ergotropy(const DensityMatrix& rho, const Spectrum& spec);
double anti_ergotropy(const DiagonalState& probs, const Spectrum& spec);

// Functional on rho minus the same functional on dephase(rho).
double coherent_ergotropy(const DensityMatrix& rho, const Spectrum& spec);
double coherent_anti_ergotropy(const DensityMatrix& rho, const Spectrum& spec);

ErgotropyReport ergotropy_report(const DensityMatrix& rho, const Spectrum& spec);

// Unitary mapping the eigenvectors of rho (by descending eigenvalue) onto the
// energy levels from the bottom up (extraction) or top down (charging).
// Applying the result to rho changes the energy by exactly -ergotropy or
// +anti_ergotropy. Eigenvector phases are taken as the solver returns them.
Eigen::MatrixXcd optimal_extraction_unitary(const DensityMatrix& rho, const Spectrum& spec);
Eigen::MatrixXcd optimal_charging_unitary(const DensityMatrix& rho, const Spectrum& spec);

}  // namespace ergokit
