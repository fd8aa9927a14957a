#include "ergokit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ergokit {

Spectrum::Spectrum(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("spectrum needs at least one level");
  for (double e : levels_) {
    if (!std::isfinite(e)) throw std::invalid_argument("spectrum levels must be finite");
  }
  std::sort(levels_.begin(), levels_.end());
}

SpectrumStats Spectrum::stats() const {
  const double sum = std::accumulate(levels_.begin(), levels_.end(), 0.0);
  return {levels_.front(), sum / static_cast<double>(levels_.size()), levels_.back()};
}

double Spectrum::default_antisymmetry_tol() const {
  return 1e-9 * (span() + 1.0);
}

std::optional<double> Spectrum::antisymmetric_constant(double tol) const {
  if (tol < 0.0) throw std::invalid_argument("antisymmetry tolerance must be >= 0");
  const double c = levels_.front() + levels_.back();
  const int d = dim();
  for (int k = 0; k < d; ++k) {
    if (std::abs(levels_[k] + levels_[d - 1 - k] - c) > tol) return std::nullopt;
  }
  return c;
}

Spectrum qutrit_spectrum(double eps, double delta) {
  if (!(eps > 0.0)) throw std::invalid_argument("qutrit eps must be > 0");
  if (!(delta >= -1.0 && delta <= 1.0))
    throw std::invalid_argument("qutrit delta must lie in [-1, 1]");
  return Spectrum({0.0, (1.0 + delta) * eps, 2.0 * eps});
}

}  // namespace ergokit
