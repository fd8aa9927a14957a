#pragma once

#include <optional>
#include <vector>

#include "ergokit/common.hpp"

namespace ergokit {

struct SpectrumStats {
  double eps_min;
  double eps_mean;
  double eps_max;
};

// Sorted energy levels of a finite-dimensional Hamiltonian. All downstream
// math works in this ordered eigenbasis; input order is immaterial and is
// discarded at construction. Degenerate levels are kept as-is.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> levels);

  const std::vector<double>& levels() const { return levels_; }
  int dim() const { return static_cast<int>(levels_.size()); }
  double level(int k) const { return levels_[static_cast<std::size_t>(k)]; }  // 0-based
  double span() const { return levels_.back() - levels_.front(); }

  SpectrumStats stats() const;

  // Scales with the spectrum so the check is not unit-sensitive.
  double default_antisymmetry_tol() const;

  // Returns c with levels[k] + levels[d+1-k] == c for all k (within tol),
  // or nullopt. When antisymmetric, c = eps_min + eps_max.
  std::optional<double> antisymmetric_constant(double tol) const;
  std::optional<double> antisymmetric_constant() const {
    return antisymmetric_constant(default_antisymmetry_tol());
  }

 private:
  std::vector<double> levels_;
};

// Three-level spectrum (0, (1+delta)*eps, 2*eps); requires eps > 0 and
// |delta| <= 1 so the levels stay ordered.
Spectrum qutrit_spectrum(double eps, double delta);

}  // namespace ergokit
