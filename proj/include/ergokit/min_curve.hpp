#pragma once

#include <vector>

#include "ergokit/state.hpp"

namespace ergokit {

// One breakpoint of an energy-constrained minimum curve. `vertex` is the
// 1-based index k of the simplex vertex that realizes it (anti-passive
// vertices for extraction, passive for injection).
struct CurvePoint {
  double energy;
  double value;
  int vertex;
};

// Convex piecewise-linear minimum curve over the mean energy. Breakpoints
// are strictly increasing in energy with non-decreasing segment slopes;
// evaluation outside the breakpoint window but inside the spectrum range
// returns 0.
class EnergyCurve {
 public:
  EnergyCurve(Mode mode, std::vector<CurvePoint> breakpoints, double spectrum_lo,
              double spectrum_hi);

  Mode mode() const { return mode_; }
  const std::vector<CurvePoint>& breakpoints() const { return pts_; }
  double spectrum_lo() const { return spectrum_lo_; }
  double spectrum_hi() const { return spectrum_hi_; }

  // Linear interpolation on the segment containing `energy` (binary search).
  double evaluate(double energy) const;

 private:
  Mode mode_;
  std::vector<CurvePoint> pts_;
  double spectrum_lo_;
  double spectrum_hi_;
};

// Uniform mixture over the top d+1-k levels (anti-passive) or the bottom k
// levels (passive); k is 1-based.
DiagonalState antipassive_vertex(const Spectrum& spec, int k);
DiagonalState passive_vertex(const Spectrum& spec, int k);

// Lower convex envelope of the d anti-passive vertex points, anchored at
// (eps_mean, 0); domain [eps_mean, eps_max].
EnergyCurve min_ergotropy_curve(const Spectrum& spec);

// Mirror construction over the passive vertices; domain [eps_min, eps_mean].
EnergyCurve min_anti_ergotropy_curve(const Spectrum& spec);

// A two-vertex mixture achieving the curve value at the requested energy.
// `state = mix_probability * vertex_low + (1 - mix_probability) * vertex_high`
// with both indices referring to the curve's vertex family. A breakpoint hit
// collapses to a single vertex with mix_probability 1.
struct MinimumStateWitness {
  int vertex_low;
  int vertex_high;
  double mix_probability;
  DiagonalState state;
};

MinimumStateWitness min_ergotropy_state(const Spectrum& spec, double energy);
MinimumStateWitness min_anti_ergotropy_state(const Spectrum& spec, double energy);
MinimumStateWitness minimum_state(const EnergyCurve& curve, const Spectrum& spec, double energy);

// Closed forms E - eps_min and eps_max - E.
double max_ergotropy(const Spectrum& spec, double energy);
double max_anti_ergotropy(const Spectrum& spec, double energy);

struct CoherentMax {
  double ergotropy;
  double anti_ergotropy;
};

// Gap between the maximum and the energy-constrained minimum, per mode.
CoherentMax coherent_max(const Spectrum& spec, double energy);

// max(0, 2(E - eps_mean)) for extraction, mirrored for injection; requires an
// antisymmetric spectrum.
double antisymmetric_closed_form(const Spectrum& spec, double energy, Mode mode);

}  // namespace ergokit
