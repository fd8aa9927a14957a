#include "ergokit/min_curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ergokit {

namespace {

double range_tol(const Spectrum& spec) { return 1e-12 * (spec.span() + 1.0); }

void check_energy_in_spectrum(const Spectrum& spec, double energy) {
  const auto st = spec.stats();
  if (energy < st.eps_min - range_tol(spec) || energy > st.eps_max + range_tol(spec)) {
    throw std::invalid_argument("energy " + std::to_string(energy) +
                                " outside the spectrum range [" + std::to_string(st.eps_min) +
                                ", " + std::to_string(st.eps_max) + "]");
  }
}

// Candidate (energy, value, vertex) triples for the d simplex vertices.
// Extraction uses the anti-passive family, injection the passive one; both
// lists come out anchored at (eps_mean, 0).
std::vector<CurvePoint> vertex_candidates(const Spectrum& spec, Mode mode) {
  const auto& eps = spec.levels();
  const int d = spec.dim();
  std::vector<CurvePoint> cand;
  cand.reserve(static_cast<std::size_t>(d));
  if (mode == Mode::Extract) {
    for (int k = 1; k <= d; ++k) {
      const int block = d + 1 - k;
      const double upper =
          std::accumulate(eps.end() - block, eps.end(), 0.0) / static_cast<double>(block);
      const double lower =
          std::accumulate(eps.begin(), eps.begin() + block, 0.0) / static_cast<double>(block);
      cand.push_back({upper, upper - lower, k});
    }
  } else {
    for (int k = d; k >= 1; --k) {
      const double lower =
          std::accumulate(eps.begin(), eps.begin() + k, 0.0) / static_cast<double>(k);
      const double upper =
          std::accumulate(eps.end() - k, eps.end(), 0.0) / static_cast<double>(k);
      // Reflected abscissa so the anchor comes first and energies ascend.
      cand.push_back({-lower, upper - lower, k});
    }
  }
  return cand;
}

// Level degeneracy can give two vertices the same energy; keep the one with
// the smaller value so the envelope never divides by a zero energy gap.
std::vector<CurvePoint> collapse_degenerate(std::vector<CurvePoint> cand, double tol) {
  std::vector<CurvePoint> out;
  for (const auto& p : cand) {
    if (!out.empty() && std::abs(p.energy - out.back().energy) <= tol) {
      if (p.value < out.back().value) out.back() = p;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

// Greedy minimum-slope scan from the anchor. A slope tie picks the farther
// vertex, so collinear runs collapse to one segment.
std::vector<CurvePoint> lower_envelope(const std::vector<CurvePoint>& cand) {
  std::vector<CurvePoint> out{cand.front()};
  std::size_t k = 0;
  while (k + 1 < cand.size()) {
    std::size_t pick = k + 1;
    double m = (cand[pick].value - out.back().value) / (cand[pick].energy - out.back().energy);
    for (std::size_t h = k + 1; h < cand.size(); ++h) {
      const double testm =
          (cand[h].value - out.back().value) / (cand[h].energy - out.back().energy);
      if (testm <= m) {
        m = testm;
        pick = h;
      }
    }
    out.push_back(cand[pick]);
    k = pick;
  }
  return out;
}

// Drops interior points whenever rounding makes a slope decrease, under both
// the quotient and the cross-product form of the test.
std::vector<CurvePoint> enforce_convexity(const std::vector<CurvePoint>& pts) {
  auto concave_kink = [](const CurvePoint& a, const CurvePoint& b, const CurvePoint& c) {
    const double s1 = (b.value - a.value) / (b.energy - a.energy);
    const double s2 = (c.value - b.value) / (c.energy - b.energy);
    if (s1 > s2) return true;
    return (b.value - a.value) * (c.energy - b.energy) >
           (c.value - b.value) * (b.energy - a.energy);
  };
  std::vector<CurvePoint> out;
  for (const auto& p : pts) {
    while (out.size() >= 2 && concave_kink(out[out.size() - 2], out.back(), p)) out.pop_back();
    out.push_back(p);
  }
  return out;
}

EnergyCurve build_curve(const Spectrum& spec, Mode mode) {
  const auto st = spec.stats();
  auto cand = vertex_candidates(spec, mode);
  cand = collapse_degenerate(std::move(cand), range_tol(spec));
  auto pts = enforce_convexity(lower_envelope(cand));
  if (mode == Mode::Inject) {
    std::reverse(pts.begin(), pts.end());
    for (auto& p : pts) p.energy = -p.energy;
  }
  for (auto& p : pts) p.value = clip_nonnegative(p.value, "minimum-curve breakpoint");
  return EnergyCurve(mode, std::move(pts), st.eps_min, st.eps_max);
}

}  // namespace

EnergyCurve::EnergyCurve(Mode mode, std::vector<CurvePoint> breakpoints, double spectrum_lo,
                         double spectrum_hi)
    : mode_(mode), pts_(std::move(breakpoints)), spectrum_lo_(spectrum_lo),
      spectrum_hi_(spectrum_hi) {
  if (pts_.empty()) throw std::invalid_argument("energy curve needs at least one breakpoint");
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    if (!(pts_[i].energy < pts_[i + 1].energy)) {
      throw std::invalid_argument("curve breakpoints must be strictly increasing in energy");
    }
  }
}

double EnergyCurve::evaluate(double energy) const {
  const double tol = 1e-12 * (spectrum_hi_ - spectrum_lo_ + 1.0);
  if (energy < spectrum_lo_ - tol || energy > spectrum_hi_ + tol) {
    throw std::invalid_argument("energy " + std::to_string(energy) +
                                " outside the spectrum range");
  }
  energy = std::clamp(energy, spectrum_lo_, spectrum_hi_);
  if (energy <= pts_.front().energy) {
    return energy == pts_.front().energy ? pts_.front().value : 0.0;
  }
  if (energy >= pts_.back().energy) {
    return energy == pts_.back().energy ? pts_.back().value : 0.0;
  }
  auto it = std::upper_bound(pts_.begin(), pts_.end(), energy,
                             [](double e, const CurvePoint& p) { return e < p.energy; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double p = (hi.energy - energy) / (hi.energy - lo.energy);
  return p * lo.value + (1.0 - p) * hi.value;
}

DiagonalState antipassive_vertex(const Spectrum& spec, int k) {
  const int d = spec.dim();
  if (k < 1 || k > d) throw std::invalid_argument("vertex index out of range");
  std::vector<double> p(static_cast<std::size_t>(d), 0.0);
  const double w = 1.0 / static_cast<double>(d + 1 - k);
  for (int i = k - 1; i < d; ++i) p[static_cast<std::size_t>(i)] = w;
  return DiagonalState(std::move(p));
}

DiagonalState passive_vertex(const Spectrum& spec, int k) {
  const int d = spec.dim();
  if (k < 1 || k > d) throw std::invalid_argument("vertex index out of range");
  std::vector<double> p(static_cast<std::size_t>(d), 0.0);
  const double w = 1.0 / static_cast<double>(k);
  for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = w;
  return DiagonalState(std::move(p));
}

EnergyCurve min_ergotropy_curve(const Spectrum& spec) { return build_curve(spec, Mode::Extract); }

EnergyCurve min_anti_ergotropy_curve(const Spectrum& spec) {
  return build_curve(spec, Mode::Inject);
}

MinimumStateWitness minimum_state(const EnergyCurve& curve, const Spectrum& spec, double energy) {
  const auto& pts = curve.breakpoints();
  const double tol = range_tol(spec);
  if (energy < pts.front().energy - tol || energy > pts.back().energy + tol) {
    throw std::invalid_argument("energy outside the nonzero domain of the minimum curve");
  }
  energy = std::clamp(energy, pts.front().energy, pts.back().energy);
  auto vertex_state = [&](int k) {
    return curve.mode() == Mode::Extract ? antipassive_vertex(spec, k) : passive_vertex(spec, k);
  };
  for (const auto& p : pts) {
    if (std::abs(energy - p.energy) <= tol) {
      return {p.vertex, p.vertex, 1.0, vertex_state(p.vertex)};
    }
  }
  auto it = std::upper_bound(pts.begin(), pts.end(), energy,
                             [](double e, const CurvePoint& p) { return e < p.energy; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double p = (hi.energy - energy) / (hi.energy - lo.energy);
  const auto low_state = vertex_state(lo.vertex);
  const auto high_state = vertex_state(hi.vertex);
  std::vector<double> mixed(static_cast<std::size_t>(spec.dim()));
  for (int i = 0; i < spec.dim(); ++i) {
    mixed[static_cast<std::size_t>(i)] = p * low_state.prob(i) + (1.0 - p) * high_state.prob(i);
  }
  return {lo.vertex, hi.vertex, p, DiagonalState(std::move(mixed))};
}

MinimumStateWitness min_ergotropy_state(const Spectrum& spec, double energy) {
  return minimum_state(min_ergotropy_curve(spec), spec, energy);
}

MinimumStateWitness min_anti_ergotropy_state(const Spectrum& spec, double energy) {
  return minimum_state(min_anti_ergotropy_curve(spec), spec, energy);
}

double max_ergotropy(const Spectrum& spec, double energy) {
  check_energy_in_spectrum(spec, energy);
  return clip_nonnegative(energy - spec.stats().eps_min, "maximum ergotropy");
}

double max_anti_ergotropy(const Spectrum& spec, double energy) {
  check_energy_in_spectrum(spec, energy);
  return clip_nonnegative(spec.stats().eps_max - energy, "maximum anti-ergotropy");
}

CoherentMax coherent_max(const Spectrum& spec, double energy) {
  check_energy_in_spectrum(spec, energy);
  const double erg = max_ergotropy(spec, energy) - min_ergotropy_curve(spec).evaluate(energy);
  const double anti =
      max_anti_ergotropy(spec, energy) - min_anti_ergotropy_curve(spec).evaluate(energy);
  return {clip_nonnegative(erg, "maximum coherent ergotropy"),
          clip_nonnegative(anti, "maximum coherent anti-ergotropy")};
}

double antisymmetric_closed_form(const Spectrum& spec, double energy, Mode mode) {
  if (!spec.antisymmetric_constant().has_value()) {
    throw std::invalid_argument("spectrum is not antisymmetric within tolerance");
  }
  check_energy_in_spectrum(spec, energy);
  const double mean = spec.stats().eps_mean;
  const double v = (mode == Mode::Extract) ? 2.0 * (energy - mean) : 2.0 * (mean - energy);
  return std::max(0.0, v);
}

}  // namespace ergokit
