#pragma once

#include <stdexcept>
#include <string>

namespace ergokit {

// Validation tolerances shared by the state types.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

// Rounding noise below this magnitude is clipped to zero; anything worse is
// treated as a genuine inconsistency.
inline constexpr double kNegClip = 1e-10;

// All entropies are in bits; this is the only place the nat/bit conversion
// constant appears.
inline constexpr double kLn2 = 0.6931471805599453094;

enum class Mode { Extract, Inject };

inline const char* to_string(Mode mode) {
  return mode == Mode::Extract ? "extract" : "inject";
}

// A computed quantity violated a mathematical guarantee by more than rounding
// noise. Distinct from std::invalid_argument, which flags bad user input.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Values in [-kNegClip, 0) become 0; values below raise.
inline double clip_nonnegative(double value, const char* label) {
  if (value >= 0.0) return value;
  if (value >= -kNegClip) return 0.0;
  throw NumericalError(std::string(label) + " is negative beyond rounding noise: " +
                       std::to_string(value));
}

}  // namespace ergokit
