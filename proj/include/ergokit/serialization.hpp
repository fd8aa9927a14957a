#pragma once

#include <string>
#include <variant>

#include "ergokit/ergotropy.hpp"
#include "ergokit/min_curve.hpp"
#include "ergokit/oracle.hpp"
#include "ergokit/protocols.hpp"

namespace ergokit {

// Numbers are emitted with 17 significant digits so every binary64 value
// round-trips and golden files stay byte-stable.
std::string format_number(double v);

std::string to_json(const Spectrum& spec);
std::string to_json(const DiagonalState& probs);
std::string to_json(const DensityMatrix& rho);
std::string to_json(const EnergyCurve& curve);
std::string to_json(const ErgotropyReport& report);
std::string to_json(const WorstCaseResult& result);
std::string to_json(const OracleReport& report);
std::string to_json(const RandomUnitaryChannel& channel);

std::string to_csv(const Spectrum& spec);
std::string to_csv(const EnergyCurve& curve);  // header "E,value"

Spectrum spectrum_from_json(const std::string& text);
Spectrum spectrum_from_csv(const std::string& text);

using StateVariant = std::variant<DiagonalState, DensityMatrix>;

// Accepts either the {"re": .., "im": ..} matrix object or a bare probability
// array; invariant violations surface as std::invalid_argument naming the
// failed invariant.
StateVariant state_from_json(const std::string& text);

RandomUnitaryChannel channel_from_json(const std::string& text);

}  // namespace ergokit
