#include "ergokit/serialization.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ergokit {

namespace {

using nlohmann::json;

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw std::invalid_argument(std::string("malformed JSON for ") + what);
  }
  return j;
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(std::string(what) + " must be a non-empty JSON array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw std::invalid_argument(std::string(what) + " must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::MatrixXd real_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(std::string(what) + " must be a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) throw std::invalid_argument(std::string(what) + " rows must be arrays");
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = number_array(j[i], what);
    if (row.size() != cols) {
      throw std::invalid_argument(std::string(what) + " rows must have equal length");
    }
    for (std::size_t k = 0; k < cols; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
  }
  return m;
}

Eigen::MatrixXcd complex_matrix(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
    throw std::invalid_argument(std::string(what) +
                                " must be an object with \"re\" and \"im\" matrices");
  }
  const Eigen::MatrixXd re = real_matrix(j["re"], what);
  const Eigen::MatrixXd im = real_matrix(j["im"], what);
  if (re.rows() != im.rows() || re.cols() != im.cols()) {
    throw std::invalid_argument(std::string(what) + ": re and im shapes differ");
  }
  return re.cast<std::complex<double>>() +
         std::complex<double>(0.0, 1.0) * im.cast<std::complex<double>>();
}

void append_matrix(std::string& out, const Eigen::MatrixXcd& m) {
  auto append_part = [&out, &m](bool real_part) {
    out += '[';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i) out += ',';
      out += '[';
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        if (k) out += ',';
        out += format_number(real_part ? m(i, k).real() : m(i, k).imag());
      }
      out += ']';
    }
    out += ']';
  };
  out += "{\"re\":";
  append_part(true);
  out += ",\"im\":";
  append_part(false);
  out += '}';
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_json(const Spectrum& spec) {
  std::string out = "[";
  for (int k = 0; k < spec.dim(); ++k) {
    if (k) out += ',';
    out += format_number(spec.level(k));
  }
  return out + ']';
}

std::string to_json(const DiagonalState& probs) {
  std::string out = "[";
  for (int k = 0; k < probs.dim(); ++k) {
    if (k) out += ',';
    out += format_number(probs.prob(k));
  }
  return out + ']';
}

std::string to_json(const DensityMatrix& rho) {
  std::string out;
  append_matrix(out, rho.matrix());
  return out;
}

std::string to_json(const EnergyCurve& curve) {
  std::string out = "{\"mode\":\"";
  out += to_string(curve.mode());
  out += "\",\"breakpoints\":[";
  bool first = true;
  for (const auto& p : curve.breakpoints()) {
    if (!first) out += ',';
    first = false;
    out += '[';
    out += format_number(p.energy);
    out += ',';
    out += format_number(p.value);
    out += ']';
  }
  return out + "]}";
}

std::string to_json(const ErgotropyReport& report) {
  std::string out = "{\"ergotropy\":" + format_number(report.ergotropy);
  out += ",\"anti_ergotropy\":" + format_number(report.anti_ergotropy);
  out += ",\"coherent_ergotropy\":" + format_number(report.coherent_ergotropy);
  out += ",\"coherent_anti_ergotropy\":" + format_number(report.coherent_anti_ergotropy);
  out += ",\"mean_energy\":" + format_number(report.mean_energy);
  return out + '}';
}

std::string to_json(const WorstCaseResult& result) {
  std::string out = "{\"value\":" + format_number(result.value);
  out += ",\"dual_multiplier\":" + format_number(result.dual_multiplier);
  out += ",\"witness_state\":";
  append_matrix(out, result.witness_state.matrix());
  return out + '}';
}

std::string to_json(const OracleReport& report) {
  std::string out = "{\"method\":\"" + report.method + '"';
  out += ",\"oracle_value\":" + format_number(report.oracle_value);
  out += ",\"analytic_value\":" + format_number(report.analytic_value);
  out += ",\"abs_gap\":" + format_number(report.abs_gap);
  out += ",\"samples_or_cells\":" + std::to_string(report.samples_or_cells);
  return out + '}';
}

std::string to_json(const RandomUnitaryChannel& channel) {
  std::string out = "{\"members\":[";
  bool first = true;
  for (const auto& m : channel.members()) {
    if (!first) out += ',';
    first = false;
    std::string mat;
    append_matrix(mat, m.unitary.matrix());  // {"re":..,"im":..}
    out += "{\"weight\":" + format_number(m.weight) + ',' + mat.substr(1);
  }
  return out + "]}";
}

std::string to_csv(const Spectrum& spec) {
  std::string out;
  for (int k = 0; k < spec.dim(); ++k) {
    out += format_number(spec.level(k));
    out += '\n';
  }
  return out;
}

std::string to_csv(const EnergyCurve& curve) {
  std::string out = "E,value\n";
  for (const auto& p : curve.breakpoints()) {
    out += format_number(p.energy);
    out += ',';
    out += format_number(p.value);
    out += '\n';
  }
  return out;
}

Spectrum spectrum_from_json(const std::string& text) {
  return Spectrum(number_array(parse(text, "spectrum"), "spectrum"));
}

Spectrum spectrum_from_csv(const std::string& text) {
  std::vector<double> levels;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::size_t pos = 0;
    const double v = std::stod(line, &pos);
    levels.push_back(v);
  }
  if (levels.empty()) throw std::invalid_argument("spectrum CSV contains no numbers");
  return Spectrum(std::move(levels));
}

StateVariant state_from_json(const std::string& text) {
  const json j = parse(text, "state");
  if (j.is_array()) {
    return DiagonalState(number_array(j, "diagonal state"));
  }
  return DensityMatrix(complex_matrix(j, "density matrix"));
}

RandomUnitaryChannel channel_from_json(const std::string& text) {
  const json j = parse(text, "channel");
  if (!j.is_object() || !j.contains("members") || !j["members"].is_array() ||
      j["members"].empty()) {
    throw std::invalid_argument("channel JSON must contain a non-empty \"members\" array");
  }
  std::vector<WeightedUnitary> members;
  for (const auto& m : j["members"]) {
    if (!m.is_object() || !m.contains("weight") || !m["weight"].is_number()) {
      throw std::invalid_argument("channel member needs a numeric \"weight\"");
    }
    members.push_back({m["weight"].get<double>(), UnitaryChannel(complex_matrix(m, "unitary"))});
  }
  return RandomUnitaryChannel(std::move(members));
}

}  // namespace ergokit
