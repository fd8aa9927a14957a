#include "ergokit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ergokit/oracle.hpp"
#include "ergokit/serialization.hpp"

namespace ergokit {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '[' || c == '{';
  }
  return false;
}

Spectrum load_spectrum(const std::string& source) {
  if (looks_like_json(source)) return spectrum_from_json(source);
  const std::string text = read_file(source);
  if (looks_like_json(text)) return spectrum_from_json(text);
  return spectrum_from_csv(text);
}

void validate_energies(const Spectrum& spec, const std::vector<double>& energies) {
  const auto st = spec.stats();
  const double tol = 1e-12 * (spec.span() + 1.0);
  for (double e : energies) {
    if (!(e >= st.eps_min - tol && e <= st.eps_max + tol)) {
      throw std::invalid_argument("energy " + format_number(e) + " outside [" +
                                  format_number(st.eps_min) + ", " + format_number(st.eps_max) +
                                  "]");
    }
  }
}

struct QutritParams {
  double eps;
  double delta;
};

// Recognizes spectra of the (0, (1+delta)eps, 2eps) family.
QutritParams qutrit_params_of(const Spectrum& spec) {
  if (spec.dim() != 3) throw std::invalid_argument("builtin:qutrit-opt needs a 3-level spectrum");
  const double tol = 1e-9 * (spec.span() + 1.0);
  if (std::abs(spec.level(0)) > tol) {
    throw std::invalid_argument("builtin:qutrit-opt needs the ground level at 0");
  }
  const double eps = 0.5 * spec.level(2);
  if (!(eps > 0.0)) throw std::invalid_argument("builtin:qutrit-opt needs eps > 0");
  return {eps, spec.level(1) / eps - 1.0};
}

RandomUnitaryChannel load_channel(const std::string& source, const Spectrum& spec,
                                  double energy) {
  if (source == "builtin:rev") return RandomUnitaryChannel(population_reversal(spec.dim()));
  if (source == "builtin:qutrit-opt") {
    const auto q = qutrit_params_of(spec);
    return RandomUnitaryChannel(
        qutrit_diag_optimal_unitary(q.eps, q.delta, energy, 0.0, 0.0, 0.0));
  }
  return channel_from_json(looks_like_json(source) ? source : read_file(source));
}

struct EvalRow {
  double energy;
  double min_erg;
  double min_anti;
  double max_erg;
  double max_anti;
  double coh_erg;
  double coh_anti;
  bool pinsker_defined;
  double pinsker_extract;
  double pinsker_inject;
};

EvalRow eval_row(const Spectrum& spec, double energy) {
  EvalRow row{};
  row.energy = energy;
  const auto erg_curve = min_ergotropy_curve(spec);
  const auto anti_curve = min_anti_ergotropy_curve(spec);
  row.min_erg = erg_curve.evaluate(energy);
  row.min_anti = anti_curve.evaluate(energy);
  row.max_erg = max_ergotropy(spec, energy);
  row.max_anti = max_anti_ergotropy(spec, energy);
  const auto coh = coherent_max(spec, energy);
  row.coh_erg = coh.ergotropy;
  row.coh_anti = coh.anti_ergotropy;
  const auto st = spec.stats();
  row.pinsker_defined = energy > st.eps_min && energy < st.eps_max;
  if (row.pinsker_defined) {
    row.pinsker_extract = pinsker_lower_bound(spec, energy, Mode::Extract);
    row.pinsker_inject = pinsker_lower_bound(spec, energy, Mode::Inject);
  }
  return row;
}

std::string eval_row_json(const EvalRow& r) {
  std::string out = "{\"energy\":" + format_number(r.energy);
  out += ",\"min_ergotropy\":" + format_number(r.min_erg);
  out += ",\"min_anti_ergotropy\":" + format_number(r.min_anti);
  out += ",\"max_ergotropy\":" + format_number(r.max_erg);
  out += ",\"max_anti_ergotropy\":" + format_number(r.max_anti);
  out += ",\"max_coherent_ergotropy\":" + format_number(r.coh_erg);
  out += ",\"max_coherent_anti_ergotropy\":" + format_number(r.coh_anti);
  out += ",\"pinsker_extract\":";
  out += r.pinsker_defined ? format_number(r.pinsker_extract) : "null";
  out += ",\"pinsker_inject\":";
  out += r.pinsker_defined ? format_number(r.pinsker_inject) : "null";
  return out + '}';
}

constexpr const char* kEvalCsvHeader =
    "E,min_ergotropy,min_anti_ergotropy,max_ergotropy,max_anti_ergotropy,"
    "max_coherent_ergotropy,max_coherent_anti_ergotropy,pinsker_extract,pinsker_inject";

std::string eval_row_csv(const EvalRow& r) {
  std::string out = format_number(r.energy);
  out += ',' + format_number(r.min_erg);
  out += ',' + format_number(r.min_anti);
  out += ',' + format_number(r.max_erg);
  out += ',' + format_number(r.max_anti);
  out += ',' + format_number(r.coh_erg);
  out += ',' + format_number(r.coh_anti);
  out += ',';
  if (r.pinsker_defined) out += format_number(r.pinsker_extract);
  out += ',';
  if (r.pinsker_defined) out += format_number(r.pinsker_inject);
  return out;
}

// Worst case of the diagonal-optimal protocol over all states, from the
// analytic penalty; identity region evaluates to 0.
double qutrit_diag_opt_worst(double eps, double delta, double energy) {
  const double e2 = (1.0 + delta) * eps;
  const double e3 = 2.0 * eps;
  const double mean = (e2 + e3) / 3.0;
  if (energy <= mean) return 0.0;
  const auto spec = qutrit_spectrum(eps, delta);
  const double min_erg = min_ergotropy_curve(spec).evaluate(energy);
  if (delta >= 0.0 && energy > 1.5 * mean) return qutrit_worst_rev(eps, delta, energy);
  return min_erg - qutrit_coherence_penalty(eps, delta, energy);
}

// Random spectra for the verification suites: gaps drawn in [0.5, 1] and
// rescaled, so levels are well separated relative to the grid resolution.
Spectrum random_verification_spectrum(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(0.5, 1.0);
  std::uniform_real_distribution<double> span(0.25, 0.5);
  std::vector<double> levels{0.0};
  for (int k = 1; k < dim; ++k) levels.push_back(levels.back() + gap(rng));
  const double scale = span(rng) / levels.back();
  for (double& v : levels) v *= scale;
  return Spectrum(std::move(levels));
}

struct VerifyCheck {
  OracleReport report;
  double tolerance;
  bool pass;
};

// Tracks the sample with the largest gap so the emitted report shows the
// worst pair actually observed.
struct WorstPair {
  double oracle = 0.0;
  double analytic = 0.0;
  double gap = -1.0;
  void update(double oracle_value, double analytic_value) {
    const double g = std::abs(oracle_value - analytic_value);
    if (g > gap) {
      gap = g;
      oracle = oracle_value;
      analytic = analytic_value;
    }
  }
};

std::vector<VerifyCheck> run_verify_suite(std::uint64_t seed, int spectra) {
  std::vector<VerifyCheck> checks;
  std::mt19937_64 rng(seed);

  {  // permutation oracle vs sorted-spectrum ergotropy
    WorstPair worst;
    std::size_t samples = 0;
    for (int i = 0; i < spectra * 10; ++i) {
      const int d = 2 + static_cast<int>(rng() % 5);
      const auto spec = random_verification_spectrum(d, rng());
      std::uniform_real_distribution<double> interior(0.05, 0.95);
      const double e = spec.stats().eps_min + interior(rng) * spec.span();
      const auto probs = sample_diagonal_state_at_energy(spec, e, rng());
      worst.update(ergotropy_permutation_oracle(probs, spec), ergotropy(probs, spec));
      ++samples;
    }
    checks.push_back({{worst.oracle, worst.analytic, worst.gap,
                       "permutation-oracle-vs-ergotropy", samples},
                      1e-12, worst.gap <= 1e-12});
  }

  {  // grid oracle vs minimum curve
    WorstPair worst;
    std::size_t samples = 0;
    for (int i = 0; i < spectra; ++i) {
      const int d = 2 + static_cast<int>(rng() % 3);
      const auto spec = random_verification_spectrum(d, rng());
      std::uniform_real_distribution<double> interior(0.05, 0.95);
      const double e = spec.stats().eps_min + interior(rng) * spec.span();
      worst.update(min_ergotropy_grid_oracle(spec, e, 400),
                   min_ergotropy_curve(spec).evaluate(e));
      ++samples;
    }
    checks.push_back(
        {{worst.oracle, worst.analytic, worst.gap, "grid-oracle-vs-min-curve", samples}, 2e-3,
         worst.gap <= 2e-3});
  }

  {  // sampled worst case must stay above the dual value
    WorstPair worst;
    double worst_violation = -1e300;
    std::size_t samples = 0;
    for (double delta : {-0.4, 0.0, 0.5}) {
      const auto spec = qutrit_spectrum(1.0, delta);
      const auto rev = RandomUnitaryChannel(population_reversal(3));
      for (double frac : {0.25, 0.5, 0.75}) {
        const double e = spec.stats().eps_min + frac * spec.span();
        for (Mode mode : {Mode::Extract, Mode::Inject}) {
          const double dual = worst_case_delta_E(rev, spec, e, mode).value;
          const double sampled = worst_case_sampling_oracle(rev, spec, e, 200, rng(), mode);
          if (dual - sampled > worst_violation) {
            worst_violation = dual - sampled;
            worst.gap = std::abs(sampled - dual);
            worst.oracle = sampled;
            worst.analytic = dual;
          }
          samples += 200;
        }
      }
    }
    checks.push_back({{worst.oracle, worst.analytic, worst.gap, "sampling-oracle-above-dual",
                       samples},
                      1e-8, worst_violation <= 1e-8});
  }

  {  // reversal extracts the same energy from every state of an antisymmetric spectrum
    const auto spec = Spectrum({0.0, 0.6, 2.0, 3.4, 4.0});
    const auto rev = RandomUnitaryChannel(population_reversal(5));
    WorstPair worst;
    std::size_t samples = 0;
    for (double frac : {0.3, 0.6, 0.9}) {
      const double e = spec.stats().eps_min + frac * spec.span();
      const double expected = 2.0 * (e - spec.stats().eps_mean);
      for (int i = 0; i < 200; ++i) {
        const auto rho = sample_state_at_energy(spec, e, rng());
        worst.update(delta_E(rho, rev, spec), expected);
        ++samples;
      }
    }
    checks.push_back({{worst.oracle, worst.analytic, worst.gap,
                       "antisymmetric-reversal-constancy", samples},
                      1e-10, worst.gap <= 1e-10});
  }

  return checks;
}

struct Options {
  std::string format = "json";
  std::string output = "-";
  std::uint64_t seed = 0;
};

void emit(const Options& opt, std::ostream& out, const std::string& payload) {
  if (opt.output == "-") {
    out << payload;
    if (!payload.empty() && payload.back() != '\n') out << '\n';
  } else {
    std::ofstream file(opt.output, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file: " + opt.output);
    file << payload;
    if (!payload.empty() && payload.back() != '\n') file << '\n';
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ERGOKIT_SEED")) {
    return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"energy-constrained ergotropy toolkit"};
  app.require_subcommand(1);

  Options opt;
  opt.seed = default_seed();
  app.add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", opt.output, "output path, - for stdout");
  app.add_option("--seed", opt.seed, "seed for randomized commands");

  std::string spectrum_src;
  std::string state_src;
  std::string channel_src;
  std::vector<double> energies;
  std::string mode_name = "extract";
  double eps = 1.0;
  double delta = 0.0;
  int grid = 101;
  int spectra = 40;

  // Global flags remain usable after the subcommand name.
  app.fallthrough();

  auto* curve_cmd = app.add_subcommand("curve", "minimum ergotropy / anti-ergotropy curve");
  curve_cmd->fallthrough();
  curve_cmd->add_option("--spectrum", spectrum_src, "inline JSON or file")->required();
  curve_cmd->add_option("--mode", mode_name)->check(CLI::IsMember({"extract", "inject"}));

  auto* eval_cmd = app.add_subcommand("eval", "bounds at given mean energies");
  eval_cmd->fallthrough();
  eval_cmd->add_option("--spectrum", spectrum_src)->required();
  eval_cmd->add_option("--energy", energies, "mean energy (repeatable)")->required();

  auto* ergotropy_cmd = app.add_subcommand("ergotropy", "point report for a state");
  ergotropy_cmd->fallthrough();
  ergotropy_cmd->add_option("--spectrum", spectrum_src)->required();
  ergotropy_cmd->add_option("--state", state_src, "state JSON file")->required();

  auto* protocol_cmd = app.add_subcommand("protocol", "worst case of a fixed channel");
  protocol_cmd->fallthrough();
  protocol_cmd->add_option("--spectrum", spectrum_src)->required();
  protocol_cmd->add_option("--energy", energies)->required();
  protocol_cmd->add_option("--channel", channel_src, "file, builtin:rev, or builtin:qutrit-opt")
      ->required();
  protocol_cmd->add_option("--mode", mode_name)->check(CLI::IsMember({"extract", "inject"}));

  auto* qutrit_cmd = app.add_subcommand("qutrit", "protocol comparison curves");
  qutrit_cmd->fallthrough();
  qutrit_cmd->add_option("--eps", eps)->required();
  qutrit_cmd->add_option("--delta", delta)->required();
  qutrit_cmd->add_option("--grid", grid)->check(CLI::Range(2, 1 << 24));

  auto* verify_cmd = app.add_subcommand("verify", "run the oracle suite");
  verify_cmd->fallthrough();
  verify_cmd->add_option("--spectra", spectra)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "{\"error\":\"" << json_escape(e.what()) << "\"}\n";
    return 1;
  }

  try {
    const Mode mode = (mode_name == "inject") ? Mode::Inject : Mode::Extract;

    if (curve_cmd->parsed()) {
      const auto spec = load_spectrum(spectrum_src);
      const auto curve =
          (mode == Mode::Extract) ? min_ergotropy_curve(spec) : min_anti_ergotropy_curve(spec);
      emit(opt, out, opt.format == "csv" ? to_csv(curve) : to_json(curve));
      return 0;
    }

    if (eval_cmd->parsed()) {
      const auto spec = load_spectrum(spectrum_src);
      validate_energies(spec, energies);
      std::string payload;
      if (opt.format == "csv") {
        payload = std::string(kEvalCsvHeader) + '\n';
        for (double e : energies) payload += eval_row_csv(eval_row(spec, e)) + '\n';
      } else if (energies.size() == 1) {
        payload = eval_row_json(eval_row(spec, energies.front()));
      } else {
        payload = "[";
        for (std::size_t i = 0; i < energies.size(); ++i) {
          if (i) payload += ',';
          payload += eval_row_json(eval_row(spec, energies[i]));
        }
        payload += ']';
      }
      emit(opt, out, payload);
      return 0;
    }

    if (ergotropy_cmd->parsed()) {
      const auto spec = load_spectrum(spectrum_src);
      const auto state = state_from_json(read_file(state_src));
      const DensityMatrix rho = std::holds_alternative<DensityMatrix>(state)
                                    ? std::get<DensityMatrix>(state)
                                    : DensityMatrix(std::get<DiagonalState>(state));
      const auto report = ergotropy_report(rho, spec);
      if (opt.format == "csv") {
        std::string payload =
            "ergotropy,anti_ergotropy,coherent_ergotropy,coherent_anti_ergotropy,mean_energy\n";
        payload += format_number(report.ergotropy) + ',' + format_number(report.anti_ergotropy) +
                   ',' + format_number(report.coherent_ergotropy) + ',' +
                   format_number(report.coherent_anti_ergotropy) + ',' +
                   format_number(report.mean_energy) + '\n';
        emit(opt, out, payload);
      } else {
        emit(opt, out, to_json(report));
      }
      return 0;
    }

    if (protocol_cmd->parsed()) {
      const auto spec = load_spectrum(spectrum_src);
      validate_energies(spec, energies);
      const double e = energies.front();
      const auto channel = load_channel(channel_src, spec, e);
      const auto result = worst_case_delta_E(channel, spec, e, mode);
      if (opt.format == "csv") {
        emit(opt, out, "value,dual_multiplier\n" + format_number(result.value) + ',' +
                           format_number(result.dual_multiplier) + '\n');
      } else {
        emit(opt, out, to_json(result));
      }
      return 0;
    }

    if (qutrit_cmd->parsed()) {
      const auto spec = qutrit_spectrum(eps, delta);
      const auto curve = min_ergotropy_curve(spec);
      std::string payload;
      const bool csv = opt.format == "csv";
      if (csv) {
        payload = "E,min_ergotropy,worst_rev,worst_diag_opt\n";
      } else {
        payload = "{\"eps\":" + format_number(eps) + ",\"delta\":" + format_number(delta) +
                  ",\"rows\":[";
      }
      for (int i = 0; i < grid; ++i) {
        const double e = 2.0 * eps * static_cast<double>(i) / static_cast<double>(grid - 1);
        const double m = curve.evaluate(e);
        const double rev = qutrit_worst_rev(eps, delta, e);
        const double diag_opt = qutrit_diag_opt_worst(eps, delta, e);
        if (csv) {
          payload += format_number(e) + ',' + format_number(m) + ',' + format_number(rev) + ',' +
                     format_number(diag_opt) + '\n';
        } else {
          if (i) payload += ',';
          payload += '[' + format_number(e) + ',' + format_number(m) + ',' + format_number(rev) +
                     ',' + format_number(diag_opt) + ']';
        }
      }
      if (!csv) payload += "]}";
      emit(opt, out, payload);
      return 0;
    }

    if (verify_cmd->parsed()) {
      const auto checks = run_verify_suite(opt.seed, spectra);
      std::string payload;
      bool all_pass = true;
      for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        std::string line = to_json(c.report);
        line.pop_back();  // reopen the object to append the verdict
        line += ",\"tolerance\":" + format_number(c.tolerance);
        line += std::string(",\"pass\":") + (c.pass ? "true" : "false") + "}";
        payload += line + '\n';
      }
      emit(opt, out, payload);
      return all_pass ? 0 : 2;
    }
  } catch (const std::exception& e) {
    err << "{\"error\":\"" << json_escape(e.what()) << "\"}\n";
    return 1;
  }
  return 1;
}

}  // namespace ergokit
