// Command-line front end for the riemannlab library.
//
// One binary, subcommand style:
//
//   riemann_lab potential --model quadratic --x 0:10:0.5
//   riemann_lab wkb       --model quadratic --rule standard --levels 0:3
//   riemann_lab solve     --model quadratic --levels 0:7
//   riemann_lab perturb   --levels 50:150 --scale 30 --zeros data/riemann_zeros.txt
//   riemann_lab compare   --window 15:300 --zeros data/riemann_zeros.txt
//   riemann_lab sweep     --levels 100:2000
//
// Every command writes one table (CSV by default, JSON with --format json)
// whose metadata block records the model, rule, zero count, numeric knobs,
// and tool version.  Runs with identical configuration produce byte-identical
// output.  Exit code is 0 only if every requested computation succeeded.

#include <cstdlib>
#include <exception>
#include <limits>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "riemannlab/riemannlab.hpp"

namespace {

using namespace riemannlab;

// All numeric defaults live here so a bare subcommand reproduces a sensible
// table and every knob is visible in --help.
struct RunConfig {
  std::string model = "quadratic";
  double epsilon = 0.1;        // power-near-harmonic softening
  int log_power = 1;           // log-corrected divisor power
  std::string s_mode = "term-sum";
  std::string rule = "standard";
  std::string zeros_path;      // empty: RIEMANN_LAB_ZEROS, else no table
  int zero_limit = 0;          // 0: whole table
  std::string x_spec = "2:100:1";
  std::string levels_spec = "0:9";
  double scale = 1.0;          // display multiplier for first-order shifts
  std::string window_spec = "15:300";
  int samples = 512;
  double x_max = 1.0;          // grid start; solver extends as needed
  int n_points = 4000;
  std::string method = "fd";
  std::string format = "csv";
  std::string output = "-";    // '-': stdout
};

std::pair<double, double> parse_pair(const std::string& spec,
                                     const char* what) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos || spec.find(':', colon + 1) != std::string::npos) {
    throw std::invalid_argument(std::string(what) + ": expected lo:hi, got '" +
                                spec + "'");
  }
  try {
    return {std::stod(spec.substr(0, colon)), std::stod(spec.substr(colon + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": expected lo:hi, got '" +
                                spec + "'");
  }
}

std::pair<int, int> parse_level_range(const std::string& spec) {
  const auto [lo, hi] = parse_pair(spec, "--levels");
  const int n_lo = static_cast<int>(lo);
  const int n_hi = static_cast<int>(hi);
  if (n_lo < 0 || n_hi < n_lo) {
    throw std::invalid_argument("--levels: empty level range '" + spec + "'");
  }
  return {n_lo, n_hi};
}

// start:stop:step, endpoints inclusive up to rounding slack.
std::vector<double> parse_grid(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = spec.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw std::invalid_argument("--x: expected start:stop:step, got '" + spec +
                                "'");
  }
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
  try {
    start = std::stod(spec.substr(0, first));
    stop = std::stod(spec.substr(first + 1, second - first - 1));
    step = std::stod(spec.substr(second + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("--x: expected start:stop:step, got '" + spec +
                                "'");
  }
  if (!(step > 0.0) || stop < start) {
    throw std::invalid_argument("--x: need step > 0 and stop >= start");
  }
  std::vector<double> xs;
  const double slack = stop + 1e-9 * step;
  for (int k = 0;; ++k) {
    const double x = start + k * step;
    if (x > slack) break;
    xs.push_back(x);
  }
  return xs;
}

QuantizationRule parse_rule(const std::string& name) {
  if (name == "standard") return QuantizationRule::maslov();
  if (name == "paper") return QuantizationRule::sommerfeld();
  throw std::invalid_argument("--rule: expected standard or paper, got '" +
                              name + "'");
}

SMode parse_s_mode(const std::string& name) {
  if (name == "term-sum") return SMode::TermSum;
  if (name == "block-integral") return SMode::BlockIntegral;
  if (name == "closed-form") return SMode::RiemannClosedForm;
  throw std::invalid_argument(
      "--s-mode: expected term-sum, block-integral or closed-form, got '" +
      name + "'");
}

GridMethod parse_method(const std::string& name) {
  if (name == "fd") return GridMethod::FiniteDifference;
  if (name == "numerov") return GridMethod::NumerovShooting;
  throw std::invalid_argument("--method: expected fd or numerov, got '" +
                              name + "'");
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("--format: expected csv or json, got '" + name +
                              "'");
}

// Flag beats environment; neither means "no table".
std::optional<std::string> resolve_zeros_path(const RunConfig& cfg) {
  if (!cfg.zeros_path.empty()) return cfg.zeros_path;
  if (const char* env = std::getenv("RIEMANN_LAB_ZEROS"); env && *env) {
    return std::string(env);
  }
  return std::nullopt;
}

ZeroSet load_zero_table(const RunConfig& cfg, bool required) {
  const auto path = resolve_zeros_path(cfg);
  if (!path) {
    if (required) {
      throw std::runtime_error(
          "no zero table: pass --zeros or set RIEMANN_LAB_ZEROS");
    }
    return {};
  }
  const std::size_t limit =
      cfg.zero_limit == 0 ? std::numeric_limits<std::size_t>::max()
                          : static_cast<std::size_t>(cfg.zero_limit);
  return load_zeros(*path, limit);
}

PotentialModel parse_model(const RunConfig& cfg, const ZeroSet& zeros) {
  if (cfg.model == "log") return PotentialModel::log_potential();
  if (cfg.model == "linear") return PotentialModel::linear();
  if (cfg.model == "quadratic") return PotentialModel::quadratic();
  if (cfg.model == "exponential") return PotentialModel::exponential();
  if (cfg.model == "power-near-harmonic") {
    return PotentialModel::power_near_harmonic(cfg.epsilon);
  }
  if (cfg.model == "log-corrected") {
    return PotentialModel::log_corrected(cfg.log_power);
  }
  if (cfg.model == "riemann-principal") {
    return PotentialModel::riemann_principal();
  }
  if (cfg.model == "riemann-full") {
    return PotentialModel::riemann_full(zeros, parse_s_mode(cfg.s_mode));
  }
  if (cfg.model == "riemann-integral-form") {
    return PotentialModel::riemann_integral_form(zeros);
  }
  throw std::invalid_argument("--model: unknown model '" + cfg.model + "'");
}

bool model_needs_zeros(const std::string& model) {
  return model == "riemann-full" || model == "riemann-integral-form";
}

// Run-level metadata shared by every table, prepended so the file starts
// with the same keys regardless of command.
void stamp(Table& table, const std::string& command, const RunConfig& cfg,
           std::size_t zero_count) {
  std::vector<std::pair<std::string, std::string>> head = {
      {"tool", kToolVersion},
      {"command", command},
      {"rule", cfg.rule},
      {"zeros", format_integer(static_cast<long long>(zero_count))},
  };
  table.metadata.insert(table.metadata.begin(), head.begin(), head.end());
}

void emit(const Table& table, const RunConfig& cfg) {
  const OutputFormat format = parse_format(cfg.format);
  if (cfg.output == "-") {
    write_table(table, format, std::cout);
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) {
    throw std::runtime_error("cannot open output file '" + cfg.output + "'");
  }
  write_table(table, format, out);
}

int run_potential(const RunConfig& cfg) {
  const bool needs_zeros = model_needs_zeros(cfg.model);
  const ZeroSet zeros = needs_zeros ? load_zero_table(cfg, true) : ZeroSet{};
  const PotentialModel model = parse_model(cfg, zeros);
  Table table = potential_table(model, parse_grid(cfg.x_spec));
  stamp(table, "potential", cfg, zeros.size());
  table.metadata.emplace_back("x", cfg.x_spec);
  emit(table, cfg);
  return 0;
}

int run_wkb(const RunConfig& cfg) {
  const bool needs_zeros = model_needs_zeros(cfg.model);
  const ZeroSet zeros = needs_zeros ? load_zero_table(cfg, true) : ZeroSet{};
  const PotentialModel model = parse_model(cfg, zeros);
  const auto [n_lo, n_hi] = parse_level_range(cfg.levels_spec);
  Table table = wkb_ladder_table(model, n_lo, n_hi, parse_rule(cfg.rule));
  stamp(table, "wkb", cfg, zeros.size());
  emit(table, cfg);
  return 0;
}

int run_solve(const RunConfig& cfg) {
  const bool needs_zeros = model_needs_zeros(cfg.model);
  const ZeroSet zeros = needs_zeros ? load_zero_table(cfg, true) : ZeroSet{};
  const PotentialModel model = parse_model(cfg, zeros);
  const auto [n_lo, n_hi] = parse_level_range(cfg.levels_spec);
  const GridSpec grid{cfg.x_max, cfg.n_points, parse_method(cfg.method)};
  const Spectrum spectrum = solve_spectrum(model, grid, n_hi + 1);
  Table table = spectrum_table(spectrum);
  table.metadata.emplace_back("model", variant_name(model));
  if (n_lo > 0) {
    table.rows.erase(table.rows.begin(), table.rows.begin() + n_lo);
  }
  stamp(table, "solve", cfg, zeros.size());
  table.metadata.emplace_back("tolerance",
                              format_number(kGridRelTolerance));
  emit(table, cfg);
  return 0;
}

int run_perturb(const RunConfig& cfg) {
  const ZeroSet zeros = load_zero_table(cfg, false);
  const PotentialModel model = parse_model(cfg, zeros);
  const auto [n_lo, n_hi] = parse_level_range(cfg.levels_spec);
  const std::vector<PerturbedLevel> levels =
      perturbed_spectrum(model, zeros, parse_s_mode(cfg.s_mode), n_lo, n_hi,
                         parse_rule(cfg.rule));
  Table table = perturbed_levels_table(levels, cfg.scale);
  table.metadata.emplace_back("model", variant_name(model));
  table.metadata.emplace_back("s_mode", cfg.s_mode);
  stamp(table, "perturb", cfg, zeros.size());
  emit(table, cfg);
  return 0;
}

int run_compare(const RunConfig& cfg) {
  const ZeroSet zeros = load_zero_table(cfg, true);
  const PotentialModel model = parse_model(cfg, zeros);
  const auto [e_lo, e_hi] = parse_pair(cfg.window_spec, "--window");
  const QuantizationRule rule = parse_rule(cfg.rule);
  // Enough levels to cover the window, plus slack for the rounding.
  const double phase_top = phase_integral(model, e_hi).phi;
  const int count =
      std::max(1, static_cast<int>(phase_top / (rule.mu * std::numbers::pi) -
                                   rule.nu) +
                      2);
  const std::vector<double> ladder = wkb_spectrum(model, count, rule);
  const CountComparison cmp =
      compare_counts(ladder, zeros, e_lo, e_hi, cfg.samples);
  Table table = comparison_table(cmp);
  table.metadata.emplace_back("model", variant_name(model));
  stamp(table, "compare", cfg, zeros.size());
  emit(table, cfg);
  return 0;
}

// Growth-law summary across the whole closed-form potential family, one row
// per variant, each fitted with the law suited to its counting curve.
int run_sweep(const RunConfig& cfg) {
  const auto [n_lo, n_hi] = parse_level_range(cfg.levels_spec);
  const QuantizationRule rule = parse_rule(cfg.rule);
  // A window holding k levels supports at most k independent counting
  // samples; oversampling a narrow window would only fabricate resolution.
  const int samples = std::min(cfg.samples, n_hi - n_lo + 1);
  const std::vector<std::pair<PotentialModel, DispersionLaw>> plan = {
      {PotentialModel::log_potential(), DispersionLaw::ExpLaw},
      {PotentialModel::linear(), DispersionLaw::PowerLaw},
      {PotentialModel::quadratic(), DispersionLaw::PowerLaw},
      {PotentialModel::exponential(), DispersionLaw::LogLaw},
      {PotentialModel::power_near_harmonic(cfg.epsilon),
       DispersionLaw::PowerLaw},
      {PotentialModel::log_corrected(cfg.log_power), DispersionLaw::PowerLaw},
  };
  std::vector<std::pair<std::string, DispersionFit>> fits;
  std::vector<std::string> failures;
  for (const auto& [model, law] : plan) {
    try {
      const double e_lo = wkb_eigenvalue(model, n_lo, rule);
      const double e_hi = wkb_eigenvalue(model, n_hi, rule);
      const CountingCurve curve =
          wkb_counting_curve(model, rule, e_lo, e_hi, samples);
      fits.emplace_back(variant_name(model), fit_dispersion(curve, law));
    } catch (const std::exception& ex) {
      failures.push_back(variant_name(model) + ": " + ex.what());
    }
  }
  Table table = sweep_table(fits);
  stamp(table, "sweep", cfg, 0);
  table.metadata.emplace_back("levels", cfg.levels_spec);
  table.metadata.emplace_back("samples", format_integer(samples));
  emit(table, cfg);
  for (const std::string& line : failures) {
    std::cerr << "error: " << line << '\n';
  }
  return failures.empty() ? 0 : 1;
}

void add_zero_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--zeros", cfg.zeros_path,
                  "zero-table path (default: $RIEMANN_LAB_ZEROS)");
  cmd->add_option("--zero-limit", cfg.zero_limit,
                  "use only the first K zeros (0: all)")
      ->check(CLI::NonNegativeNumber);
}

void add_model_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--model", cfg.model,
                  "log | linear | quadratic | exponential | "
                  "power-near-harmonic | log-corrected | riemann-principal | "
                  "riemann-full | riemann-integral-form")
      ->capture_default_str();
  cmd->add_option("--epsilon", cfg.epsilon,
                  "softening for power-near-harmonic")
      ->capture_default_str();
  cmd->add_option("--log-power", cfg.log_power,
                  "divisor power for log-corrected (1 or 2)")
      ->capture_default_str();
  cmd->add_option("--s-mode", cfg.s_mode,
                  "zero-sum evaluation: term-sum | block-integral | "
                  "closed-form")
      ->capture_default_str();
}

void add_output_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--format", cfg.format, "csv | json")->capture_default_str();
  cmd->add_option("--output", cfg.output, "output path ('-': stdout)")
      ->capture_default_str();
}

void add_rule_option(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--rule", cfg.rule, "quantization preset: standard | paper")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical laboratory for zeta-zero oscillator potentials"};
  app.require_subcommand(1);
  int rc = 0;
  const auto guard = [&rc](int (*fn)(const RunConfig&), const RunConfig& c) {
    return [fn, &c, &rc] {
      try {
        rc = fn(c);
      } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        rc = 1;
      }
    };
  };

  // Each subcommand owns its configuration so per-command defaults stay
  // independent.  Defaults are set before the options capture them.
  RunConfig pot_cfg;
  CLI::App* potential =
      app.add_subcommand("potential", "tabulate V(x) over an x grid");
  add_model_options(potential, pot_cfg);
  add_zero_options(potential, pot_cfg);
  add_output_options(potential, pot_cfg);
  potential->add_option("--x", pot_cfg.x_spec, "grid start:stop:step")
      ->capture_default_str();
  potential->callback(guard(run_potential, pot_cfg));

  RunConfig wkb_cfg;
  CLI::App* wkb = app.add_subcommand(
      "wkb", "semiclassical ladder: N, E_N, turning point, phase");
  add_model_options(wkb, wkb_cfg);
  add_zero_options(wkb, wkb_cfg);
  add_rule_option(wkb, wkb_cfg);
  add_output_options(wkb, wkb_cfg);
  wkb->add_option("--levels", wkb_cfg.levels_spec,
                  "inclusive level range lo:hi")
      ->capture_default_str();
  wkb->callback(guard(run_wkb, wkb_cfg));

  RunConfig solve_cfg;
  CLI::App* solve =
      app.add_subcommand("solve", "grid eigenvalues of the model Hamiltonian");
  add_model_options(solve, solve_cfg);
  add_zero_options(solve, solve_cfg);
  add_output_options(solve, solve_cfg);
  solve->add_option("--levels", solve_cfg.levels_spec,
                    "inclusive level range lo:hi")
      ->capture_default_str();
  solve->add_option("--x-max", solve_cfg.x_max, "minimum grid extent")
      ->capture_default_str();
  solve->add_option("--n-points", solve_cfg.n_points, "grid resolution")
      ->capture_default_str();
  solve->add_option("--method", solve_cfg.method, "fd | numerov")
      ->capture_default_str();
  solve->callback(guard(run_solve, solve_cfg));

  RunConfig pert_cfg;
  pert_cfg.model = "riemann-principal";
  pert_cfg.levels_spec = "50:150";
  CLI::App* perturb = app.add_subcommand(
      "perturb", "first-order level shifts from the zero-sum fluctuation");
  add_model_options(perturb, pert_cfg);
  add_zero_options(perturb, pert_cfg);
  add_rule_option(perturb, pert_cfg);
  add_output_options(perturb, pert_cfg);
  perturb->add_option("--levels", pert_cfg.levels_spec,
                      "inclusive level range lo:hi")
      ->capture_default_str();
  perturb->add_option("--scale", pert_cfg.scale,
                      "display multiplier for the scaled shift column")
      ->capture_default_str();
  perturb->callback(guard(run_perturb, pert_cfg));

  RunConfig cmp_cfg;
  cmp_cfg.model = "riemann-principal";
  CLI::App* compare = app.add_subcommand(
      "compare", "residuals between model counting and the zero staircase");
  add_model_options(compare, cmp_cfg);
  add_zero_options(compare, cmp_cfg);
  add_rule_option(compare, cmp_cfg);
  add_output_options(compare, cmp_cfg);
  compare->add_option("--window", cmp_cfg.window_spec, "energy window lo:hi")
      ->capture_default_str();
  compare->add_option("--samples", cmp_cfg.samples,
                      "sample count in the window")
      ->capture_default_str();
  compare->callback(guard(run_compare, cmp_cfg));

  RunConfig sweep_cfg;
  sweep_cfg.levels_spec = "100:2000";
  sweep_cfg.samples = 64;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "growth-law fits across the closed-form potential family");
  add_rule_option(sweep, sweep_cfg);
  add_output_options(sweep, sweep_cfg);
  sweep->add_option("--levels", sweep_cfg.levels_spec,
                    "level window lo:hi defining the fit range")
      ->capture_default_str();
  sweep->add_option("--samples", sweep_cfg.samples,
                    "counting samples in the window (clamped to the level count)")
      ->capture_default_str();
  sweep->add_option("--epsilon", sweep_cfg.epsilon,
                    "softening for the power-near-harmonic row")
      ->capture_default_str();
  sweep->add_option("--log-power", sweep_cfg.log_power,
                    "divisor power for the log-corrected row")
      ->capture_default_str();
  sweep->callback(guard(run_sweep, sweep_cfg));

  CLI11_PARSE(app, argc, argv);
  return rc;
}
