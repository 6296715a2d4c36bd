#include "varadhan/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "varadhan/axioms.hpp"
#include "varadhan/convex_duality.hpp"
#include "varadhan/duality.hpp"
#include "varadhan/error.hpp"
#include "varadhan/io.hpp"
#include "varadhan/ldp_lab.hpp"
#include "log.hpp"

namespace vf::cli {

namespace {

using io::json;

struct Config {
  std::string functional_path, measure_path, rate_path, f_path, sequence_path;
  std::string schedule = "default";
  std::string property = "all";
  std::string format = "json";
  std::string output_path;
  double p = 0.5;
  double a = 0.130812;
  std::optional<double> tol;
  std::optional<double> cmax;
  std::optional<double> l0;
  int trials = 1000;
  std::uint64_t seed = 42;
  bool exact_gradient = false;
  bool closed_form = false;
};

// A finished command: the text to emit and the exit status it implies.
struct Outcome {
  std::string text;
  int code = kOk;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "--schedule: '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "--schedule is empty");
  return out;
}

PitSchedule pit_schedule(const Config& cfg) {
  PitSchedule s;
  if (cfg.schedule == "default") {
    int exponent = 40;
    if (cfg.cmax) {
      if (*cfg.cmax != std::floor(*cfg.cmax))
        throw Error(ErrorCode::InvalidArgument, "--cmax must be an integer exponent");
      exponent = static_cast<int>(*cfg.cmax);
    }
    s = PitSchedule::doubling(exponent);
  } else {
    s.depths = parse_list(cfg.schedule);
  }
  if (cfg.tol) s.stall_tolerance = *cfg.tol;
  s.validate();
  return s;
}

std::vector<int> scale_schedule(const Config& cfg) {
  const std::string text = cfg.schedule == "default" ? "16,64,256,1024,4096" : cfg.schedule;
  std::vector<int> out;
  for (double n : parse_list(text)) {
    if (n != std::floor(n) || n < 1) throw Error(ErrorCode::InvalidArgument, "--schedule: scales must be positive integers");
    out.push_back(static_cast<int>(n));
  }
  return out;
}

FunctionalHandle load_functional(const Config& cfg) {
  return io::functional_from_json(io::read_json_file(cfg.functional_path));
}

BoundedFunction load_function(const Config& cfg, const SpacePtr& space) {
  const json j = io::read_json_file(cfg.f_path);
  if (j.contains("tail")) {
    std::vector<double> grid;
    for (const auto& v : j.at("values")) grid.push_back(v.get<double>());
    return make_tail_function(space, std::move(grid), j.at("tail").get<double>());
  }
  return io::function_from_json(j, space);
}

AscentOptions ascent_options(const Config& cfg) {
  AscentOptions opts;
  opts.exact_gradient = cfg.exact_gradient;
  opts.closed_form = cfg.closed_form;
  if (cfg.tol) opts.grad_tolerance = *cfg.tol;
  return opts;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string scalar(const Config& cfg, const char* name, double value) {
  if (cfg.format == "csv") return std::string(name) + "\n" + format_number(value) + "\n";
  return dump(json{{name, io::extended(value)}});
}

Outcome cmd_eval(const Config& cfg) {
  const auto L = load_functional(cfg);
  return {scalar(cfg, "value", L(load_function(cfg, L.space())))};
}

Outcome cmd_dual(const Config& cfg) {
  const auto report = dual_rate(load_functional(cfg), pit_schedule(cfg));
  return {cfg.format == "csv" ? io::to_csv(report) : dump(io::to_json(report))};
}

Outcome cmd_reconstruct(const Config& cfg) {
  const json j = io::read_json_file(cfg.rate_path);
  const RateFunction rate = io::rate_from_json(j);
  double base = cfg.l0.value_or(0.0);
  if (!cfg.l0 && j.contains("L0")) base = io::read_extended(j["L0"], "L0");
  return {scalar(cfg, "value", reconstruct(rate, base, load_function(cfg, rate.space())))};
}

Outcome cmd_gap(const Config& cfg) {
  const auto L = load_functional(cfg);
  return {scalar(cfg, "gap", representation_gap(L, load_function(cfg, L.space()), pit_schedule(cfg)))};
}

Outcome report_outcome(const Config& cfg, const ConjugateReport& report) {
  std::string text;
  if (cfg.format == "csv") {
    text = "value,iterations,converged\n" + format_number(report.value) + "," +
           std::to_string(report.iterations) + "," + (report.converged ? "true" : "false") + "\n";
  } else {
    text = dump(io::to_json(report));
  }
  return {text, report.converged ? kOk : kNotConverged};
}

Outcome cmd_conjugate(const Config& cfg) {
  const auto L = load_functional(cfg);
  const auto raw = io::read_measure(cfg.measure_path);
  const ProbabilityMeasure mu(L.space(), std::vector<double>(raw.weights().begin(), raw.weights().end()));
  return report_outcome(cfg, conjugate_J(L, mu, ascent_options(cfg)));
}

Outcome cmd_recover(const Config& cfg) {
  const auto nu = io::read_measure(cfg.measure_path);
  MeasureRate rate = relative_entropy(nu);
  if (!cfg.exact_gradient) rate.gradient = nullptr;
  return report_outcome(cfg, recover_L_from_J(rate, cfg.l0.value_or(0.0),
                                              load_function(cfg, nu.space()), ascent_options(cfg)));
}

// F_n = F0 / 10^k for a nonnegative F0, or the tail witness family.
DecreasingSequence default_sequence(const Config& cfg, const FunctionalHandle& L) {
  std::vector<BoundedFunction> terms;
  const SpacePtr& space = L.space();
  if (L.name() == "tail_limsup") {
    double grid_max = 0.0;
    for (std::size_t i = 0; i + 1 < space->size(); ++i) grid_max = std::max(grid_max, *space->position(i));
    for (double n = 1.0; n <= 1e7 * std::max(1.0, grid_max); n *= 10.0) terms.push_back(tail_witness(space, n));
    return validate_decreasing(std::move(terms));
  }
  BoundedFunction base = BoundedFunction::constant(space, 1.0);
  if (!cfg.f_path.empty()) {
    const auto f = load_function(cfg, space);
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v) x = std::abs(x);
    base = BoundedFunction(space, std::move(v));
  }
  const double scale = std::max(1.0, base.max());
  for (double n = 1.0; n <= 1e7 * scale; n *= 10.0) terms.push_back(base.scaled(1.0 / n));
  return validate_decreasing(std::move(terms));
}

Outcome cmd_check(const Config& cfg) {
  const auto L = load_functional(cfg);
  const double tol = cfg.tol.value_or(kIdentityTolerance);
  std::vector<std::string> properties;
  if (cfg.property == "all")
    properties = {"monotone", "monotone_lattice", "translation", "maximal", "lipschitz", "inf_gap"};
  else
    properties = {cfg.property};

  json reports = json::array();
  bool violated = false;
  std::ostringstream csv;
  csv << "property,trials,violations,worst_violation\n";
  for (const auto& prop : properties) {
    json j;
    CheckReport r;
    if (prop == "monotone") r = check_monotone(L, cfg.trials, cfg.seed, tol);
    else if (prop == "monotone_lattice") r = check_monotone_lattice(L, cfg.trials, cfg.seed, tol);
    else if (prop == "translation") r = check_translation(L, cfg.trials, cfg.seed, tol);
    else if (prop == "maximal") r = check_maximal(L, cfg.trials, cfg.seed, tol);
    else if (prop == "lipschitz") r = check_lipschitz(L, cfg.trials, cfg.seed, tol);
    else if (prop == "inf_gap") r = check_inf_gap(L, cfg.trials, cfg.seed, tol);
    else if (prop == "const_preserving")
      r = check_const_preserving_implies_translation(L, cfg.trials, cfg.seed, tol);
    else if (prop == "sigma") {
      const auto sigma = check_sigma_continuity(L, default_sequence(cfg, L), tol);
      r = sigma.check;
      j = io::to_json(sigma);
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown property '" + prop + "'");
    }
    if (j.is_null()) j = io::to_json(r);
    violated = violated || !r.passed();
    reports.push_back(std::move(j));
    csv << r.property << ',' << r.trials << ',' << r.violations << ',' << format_number(r.worst_violation) << '\n';
  }
  std::string text = cfg.format == "csv" ? csv.str()
                                         : dump(reports.size() == 1 ? reports[0] : json{{"checks", reports}});
  return {text, violated ? kViolations : kOk};
}

MeasureSequence load_sequence(const Config& cfg) {
  if (!cfg.sequence_path.empty()) return io::ingest_sequence(cfg.sequence_path);
  return cramer_sequence(cfg.p, scale_schedule(cfg));
}

Outcome cmd_cramer(const Config& cfg) {
  const auto seq = load_sequence(cfg);
  const GridFunction f = cfg.f_path.empty()
                             ? GridFunction({0.0, 1.0}, {0.0, 1.0})
                             : io::grid_function_from_json(io::read_json_file(cfg.f_path));
  const auto report = estimate_limit(seq, f);
  std::string text = cfg.format == "csv" ? io::to_csv(report) : dump(io::to_json(report));
  return {text, report.converged ? kOk : kNotConverged};
}

Outcome cmd_tightness(const Config& cfg) {
  const auto rows = tightness_scan(load_sequence(cfg), cfg.a);
  return {cfg.format == "csv" ? io::to_csv(rows) : dump(io::to_json(rows))};
}

void error_line(std::ostream& err, std::string_view code, const std::string& message) {
  err << json{{"error", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for Varadhan functionals", "vf"};
  app.require_subcommand(1, 1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--output", cfg.output_path, "Write the report here instead of stdout");
    sub->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", cfg.tol, "Tolerance override");
    sub->add_option("--seed", cfg.seed, "Random seed");
  };
  auto functional = [&](CLI::App* sub) {
    sub->add_option("--functional", cfg.functional_path, "Functional descriptor (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto function = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--f", cfg.f_path, "Test function (JSON)")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto pits = [&](CLI::App* sub) {
    sub->add_option("--schedule", cfg.schedule, "Pit depths: comma list or 'default'");
    sub->add_option("--cmax", cfg.cmax, "Deepest pit as a power of two");
  };
  auto scales = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Bernoulli parameter");
    sub->add_option("--schedule", cfg.schedule, "Scales n: comma list or 'default'");
    sub->add_option("--sequence", cfg.sequence_path, "Measure sequence file (JSON or CSV)")
        ->check(CLI::ExistingFile);
  };
  auto measure = [&](CLI::App* sub) {
    sub->add_option("--measure", cfg.measure_path, "Measure (JSON weights or label,weight CSV)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_flag("--exact-gradient", cfg.exact_gradient, "Use closed-form gradients where available");
  };

  auto* eval = app.add_subcommand("eval", "Evaluate L(F)");
  functional(eval); function(eval, true); common(eval);

  auto* dual = app.add_subcommand("dual", "Rate function by the dual formula");
  functional(dual); pits(dual); common(dual);

  auto* rec = app.add_subcommand("reconstruct", "L0 + max(F - I) from a rate");
  rec->add_option("--rate", cfg.rate_path, "Rate (JSON)")->required()->check(CLI::ExistingFile);
  rec->add_option("--l0", cfg.l0, "Override L0");
  function(rec, true); common(rec);

  auto* gap = app.add_subcommand("gap", "Representation gap L(F) - reconstruction");
  functional(gap); function(gap, true); pits(gap); common(gap);

  auto* conj = app.add_subcommand("conjugate", "Measure-level conjugate J(mu)");
  functional(conj); measure(conj); common(conj);
  conj->add_flag("--closed-form", cfg.closed_form, "Use the functional's closed-form conjugate");

  auto* recover = app.add_subcommand("recover", "L(F) from J = KL(. || nu) by mirror ascent");
  measure(recover); function(recover, true); common(recover);
  recover->add_option("--l0", cfg.l0, "L0");

  auto* check = app.add_subcommand("check", "Certify functional axioms");
  functional(check); function(check, false); common(check);
  check->add_option("--property", cfg.property,
                    "monotone|monotone_lattice|translation|maximal|lipschitz|inf_gap|"
                    "const_preserving|sigma|all");
  check->add_option("--trials", cfg.trials, "Trials per property");

  auto* cramer = app.add_subcommand("cramer", "Scaled log-integrals along a Bernoulli sequence");
  scales(cramer); function(cramer, false); common(cramer);

  auto* tight = app.add_subcommand("tightness", "Sublevel diameters of the empirical rates");
  scales(tight); common(tight);
  tight->add_option("--a", cfg.a, "Sublevel threshold");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_line(err, "UsageError", std::string(e.what()) + " (run with --help)");
    return kInputError;
  }

  try {
    Outcome outcome;
    if (*eval) outcome = cmd_eval(cfg);
    else if (*dual) outcome = cmd_dual(cfg);
    else if (*rec) outcome = cmd_reconstruct(cfg);
    else if (*gap) outcome = cmd_gap(cfg);
    else if (*conj) outcome = cmd_conjugate(cfg);
    else if (*recover) outcome = cmd_recover(cfg);
    else if (*check) outcome = cmd_check(cfg);
    else if (*cramer) outcome = cmd_cramer(cfg);
    else outcome = cmd_tightness(cfg);

    if (cfg.output_path.empty()) {
      out << outcome.text;
    } else {
      std::ofstream file(cfg.output_path, std::ios::binary);
      if (!file) throw Error(ErrorCode::ParseError, "cannot write '" + cfg.output_path + "'");
      file << outcome.text;
    }
    logger().debug("exit code {}", outcome.code);
    return outcome.code;
  } catch (const Error& e) {
    error_line(err, to_string(e.code()), e.what());
    return kInputError;
  } catch (const json::exception& e) {
    error_line(err, "ParseError", e.what());
    return kInputError;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace vf::cli
