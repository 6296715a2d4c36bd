#include "varadhan/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "varadhan/error.hpp"

namespace vf::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object()) parse_error("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) parse_error(std::string("missing field '") + name + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_error("field '" + where + "' must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const json& j, const char* name) {
  const json& arr = field(j, name);
  if (!arr.is_array()) parse_error(std::string("field '") + name + "' must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(number(arr[i], std::string(name) + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> extended_array(const json& j, const char* name) {
  const json& arr = field(j, name);
  if (!arr.is_array()) parse_error(std::string("field '") + name + "' must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(read_extended(arr[i], std::string(name) + "[" + std::to_string(i) + "]"));
  return out;
}

std::string label_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  parse_error("point labels must be strings or numbers");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

double csv_number(const std::string& cell, std::size_t line, const char* name) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    parse_error("line " + std::to_string(line) + ", field " + name + ": '" + cell + "' is not a number");
  }
}

// Sums within this of 1 are treated as rounding in the file.
constexpr double kIngestTolerance = 1e-6;

ProbabilityMeasure ingest_measure(const SpacePtr& space, std::vector<double> weights,
                                  const std::string& where) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvariantViolation, where + ": negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kIngestTolerance)
    throw Error(ErrorCode::InvariantViolation, where + ": weights sum to " + format_number(sum));
  return make_measure(space, std::move(weights));
}

std::string csv_extended(double x) { return format_number(x); }

}  // namespace

json extended(double x) {
  if (x == kInfinity) return "inf";
  return x;
}

double read_extended(const json& value, const std::string& where) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") return kInfinity;
    parse_error("field '" + where + "' must be a number or \"inf\"");
  }
  return number(value, where);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

// --- spaces, functions, measures --------------------------------------------

SpacePtr space_from_json(const json& j, std::size_t fallback_size) {
  if (!j.is_object() || !j.contains("points")) {
    if (fallback_size == 0) parse_error("missing field 'points'");
    return FiniteSpace::discrete(fallback_size);
  }
  const json& points = j["points"];
  if (!points.is_array() || points.empty()) parse_error("field 'points' must be a nonempty array");

  std::vector<std::string> labels;
  bool numeric = true;
  for (const auto& p : points) {
    labels.push_back(label_of(p));
    numeric = numeric && p.is_number();
  }
  if (j.contains("metric")) {
    const json& metric = j["metric"];
    if (!metric.is_array()) parse_error("field 'metric' must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < metric.size(); ++r) {
      if (!metric[r].is_array()) parse_error("metric row " + std::to_string(r) + " must be an array");
      std::vector<double> row;
      for (std::size_t c = 0; c < metric[r].size(); ++c)
        row.push_back(number(metric[r][c], "metric[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
      rows.push_back(std::move(row));
    }
    return FiniteSpace::from_matrix(std::move(labels), rows);
  }
  if (numeric) {
    std::vector<double> coords;
    for (const auto& p : points) coords.push_back(p.get<double>());
    return FiniteSpace::line(std::move(coords), std::move(labels));
  }
  return FiniteSpace::discrete(std::move(labels));
}

json space_to_json(const FiniteSpace& space) {
  json out;
  json points = json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto pos = space.position(i);
    if (space.metric_kind() == FiniteSpace::MetricKind::Line && pos && std::isfinite(*pos) &&
        space.ideal_count() == 0)
      points.push_back(*pos);
    else
      points.push_back(space.label(i));
  }
  out["points"] = std::move(points);
  if (space.metric_kind() == FiniteSpace::MetricKind::Matrix) {
    json metric = json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < space.size(); ++k) row.push_back(space.distance(i, k));
      metric.push_back(std::move(row));
    }
    out["metric"] = std::move(metric);
  }
  return out;
}

BoundedFunction function_from_json(const json& j, const SpacePtr& space) {
  return BoundedFunction(space, number_array(j, "values"));
}

BoundedFunction function_from_json(const json& j) {
  auto values = number_array(j, "values");
  auto space = space_from_json(j, values.size());
  return BoundedFunction(std::move(space), std::move(values));
}

ProbabilityMeasure measure_from_json(const json& j, const SpacePtr& space) {
  return make_measure(space, number_array(j, "weights"));
}

ProbabilityMeasure measure_from_json(const json& j) {
  auto weights = number_array(j, "weights");
  auto space = space_from_json(j, weights.size());
  return make_measure(std::move(space), std::move(weights));
}

ProbabilityMeasure measure_from_csv(std::istream& in) {
  std::vector<std::string> labels;
  std::vector<double> weights;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2)
      parse_error("line " + std::to_string(line_no) + ": expected 'label,weight'");
    if (line_no == 1 && cells[1] == "weight") continue;
    labels.push_back(cells[0]);
    weights.push_back(csv_number(cells[1], line_no, "weight"));
  }
  if (labels.empty()) parse_error("measure CSV has no rows");
  return make_measure(FiniteSpace::discrete(std::move(labels)), std::move(weights));
}

ProbabilityMeasure read_measure(const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    std::ifstream in(path);
    if (!in) parse_error("cannot open '" + path.string() + "'");
    return measure_from_csv(in);
  }
  return measure_from_json(read_json_file(path));
}

RateFunction rate_from_json(const json& j, const SpacePtr& space) {
  return RateFunction(space, extended_array(j, "rate"));
}

RateFunction rate_from_json(const json& j) {
  auto values = extended_array(j, "rate");
  auto space = space_from_json(j, values.size());
  return RateFunction(std::move(space), std::move(values));
}

// --- functional descriptors -------------------------------------------------

FunctionalHandle functional_from_json(const json& j) {
  const json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) parse_error("field 'kind' must be a string");
  const std::string kind = kind_field.get<std::string>();

  if (kind == "log_integral") {
    const double mass = j.contains("mass") ? number(j["mass"], "mass") : 1.0;
    return log_integral(measure_from_json(j), mass);
  }
  if (kind == "ldp_term") {
    const double n = number(field(j, "n"), "n");
    if (n != std::floor(n) || n < 1) parse_error("field 'n' must be a positive integer");
    return ldp_term(measure_from_json(j), static_cast<int>(n));
  }
  if (kind == "linear") return linear(measure_from_json(j));
  if (kind == "sup_form") {
    const double base = j.contains("L0") ? number(j["L0"], "L0") : 0.0;
    return sup_form(rate_from_json(j), base);
  }
  if (kind == "tail_limsup") return tail_limsup(FiniteSpace::half_line(number_array(j, "grid")));
  parse_error("unknown functional kind '" + kind + "'");
}

GridFunction grid_function_from_json(const json& j) {
  auto values = number_array(j, "values");
  if (j.contains("grid")) return GridFunction(number_array(j, "grid"), std::move(values));
  if (values.size() < 2) parse_error("a grid function needs at least two values");
  std::vector<double> grid(values.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = static_cast<double>(i) / static_cast<double>(grid.size() - 1);
  return GridFunction(std::move(grid), std::move(values));
}

// --- reports ------------------------------------------------------------------

json to_json(const DualReport& report) {
  json out;
  out["L0"] = report.base_value;
  json rate = json::array();
  for (double v : report.rate.values()) rate.push_back(extended(v));
  out["rate"] = std::move(rate);
  json conv = json::array();
  for (const auto& c : report.convergence)
    conv.push_back({{"depth", c.depth}, {"increment", c.increment}, {"divergent", c.divergent}});
  out["convergence"] = std::move(conv);
  return out;
}

std::string to_csv(const DualReport& report) {
  std::ostringstream os;
  os << "point,rate,depth,increment,divergent\n";
  const auto& space = *report.rate.space();
  for (std::size_t i = 0; i < report.rate.size(); ++i) {
    const auto& c = report.convergence[i];
    os << space.label(i) << ',' << csv_extended(report.rate[i]) << ',' << format_number(c.depth) << ','
       << format_number(c.increment) << ',' << (c.divergent ? "true" : "false") << '\n';
  }
  os << "L0," << format_number(report.base_value) << ",,,\n";
  return os.str();
}

json to_json(const ConjugateReport& report) {
  json out;
  out["value"] = extended(report.value);
  json maximizer = json::array();
  if (const auto* f = std::get_if<BoundedFunction>(&report.maximizer)) {
    for (double v : f->values()) maximizer.push_back(v);
  } else if (const auto* mu = std::get_if<ProbabilityMeasure>(&report.maximizer)) {
    for (double v : mu->weights()) maximizer.push_back(v);
  }
  out["maximizer"] = std::move(maximizer);
  out["iterations"] = report.iterations;
  out["converged"] = report.converged;
  return out;
}

json to_json(const CheckReport& report) {
  json out;
  out["property"] = report.property;
  out["trials"] = report.trials;
  out["violations"] = report.violations;
  out["worst_violation"] = report.worst_violation;
  out["tolerance"] = report.tolerance;
  out["seed"] = report.seed;
  json witness = json::array();
  for (const auto& f : report.witness) witness.push_back(json{{"values", f.values()}});
  out["witness"] = std::move(witness);
  out["witness_scalars"] = report.witness_scalars;
  return out;
}

json to_json(const SigmaReport& report) {
  json out = to_json(report.check);
  out["trajectory"] = report.trajectory;
  out["L0"] = report.base_value;
  return out;
}

json to_json(const LimitReport& report) {
  json out;
  json terms = json::array();
  for (const auto& t : report.terms) terms.push_back({{"n", t.n}, {"value", t.value}});
  out["terms"] = std::move(terms);
  out["extrapolated"] = report.extrapolated;
  out["converged"] = report.converged;
  out["fit_slope"] = report.fit_slope;
  out["fit_residual"] = report.fit_residual;
  return out;
}

std::string to_csv(const LimitReport& report) {
  std::ostringstream os;
  os << "n,value\n";
  for (const auto& t : report.terms) os << t.n << ',' << format_number(t.value) << '\n';
  os << "extrapolated," << format_number(report.extrapolated) << '\n';
  return os.str();
}

json to_json(const std::vector<TightnessRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back({{"n", r.n}, {"points", r.points}, {"diameter", r.diameter}});
  return out;
}

std::string to_csv(const std::vector<TightnessRow>& rows) {
  std::ostringstream os;
  os << "n,points,diameter\n";
  for (const auto& r : rows) os << r.n << ',' << r.points << ',' << format_number(r.diameter) << '\n';
  return os.str();
}

// --- measure sequences --------------------------------------------------------

json to_json(const MeasureSequence& sequence) {
  json out;
  out["description"] = sequence.description;
  json entries = json::array();
  for (const auto& e : sequence.entries) {
    json entry = space_to_json(*e.space());
    entry["n"] = e.n;
    entry["weights"] = e.measure.weights();
    json lw = json::array();
    for (double v : e.measure.log_weights()) {
      if (v == -kInfinity) lw.push_back("-inf");
      else lw.push_back(v);
    }
    entry["log_weights"] = std::move(lw);
    entries.push_back(std::move(entry));
  }
  out["entries"] = std::move(entries);
  return out;
}

MeasureSequence sequence_from_json(const json& j) {
  MeasureSequence seq;
  if (j.contains("description")) {
    if (!j["description"].is_string()) parse_error("field 'description' must be a string");
    seq.description = j["description"].get<std::string>();
  }
  const json& entries = field(j, "entries");
  if (!entries.is_array()) parse_error("field 'entries' must be an array");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const json& e = entries[k];
    const std::string where = "entries[" + std::to_string(k) + "]";
    const double n = number(field(e, "n"), where + ".n");
    if (n != std::floor(n)) parse_error(where + ".n must be an integer");
    auto space = space_from_json(e);
    if (e.contains("log_weights")) {
      const json& arr = e["log_weights"];
      if (!arr.is_array()) parse_error(where + ".log_weights must be an array");
      std::vector<double> lw;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (arr[i].is_string() && arr[i].get<std::string>() == "-inf") lw.push_back(-kInfinity);
        else lw.push_back(number(arr[i], where + ".log_weights[" + std::to_string(i) + "]"));
      }
      auto mu = ProbabilityMeasure::from_log_weights(space, std::move(lw));
      if (std::abs(std::log(mu.normalization())) > kIngestTolerance)
        throw Error(ErrorCode::InvariantViolation, where + ": log-weights do not normalize");
      seq.entries.push_back({static_cast<int>(n), std::move(mu)});
    } else {
      seq.entries.push_back({static_cast<int>(n), ingest_measure(space, number_array(e, "weights"), where)});
    }
  }
  seq.validate();
  return seq;
}

std::string to_csv(const MeasureSequence& sequence) {
  std::ostringstream os;
  os << "n,point,weight\n";
  for (const auto& e : sequence.entries)
    for (std::size_t i = 0; i < e.measure.size(); ++i)
      os << e.n << ',' << e.space()->label(i) << ',' << format_number(e.measure[i]) << '\n';
  return os.str();
}

MeasureSequence sequence_from_csv(std::istream& in) {
  struct Block {
    int n;
    std::vector<std::string> labels;
    std::vector<double> weights;
  };
  std::vector<Block> blocks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (line_no == 1 && !cells.empty() && cells[0] == "n") continue;
    if (cells.size() != 3) parse_error("line " + std::to_string(line_no) + ": expected 'n,point,weight'");
    const double n = csv_number(cells[0], line_no, "n");
    if (n != std::floor(n)) parse_error("line " + std::to_string(line_no) + ", field n: not an integer");
    if (blocks.empty() || blocks.back().n != static_cast<int>(n)) blocks.push_back({static_cast<int>(n), {}, {}});
    blocks.back().labels.push_back(cells[1]);
    blocks.back().weights.push_back(csv_number(cells[2], line_no, "weight"));
  }

  MeasureSequence seq;
  for (auto& b : blocks) {
    // Numeric labels become grid points on the line.
    std::vector<double> coords;
    bool numeric = true;
    for (const auto& l : b.labels) {
      try {
        std::size_t used = 0;
        coords.push_back(std::stod(l, &used));
        numeric = numeric && used == l.size();
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    auto space = numeric ? FiniteSpace::line(std::move(coords), b.labels)
                         : FiniteSpace::discrete(b.labels);
    seq.entries.push_back(
        {b.n, ingest_measure(space, std::move(b.weights), "n=" + std::to_string(b.n))});
  }
  seq.validate();
  return seq;
}

MeasureSequence ingest_sequence(const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    std::ifstream in(path);
    if (!in) parse_error("cannot open '" + path.string() + "'");
    return sequence_from_csv(in);
  }
  return sequence_from_json(read_json_file(path));
}

}  // namespace vf::io
