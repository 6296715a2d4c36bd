#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "varadhan/axioms.hpp"
#include "varadhan/convex_duality.hpp"
#include "varadhan/duality.hpp"
#include "varadhan/functionals.hpp"
#include "varadhan/ldp_lab.hpp"
#include "varadhan/space.hpp"

// JSON and CSV schemas. Extended reals are written as numbers, with +inf as
// the string "inf". All readers raise ParseError (with the offending field
// or CSV line) for malformed input and InvariantViolation for well-formed
// input that breaks a type invariant.
namespace vf::io {

using nlohmann::json;

json extended(double x);
double read_extended(const json& value, const std::string& field);

json read_json_file(const std::filesystem::path& path);

/// {"points": [labels], "metric": [[...]]}, both optional. Numeric points
/// without a metric form a line; other labels get the 0/1 metric unless a
/// metric is given. With no "points", a discrete space of `fallback_size`.
SpacePtr space_from_json(const json& j, std::size_t fallback_size = 0);
json space_to_json(const FiniteSpace& space);

/// {"values": [...]} on the given space (or one read from the same object).
BoundedFunction function_from_json(const json& j, const SpacePtr& space);
BoundedFunction function_from_json(const json& j);

/// {"weights": [...]}: any nonnegative, not-all-zero vector, normalized.
ProbabilityMeasure measure_from_json(const json& j);
ProbabilityMeasure measure_from_json(const json& j, const SpacePtr& space);
/// CSV rows "label,weight" (an optional header row is skipped).
ProbabilityMeasure measure_from_csv(std::istream& in);
ProbabilityMeasure read_measure(const std::filesystem::path& path);

/// {"rate": [r|"inf"], "L0": r, "points": ...}; DualReport JSON is accepted.
RateFunction rate_from_json(const json& j, const SpacePtr& space);
RateFunction rate_from_json(const json& j);

/// {"kind": "log_integral" | "sup_form" | "ldp_term" | "linear" | "tail_limsup", ...}
FunctionalHandle functional_from_json(const json& j);

/// {"grid": [...], "values": [...]}, or just "values" on a uniform grid of [0, 1].
GridFunction grid_function_from_json(const json& j);

json to_json(const DualReport& report);
std::string to_csv(const DualReport& report);

json to_json(const ConjugateReport& report);
json to_json(const CheckReport& report);
json to_json(const SigmaReport& report);

json to_json(const LimitReport& report);
/// Columns n,value; a final row "extrapolated,<a>".
std::string to_csv(const LimitReport& report);

json to_json(const std::vector<TightnessRow>& rows);
std::string to_csv(const std::vector<TightnessRow>& rows);

/// {"description": s, "entries": [{"n", "points", "weights", "log_weights"}]}
json to_json(const MeasureSequence& sequence);
MeasureSequence sequence_from_json(const json& j);
/// Columns n,point,weight with a header row.
std::string to_csv(const MeasureSequence& sequence);
MeasureSequence sequence_from_csv(std::istream& in);

/// Reads by extension: .csv as CSV, anything else as JSON. Weights whose sum
/// is within 1e-6 of 1 are renormalized.
MeasureSequence ingest_sequence(const std::filesystem::path& path);

}  // namespace vf::io
