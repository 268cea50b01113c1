#pragma once

#include <json.hpp>
#include <string>

#include "gapcert/gap_probe.hpp"
#include "gapcert/normality.hpp"
#include "gapcert/pmp.hpp"
#include "gapcert/problem.hpp"
#include "gapcert/qualifications.hpp"
#include "gapcert/solver.hpp"

namespace gapcert {

using Json = nlohmann::ordered_json;

Json poly_to_json(const Poly& p);
Poly poly_from_json(const Json& j);

Json set_to_json(const SetSpec& s);
SetSpec set_from_json(const Json& j);

Json problem_to_json(const ProblemSpec& p);
ProblemSpec problem_from_json(const Json& j);
ProblemSpec load_problem_file(const std::string& path);

/// Process CSV: header row, columns s, omega0, omega_1..m, alpha_1..q, y0,
/// y_1..n, nu. Rows are grid nodes; control columns carry the cell to the
/// node's right (repeated on the last row). Strict processes use the same
/// layout with s = t - t1, omega0 = 1, omega_j = du^j/dt, y0 = t, y = x,
/// nu = v.
void write_process_csv(const std::string& path, const ExtendedProcess& proc);
ExtendedProcess read_process_csv(const std::string& path);
void write_strict_csv(const std::string& path, const StrictProcess& proc);
StrictProcess read_strict_csv(const std::string& path);

Json multipliers_to_json(const MultiplierSet& m);
MultiplierSet multipliers_from_json(const Json& j);

Json to_json(const FeasibilityReport& r);
Json to_json(const PmpReport& r);
Json to_json(const ConditionReport& r);
Json to_json(const QualificationReport& r);
Json to_json(const NormalityVerdict& v);
Json to_json(const GapReport& r);
Json to_json(const CompositeVerdict& v);
Json solve_result_to_json(const SolveResult& r);

/// Minimal JSON-schema checker (type/properties/required/items/enum/
/// additionalProperties). Enough to keep the published report schemas honest.
bool validate_schema(const Json& value, const Json& schema, std::string* error = nullptr);

void write_text_file(const std::string& path, const std::string& content);
Json read_json_file(const std::string& path);

}  // namespace gapcert
