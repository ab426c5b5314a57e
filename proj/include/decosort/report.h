#pragma once

#include <string>

#include <json.hpp>

#include "decosort/checker.h"
#include "decosort/context.h"
#include "decosort/core.h"
#include "decosort/solver.h"

namespace decosort {

using Json = nlohmann::ordered_json;

// Root first, two spaces of indentation per premise depth, rule labels
// right-aligned in a trailing column.
std::string derivation_text(const Derivation& d);
std::string judgment_text(const Judgment& j);

std::string trace_text(const std::vector<SolveStep>& trace);

Json to_json(const TypeTerm& t);
Json to_json(const Constraint& c);
Json to_json(const ConstraintSet& cs);
Json to_json(const Substitution& s);
Json to_json(const Derivation& d);
Json to_json(const CheckError& e);
Json to_json(const Violation& v);
Json to_json(const SolveStep& s);
Json to_json(const SolveOutcome& o);

}  // namespace decosort
