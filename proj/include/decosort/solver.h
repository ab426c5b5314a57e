#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "decosort/context.h"
#include "decosort/core.h"

namespace decosort {

struct Degree {
  std::size_t m = 0;  // constraints
  std::size_t n = 0;  // subtype constraints

  auto operator<=>(const Degree&) const = default;
};

Degree degree(const ConstraintSet& cs);

struct FailureHit {
  int rule = 0;  // 1..5
  std::vector<Constraint> witness;
};

// First error pattern found, rules tried in order, constraints (and pairs)
// in insertion order.
std::optional<FailureHit> detect_failure(const Context& ctx,
                                         const ConstraintSet& cs);

struct SolveStep {
  std::string rule;  // "1".."14", "7a", "7b"
  std::vector<Constraint> consumed;
  std::vector<Constraint> produced;
  std::optional<std::pair<TypeVar, TypeTerm>> binding;
  Degree before;
  Degree after;
};

class SolveOutcome {
 public:
  enum class Kind { Solved, Failed, Stuck };

  Kind kind = Kind::Solved;
  Substitution sigma;           // Solved
  FailureHit failure;           // Failed
  ConstraintSet residual;       // Stuck, and the set at the point of failure
  std::vector<SolveStep> trace;

  bool solved() const { return kind == Kind::Solved; }
  bool failed() const { return kind == Kind::Failed; }
  bool stuck() const { return kind == Kind::Stuck; }
};

std::string solve_kind_name(SolveOutcome::Kind k);

struct SolveOptions {
  // Bind variables left unconstrained by resolution to a default ground type
  // so that every variable of the input maps to a decorated sort.
  bool complete = true;
};

SolveOutcome solve(const Context& ctx, const ConstraintSet& cs,
                   const SolveOptions& opts = {});

// Default ground type used for completion: first declared sort, "?".
std::optional<DecoratedSort> default_ground(const Context& ctx);

}  // namespace decosort
