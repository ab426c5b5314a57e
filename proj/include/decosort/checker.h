#pragma once

#include <optional>
#include <string>

#include "decosort/context.h"
#include "decosort/core.h"

namespace decosort {

struct CheckError {
  enum class Kind {
    NoRank,
    ArityMismatch,
    NotSubtype,
    UndeclaredVariable,
    StarOutsideList,
    ExpectedListType,
    UnresolvedAnnotation,
  };
  Kind kind;
  std::string path;  // e.g. "cond.pattern.2"
  std::string detail;
};

std::string check_error_kind_name(CheckError::Kind k);

class CheckOutcome {
 public:
  static CheckOutcome ok(Derivation d) { return CheckOutcome(std::move(d)); }
  static CheckOutcome fail(CheckError e) { return CheckOutcome(std::move(e)); }

  bool well_typed() const { return derivation_.has_value(); }
  explicit operator bool() const { return well_typed(); }

  const Derivation& derivation() const { return *derivation_; }
  Derivation& derivation() { return *derivation_; }
  const CheckError& error() const { return *error_; }

 private:
  explicit CheckOutcome(Derivation d) : derivation_(std::move(d)) {}
  explicit CheckOutcome(CheckError e) : error_(std::move(e)) {}

  std::optional<Derivation> derivation_;
  std::optional<CheckError> error_;
};

// Syntax-directed checking: the structural rule fixed by the term's shape,
// then at most one Gen and one Sub to reach the expected type.
CheckOutcome check_term(const Context& ctx, const Term& e,
                        const DecoratedSort& expected);
CheckOutcome check_cond(const Context& ctx, const Cond& c);
CheckOutcome check_rule(const Context& ctx, const Rule& r);

// Undecorated baseline without subtyping, lists or Gen.
CheckOutcome check_simple(const Context& ctx, const Rule& r);

// Action variables that do not occur in the condition.
std::vector<std::string> unbound_action_variables(const Rule& r);

}  // namespace decosort
