#pragma once

#include <optional>
#include <vector>

#include "decosort/checker.h"
#include "decosort/context.h"
#include "decosort/core.h"

namespace decosort {

class FreshSupply {
 public:
  explicit FreshSupply(std::uint32_t first = 1) : next_(first) {}

  TypeVar fresh() { return TypeVar{next_++}; }
  std::uint32_t peek() const { return next_; }

 private:
  std::uint32_t next_;
};

struct InferResult {
  TypeTerm type;
  ConstraintSet constraints;
  Derivation derivation;
};

class InferOutcome {
 public:
  static InferOutcome ok(InferResult r) { return InferOutcome(std::move(r)); }
  static InferOutcome fail(CheckError e) { return InferOutcome(std::move(e)); }

  explicit operator bool() const { return result_.has_value(); }
  const InferResult& result() const { return *result_; }
  InferResult& result() { return *result_; }
  const CheckError& error() const { return *error_; }

 private:
  explicit InferOutcome(InferResult r) : result_(std::move(r)) {}
  explicit InferOutcome(CheckError e) : error_(std::move(e)) {}

  std::optional<InferResult> result_;
  std::optional<CheckError> error_;
};

// Γ for inference: the signature's declarations, ground typings kept, and a
// fresh variable for every other variable and star variable of the rule, in
// first-occurrence order.
Context init_context(const Signature& sig, const Rule& r, FreshSupply& fresh);

// Replaces annotation holes by fresh variables, left to right.
Rule fill_annotations(const Rule& r, FreshSupply& fresh);

InferOutcome infer_term(const Context& ctx, const Term& e, FreshSupply& fresh);
InferOutcome infer_cond(const Context& ctx, const Cond& c, FreshSupply& fresh);
InferOutcome infer_rule(const Context& ctx, const Rule& r, FreshSupply& fresh);

// One inference session: context initialisation, annotation filling, then
// constraint generation for the whole rule.
struct Inference {
  Context context;
  Rule rule;  // annotations filled
  InferOutcome outcome;
};
Inference infer(const Signature& sig, const Rule& r);

// σΓ and σr: the typings and annotations after substitution.
Context instantiate(const Context& ctx, const Substitution& sigma);
Rule instantiate(const Rule& r, const Substitution& sigma);

}  // namespace decosort
