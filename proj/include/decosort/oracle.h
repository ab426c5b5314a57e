#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decosort/context.h"
#include "decosort/core.h"

namespace decosort {

// Every sort with "?", and s^op for each operator whose codomain is s, plus
// any other decorated sort named by a typing.
using GroundUniverse = std::vector<DecoratedSort>;
GroundUniverse ground_universe(const Context& ctx);

struct EnumOptions {
  std::uint64_t budget = 1'000'000;  // partial assignments explored
  std::size_t max_solutions = std::numeric_limits<std::size_t>::max();
  Substitution fixed;  // ground values forced on some variables
};

struct EnumResult {
  std::vector<Substitution> solutions;
  bool budget_exceeded = false;
  std::uint64_t explored = 0;
};

// All total ground assignments to V(C) drawn from the universe that satisfy C.
EnumResult enumerate_solutions(const Context& ctx, const ConstraintSet& cs,
                               const GroundUniverse& universe,
                               const EnumOptions& opts = {});

// Backward search over every instance of the checking rules. depth bounds
// the length of Sub/Gen chains; negative means number of sorts + 2.
bool derivation_search(const Context& ctx, const Term& e,
                       const DecoratedSort& target, int depth = -1);

// Re-checks each node of a checking derivation against its rule schema.
// Returns a description of the first bad node, if any.
std::optional<std::string> validate_derivation(const Context& ctx,
                                               const Derivation& d);

// No Sub node directly above another Sub node.
bool is_normal_form(const Derivation& d);

// Type variables mentioned in the root rule instance of a constraint-typing
// derivation: conclusion types of the node and its premises, and the
// variables of the constraints the node adds itself.
std::set<TypeVar> last_rule_vars(const Derivation& d);

struct GenParams {
  int size = 3;         // 0 gives the minimal instance
  bool simple = false;  // no subsorts, lists, star variables or decorations
  int noise = 8;        // percent chance of an arbitrary subterm
};

struct Instance {
  Signature signature;  // ground typings for every variable of the rule
  Rule rule;            // ground annotations
};

Instance gen_instance(std::uint64_t seed, const GenParams& params = {});

struct ConstraintGenParams {
  int vars = 4;
  int constraints = 6;
};

// Random constraint set over the ground universe of ctx.
ConstraintSet gen_constraints(std::uint64_t seed, const Context& ctx,
                              const ConstraintGenParams& params = {});

}  // namespace decosort
