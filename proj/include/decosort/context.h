#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "decosort/core.h"

namespace decosort {

// f : <s1^?, ..., sn^?> s^f
struct SynRank {
  std::string op;
  std::vector<DecoratedSort> domain;
  DecoratedSort codomain;

  static SynRank make(std::string op, const std::vector<std::string>& domain,
                      std::string codomain);
  bool operator==(const SynRank&) const = default;
};

// ℓ : <(s1^?)> s^ℓ
struct VariadicRank {
  std::string op;
  DecoratedSort elem;
  DecoratedSort codomain;

  static VariadicRank make(std::string op, std::string elem,
                           std::string codomain);
  bool operator==(const VariadicRank&) const = default;
};

// Raw declarations. May be ill-formed; Context::validate reports problems.
struct Signature {
  std::vector<Sort> sorts;
  std::vector<std::pair<Sort, Sort>> subsorts;  // (sub, super)
  std::vector<SynRank> syn_ranks;
  std::vector<VariadicRank> var_ranks;
  std::vector<std::pair<std::string, TypeTerm>> var_types;
  std::vector<std::pair<std::string, TypeTerm>> star_types;

  void add_sort(const std::string& name);
  void add_subsort(const std::string& sub, const std::string& super);
  void set_var_type(const std::string& name, TypeTerm t);
  void set_star_type(const std::string& name, TypeTerm t);
  void clear_typings();

  bool operator==(const Signature&) const = default;
};

struct Violation {
  enum class Kind {
    SubtypeCycle,
    MultipleInheritance,
    Overloading,
    DuplicateTyping,
    UnknownSort,
    UnknownDecoration,
  };
  Kind kind;
  std::string detail;
};

std::string violation_kind_name(Violation::Kind k);

// Γ: immutable once built. The subsort closure is computed at construction.
class Context {
 public:
  Context() = default;
  explicit Context(Signature sig);

  const Signature& signature() const { return sig_; }

  const SynRank* syn_rank(const std::string& op) const;
  const VariadicRank* variadic_rank(const std::string& op) const;
  bool has_operator(const std::string& op) const {
    return syn_rank(op) != nullptr || variadic_rank(op) != nullptr;
  }
  bool has_sort(const Sort& s) const { return sort_set_.count(s) > 0; }

  // Raw typing of a variable or star variable (Ground or Var).
  std::optional<TypeTerm> typing(const Term& var) const;

  // Ground type of a term as read off Γ; nullopt when undefined or when the
  // variable's typing is a type variable.
  std::optional<DecoratedSort> sortof(const Term& e) const;

  // Raw-typing extension of sortof used by constraint typing: variable
  // typings as declared (possibly Var), codomains for applications.
  std::optional<TypeTerm> typeof_raw(const Term& e) const;

  // Reflexive-transitive closure of the declared subsort edges.
  bool sort_leq(const Sort& a, const Sort& b) const;
  bool subtype_holds(const DecoratedSort& a, const DecoratedSort& b) const;

  // Least s such that a <:_s s^? and b <:_s s^?.
  std::optional<DecoratedSort> common_supersort(const DecoratedSort& a,
                                                const DecoratedSort& b) const;

  // Sorts in declaration order.
  const std::vector<Sort>& sorts() const { return sig_.sorts; }
  // Declared supersorts of s in closure order (s itself first).
  std::vector<Sort> ancestors(const Sort& s) const;

  std::vector<Violation> validate() const;

 private:
  Signature sig_;
  std::set<Sort> sort_set_;
  std::map<std::string, SynRank> syn_;
  std::map<std::string, VariadicRank> variadic_;
  std::map<std::string, TypeTerm> vars_;
  std::map<std::string, TypeTerm> stars_;
  std::map<Sort, std::set<Sort>> up_;  // reflexive-transitive closure
};

// Constraint satisfaction under σ and Γ. A subtype constraint with a
// residual type variable on either side is unsatisfied.
bool subst_satisfies(const Substitution& sigma, const Constraint& c,
                     const Context& ctx);
bool subst_satisfies(const Substitution& sigma, const ConstraintSet& cs,
                     const Context& ctx);

}  // namespace decosort
