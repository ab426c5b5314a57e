#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace decosort {

struct Sort {
  std::string name;

  auto operator<=>(const Sort&) const = default;
};

// A decoration is either the head symbol of a term or the "?" marker.
struct Decoration {
  std::optional<std::string> symbol;

  static Decoration any() { return {}; }
  static Decoration of(std::string op) { return {std::move(op)}; }

  bool is_any() const { return !symbol.has_value(); }

  auto operator<=>(const Decoration&) const = default;
};

struct DecoratedSort {
  Sort sort;
  Decoration deco;

  static DecoratedSort any(std::string sort) {
    return {Sort{std::move(sort)}, Decoration::any()};
  }
  static DecoratedSort of(std::string sort, std::string op) {
    return {Sort{std::move(sort)}, Decoration::of(std::move(op))};
  }

  // s^g -> s^?
  DecoratedSort generalized() const { return {sort, Decoration::any()}; }

  auto operator<=>(const DecoratedSort&) const = default;
};

struct TypeVar {
  std::uint32_t id = 0;

  auto operator<=>(const TypeVar&) const = default;
};

// The sort concluding condition- and rule-level judgments.
struct Wt {
  auto operator<=>(const Wt&) const = default;
};

class TypeTerm {
 public:
  TypeTerm() : value_(Wt{}) {}
  TypeTerm(TypeVar v) : value_(v) {}
  TypeTerm(DecoratedSort s) : value_(std::move(s)) {}
  TypeTerm(Wt w) : value_(w) {}

  static TypeTerm var(std::uint32_t id) { return TypeVar{id}; }
  static TypeTerm wt() { return Wt{}; }
  // An omitted annotation or `?` typing, filled with a fresh variable before
  // inference. Fresh identifiers start at 1.
  static TypeTerm hole() { return TypeVar{0}; }

  bool is_var() const { return std::holds_alternative<TypeVar>(value_); }
  bool is_ground() const {
    return std::holds_alternative<DecoratedSort>(value_);
  }
  bool is_wt() const { return std::holds_alternative<Wt>(value_); }
  bool is_hole() const { return is_var() && as_var().id == 0; }

  TypeVar as_var() const { return std::get<TypeVar>(value_); }
  const DecoratedSort& as_ground() const {
    return std::get<DecoratedSort>(value_);
  }

  auto operator<=>(const TypeTerm&) const = default;

 private:
  std::variant<TypeVar, DecoratedSort, Wt> value_;
};

enum class TermKind { Var, StarVar, SynApp, ListApp };

struct Term {
  TermKind kind = TermKind::Var;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name) { return {TermKind::Var, std::move(name), {}}; }
  static Term star(std::string name) {
    return {TermKind::StarVar, std::move(name), {}};
  }
  static Term app(std::string op, std::vector<Term> args = {}) {
    return {TermKind::SynApp, std::move(op), std::move(args)};
  }
  static Term list(std::string op, std::vector<Term> args = {}) {
    return {TermKind::ListApp, std::move(op), std::move(args)};
  }

  bool is_variable() const {
    return kind == TermKind::Var || kind == TermKind::StarVar;
  }

  // The list ℓ(e1,...,e_{n-1}) obtained by dropping the last argument.
  Term prefix() const;

  bool operator==(const Term&) const = default;
};

struct Cond {
  enum class Kind { Match, Conj };

  Kind kind = Kind::Match;
  // Match
  Term pattern;
  Term subject;
  TypeTerm at;
  // Conj
  std::vector<Cond> members;

  static Cond match(Term pattern, Term subject, TypeTerm at) {
    return {Kind::Match, std::move(pattern), std::move(subject), std::move(at), {}};
  }
  static Cond conj(std::vector<Cond> members) {
    return {Kind::Conj, {}, {}, {}, std::move(members)};
  }

  bool operator==(const Cond&) const = default;
};

struct Rule {
  Cond cond;
  std::vector<Term> action;

  bool operator==(const Rule&) const = default;
};

struct Constraint {
  enum class Kind { Eq, Sub };

  Kind kind = Kind::Eq;
  TypeTerm lhs;
  TypeTerm rhs;

  static Constraint eq(TypeTerm l, TypeTerm r) {
    return {Kind::Eq, std::move(l), std::move(r)};
  }
  static Constraint sub(TypeTerm l, TypeTerm r) {
    return {Kind::Sub, std::move(l), std::move(r)};
  }

  bool is_eq() const { return kind == Kind::Eq; }
  bool is_sub() const { return kind == Kind::Sub; }

  auto operator<=>(const Constraint&) const = default;
};

// Insertion-ordered set of constraints.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(std::initializer_list<Constraint> cs);

  // Returns false if the constraint was already present.
  bool insert(const Constraint& c);
  void insert_all(const ConstraintSet& other);
  bool contains(const Constraint& c) const { return index_.count(c) > 0; }
  void erase_at(std::size_t i);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Constraint& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<Constraint>& items() const { return items_; }

  // Order-insensitive equality.
  bool same_elements(const ConstraintSet& other) const {
    return index_ == other.index_;
  }
  bool operator==(const ConstraintSet& other) const {
    return items_ == other.items_;
  }

 private:
  std::vector<Constraint> items_;
  std::set<Constraint> index_;
};

class Substitution {
 public:
  void bind(TypeVar v, TypeTerm t);
  const TypeTerm* lookup(TypeVar v) const;
  bool contains(TypeVar v) const { return bindings_.count(v) > 0; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<TypeVar, TypeTerm>& bindings() const { return bindings_; }

  // Chases bindings to a fixed point.
  TypeTerm apply(const TypeTerm& t) const;
  Constraint apply(const Constraint& c) const;

  // Rewrites every image to its fixed point and drops α ↦ α bindings.
  void normalize();

  bool operator==(const Substitution&) const = default;

 private:
  std::map<TypeVar, TypeTerm> bindings_;
};

TypeTerm apply_subst(const Substitution& sigma, const TypeTerm& t);

std::set<TypeVar> free_type_vars(const ConstraintSet& cs);
std::set<TypeVar> free_type_vars(const Constraint& c);

enum class RuleLabel {
  TVar,
  TSVar,
  TFun,
  TEmpty,
  TElem,
  TMerge,
  Sub,
  Gen,
  TMatch,
  TConj,
  TRule,
  CTVar,
  CTSVar,
  CTFun,
  CTEmpty,
  CTElem,
  CTMerge,
  CTStar,
  CTMatch,
  CTConj,
  CTRule,
};

std::string label_name(RuleLabel label);
std::optional<RuleLabel> label_from_name(const std::string& name);

using Subject = std::variant<Term, Cond, Rule>;

struct Judgment {
  Subject subject;
  TypeTerm type;
  // Present on constraint-typing judgments.
  std::optional<ConstraintSet> constraints;
};

struct Derivation {
  RuleLabel label;
  Judgment conclusion;
  std::vector<Derivation> premises;
};

// Whether the node's premise count fits its rule schema.
bool premise_arity_ok(const Derivation& d);

std::string to_string(const Sort& s);
std::string to_string(const DecoratedSort& s);
std::string to_string(const TypeVar& v);
std::string to_string(const TypeTerm& t);
std::string to_string(const Term& t);
std::string to_string(const Cond& c);
std::string to_string(const Rule& r);
std::string to_string(const Constraint& c);
std::string to_string(const ConstraintSet& cs);
std::string to_string(const Substitution& s);
std::string to_string(const Subject& s);

// Variable and star-variable occurrences of a rule in first-occurrence
// order: pattern before subject before action, left to right. Each
// (kind, name) pair appears once.
std::vector<Term> collect_variables(const Rule& r);
std::vector<Term> collect_variables(const Cond& c);
std::vector<Term> collect_variables(const Term& t);

}  // namespace decosort
