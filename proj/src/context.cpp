#include "decosort/context.h"

#include <algorithm>
#include <deque>

namespace decosort {

SynRank SynRank::make(std::string op, const std::vector<std::string>& domain,
                      std::string codomain) {
  SynRank r;
  r.op = op;
  for (const auto& s : domain) r.domain.push_back(DecoratedSort::any(s));
  r.codomain = DecoratedSort::of(std::move(codomain), std::move(op));
  return r;
}

VariadicRank VariadicRank::make(std::string op, std::string elem,
                                std::string codomain) {
  return {op, DecoratedSort::any(std::move(elem)),
          DecoratedSort::of(std::move(codomain), op)};
}

void Signature::add_sort(const std::string& name) {
  Sort s{name};
  if (std::find(sorts.begin(), sorts.end(), s) == sorts.end()) {
    sorts.push_back(s);
  }
}

void Signature::add_subsort(const std::string& sub, const std::string& super) {
  add_sort(sub);
  add_sort(super);
  subsorts.emplace_back(Sort{sub}, Sort{super});
}

void Signature::set_var_type(const std::string& name, TypeTerm t) {
  for (auto& [n, ty] : var_types) {
    if (n == name) {
      ty = std::move(t);
      return;
    }
  }
  var_types.emplace_back(name, std::move(t));
}

void Signature::set_star_type(const std::string& name, TypeTerm t) {
  for (auto& [n, ty] : star_types) {
    if (n == name) {
      ty = std::move(t);
      return;
    }
  }
  star_types.emplace_back(name, std::move(t));
}

void Signature::clear_typings() {
  var_types.clear();
  star_types.clear();
}

std::string violation_kind_name(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::SubtypeCycle:
      return "subtype-cycle";
    case Violation::Kind::MultipleInheritance:
      return "multiple-inheritance";
    case Violation::Kind::Overloading:
      return "overloading";
    case Violation::Kind::DuplicateTyping:
      return "duplicate-typing";
    case Violation::Kind::UnknownSort:
      return "unknown-sort";
    case Violation::Kind::UnknownDecoration:
      return "unknown-decoration";
  }
  return "?";
}

Context::Context(Signature sig) : sig_(std::move(sig)) {
  for (const auto& s : sig_.sorts) sort_set_.insert(s);
  // First declaration wins for lookups; validate() reports the rest.
  for (const auto& r : sig_.syn_ranks) syn_.emplace(r.op, r);
  for (const auto& r : sig_.var_ranks) variadic_.emplace(r.op, r);
  for (const auto& [n, t] : sig_.var_types) vars_.emplace(n, t);
  for (const auto& [n, t] : sig_.star_types) stars_.emplace(n, t);

  std::map<Sort, std::vector<Sort>> parents;
  for (const auto& [sub, super] : sig_.subsorts) {
    parents[sub].push_back(super);
  }
  for (const auto& s : sig_.sorts) {
    std::set<Sort>& up = up_[s];
    std::deque<Sort> work{s};
    while (!work.empty()) {
      Sort cur = work.front();
      work.pop_front();
      if (!up.insert(cur).second) continue;
      for (const auto& p : parents[cur]) work.push_back(p);
    }
  }
}

const SynRank* Context::syn_rank(const std::string& op) const {
  auto it = syn_.find(op);
  return it == syn_.end() ? nullptr : &it->second;
}

const VariadicRank* Context::variadic_rank(const std::string& op) const {
  auto it = variadic_.find(op);
  return it == variadic_.end() ? nullptr : &it->second;
}

std::optional<TypeTerm> Context::typing(const Term& var) const {
  const auto& table = var.kind == TermKind::StarVar ? stars_ : vars_;
  auto it = table.find(var.name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::optional<TypeTerm> Context::typeof_raw(const Term& e) const {
  switch (e.kind) {
    case TermKind::Var:
    case TermKind::StarVar:
      return typing(e);
    case TermKind::SynApp:
      if (const auto* r = syn_rank(e.name)) return TypeTerm(r->codomain);
      return std::nullopt;
    case TermKind::ListApp:
      if (const auto* r = variadic_rank(e.name)) return TypeTerm(r->codomain);
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<DecoratedSort> Context::sortof(const Term& e) const {
  auto t = typeof_raw(e);
  if (!t || !t->is_ground()) return std::nullopt;
  return t->as_ground();
}

bool Context::sort_leq(const Sort& a, const Sort& b) const {
  if (a == b) return true;
  auto it = up_.find(a);
  return it != up_.end() && it->second.count(b) > 0;
}

bool Context::subtype_holds(const DecoratedSort& a,
                            const DecoratedSort& b) const {
  return sort_leq(a.sort, b.sort) && (a.deco == b.deco || b.deco.is_any());
}

std::vector<Sort> Context::ancestors(const Sort& s) const {
  // Walk upward breadth-first so that the chain order is preserved under
  // single inheritance.
  std::map<Sort, std::vector<Sort>> parents;
  for (const auto& [sub, super] : sig_.subsorts) parents[sub].push_back(super);
  std::vector<Sort> out;
  std::deque<Sort> work{s};
  while (!work.empty()) {
    Sort cur = work.front();
    work.pop_front();
    if (std::find(out.begin(), out.end(), cur) != out.end()) continue;
    out.push_back(cur);
    for (const auto& p : parents[cur]) work.push_back(p);
  }
  return out;
}

std::optional<DecoratedSort> Context::common_supersort(
    const DecoratedSort& a, const DecoratedSort& b) const {
  for (const auto& s : ancestors(a.sort)) {
    if (sort_leq(b.sort, s)) return DecoratedSort{s, Decoration::any()};
  }
  return std::nullopt;
}

std::vector<Violation> Context::validate() const {
  std::vector<Violation> out;
  auto add = [&](Violation::Kind k, std::string d) {
    out.push_back({k, std::move(d)});
  };
  auto check_sort = [&](const Sort& s, const std::string& where) {
    if (!has_sort(s)) {
      add(Violation::Kind::UnknownSort,
          "sort " + s.name + " used in " + where + " is not declared");
    }
  };

  // (ii) single inheritance
  std::map<Sort, std::vector<Sort>> supers;
  for (const auto& [sub, super] : sig_.subsorts) {
    check_sort(sub, "subsort declaration");
    check_sort(super, "subsort declaration");
    auto& v = supers[sub];
    if (std::find(v.begin(), v.end(), super) == v.end()) v.push_back(super);
  }
  for (const auto& [sub, sups] : supers) {
    if (sups.size() > 1) {
      std::string names;
      for (const auto& s : sups) names += (names.empty() ? "" : ", ") + s.name;
      add(Violation::Kind::MultipleInheritance,
          "sort " + sub.name + " has several direct supersorts: " + names);
    }
  }

  // (i) antisymmetry of the closure
  std::set<std::pair<Sort, Sort>> reported;
  for (const auto& [a, up] : up_) {
    for (const auto& b : up) {
      if (a == b || !sort_leq(b, a)) continue;
      auto key = std::minmax(a, b);
      if (reported.insert({key.first, key.second}).second) {
        add(Violation::Kind::SubtypeCycle,
            "sorts " + key.first.name + " and " + key.second.name +
                " are subsorts of each other");
      }
    }
  }

  // (iii) no overloading
  std::map<std::string, int> op_count;
  for (const auto& r : sig_.syn_ranks) ++op_count[r.op];
  for (const auto& r : sig_.var_ranks) ++op_count[r.op];
  for (const auto& [op, n] : op_count) {
    if (n > 1) {
      add(Violation::Kind::Overloading,
          "operator " + op + " is declared " + std::to_string(n) + " times");
    }
  }
  for (const auto& r : sig_.syn_ranks) {
    for (const auto& d : r.domain) check_sort(d.sort, "rank of " + r.op);
    check_sort(r.codomain.sort, "rank of " + r.op);
  }
  for (const auto& r : sig_.var_ranks) {
    check_sort(r.elem.sort, "rank of " + r.op);
    check_sort(r.codomain.sort, "rank of " + r.op);
  }

  // (iv) one typing per variable
  auto check_typings = [&](const std::vector<std::pair<std::string, TypeTerm>>& v,
                           const std::string& suffix) {
    std::map<std::string, int> count;
    for (const auto& [n, t] : v) {
      if (++count[n] == 2) {
        add(Violation::Kind::DuplicateTyping,
            "variable " + n + suffix + " has more than one typing");
      }
      if (!t.is_ground()) continue;
      const auto& g = t.as_ground();
      check_sort(g.sort, "typing of " + n + suffix);
      if (!g.deco.is_any() && !has_operator(*g.deco.symbol)) {
        add(Violation::Kind::UnknownDecoration,
            "decoration " + *g.deco.symbol + " in typing of " + n + suffix +
                " is not a declared operator");
      }
    }
  };
  check_typings(sig_.var_types, "");
  check_typings(sig_.star_types, "*");
  return out;
}

bool subst_satisfies(const Substitution& sigma, const Constraint& c,
                     const Context& ctx) {
  TypeTerm l = sigma.apply(c.lhs);
  TypeTerm r = sigma.apply(c.rhs);
  if (c.is_eq()) return l == r;
  if (!l.is_ground() || !r.is_ground()) return false;
  return ctx.subtype_holds(l.as_ground(), r.as_ground());
}

bool subst_satisfies(const Substitution& sigma, const ConstraintSet& cs,
                     const Context& ctx) {
  return std::all_of(cs.begin(), cs.end(), [&](const Constraint& c) {
    return subst_satisfies(sigma, c, ctx);
  });
}

}  // namespace decosort
