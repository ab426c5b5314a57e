#include "decosort/core.h"

#include <algorithm>
#include <sstream>

namespace decosort {

Term Term::prefix() const {
  Term p = *this;
  if (!p.args.empty()) {
    p.args.pop_back();
  }
  return p;
}

ConstraintSet::ConstraintSet(std::initializer_list<Constraint> cs) {
  for (const auto& c : cs) {
    insert(c);
  }
}

bool ConstraintSet::insert(const Constraint& c) {
  if (!index_.insert(c).second) {
    return false;
  }
  items_.push_back(c);
  return true;
}

void ConstraintSet::insert_all(const ConstraintSet& other) {
  for (const auto& c : other) {
    insert(c);
  }
}

void ConstraintSet::erase_at(std::size_t i) {
  index_.erase(items_[i]);
  items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(i));
}

void Substitution::bind(TypeVar v, TypeTerm t) {
  if (t.is_var() && t.as_var() == v) {
    return;
  }
  bindings_[v] = std::move(t);
}

const TypeTerm* Substitution::lookup(TypeVar v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

TypeTerm Substitution::apply(const TypeTerm& t) const {
  TypeTerm cur = t;
  // A chain can visit each binding at most once unless it is cyclic.
  for (std::size_t steps = 0; cur.is_var() && steps <= bindings_.size();
       ++steps) {
    const TypeTerm* next = lookup(cur.as_var());
    if (next == nullptr) {
      break;
    }
    cur = *next;
  }
  return cur;
}

Constraint Substitution::apply(const Constraint& c) const {
  return {c.kind, apply(c.lhs), apply(c.rhs)};
}

void Substitution::normalize() {
  std::map<TypeVar, TypeTerm> out;
  for (const auto& [v, t] : bindings_) {
    TypeTerm image = apply(t);
    if (image.is_var() && image.as_var() == v) {
      continue;
    }
    out.emplace(v, std::move(image));
  }
  bindings_ = std::move(out);
}

TypeTerm apply_subst(const Substitution& sigma, const TypeTerm& t) {
  return sigma.apply(t);
}

std::set<TypeVar> free_type_vars(const Constraint& c) {
  std::set<TypeVar> out;
  if (c.lhs.is_var()) out.insert(c.lhs.as_var());
  if (c.rhs.is_var()) out.insert(c.rhs.as_var());
  return out;
}

std::set<TypeVar> free_type_vars(const ConstraintSet& cs) {
  std::set<TypeVar> out;
  for (const auto& c : cs) {
    out.merge(free_type_vars(c));
  }
  return out;
}

namespace {

struct LabelEntry {
  RuleLabel label;
  const char* name;
};

constexpr LabelEntry kLabels[] = {
    {RuleLabel::TVar, "T-Var"},     {RuleLabel::TSVar, "T-SVar"},
    {RuleLabel::TFun, "T-Fun"},     {RuleLabel::TEmpty, "T-Empty"},
    {RuleLabel::TElem, "T-Elem"},   {RuleLabel::TMerge, "T-Merge"},
    {RuleLabel::Sub, "Sub"},        {RuleLabel::Gen, "Gen"},
    {RuleLabel::TMatch, "T-Match"}, {RuleLabel::TConj, "T-Conj"},
    {RuleLabel::TRule, "T-Rule"},   {RuleLabel::CTVar, "CT-Var"},
    {RuleLabel::CTSVar, "CT-SVar"}, {RuleLabel::CTFun, "CT-Fun"},
    {RuleLabel::CTEmpty, "CT-Empty"}, {RuleLabel::CTElem, "CT-Elem"},
    {RuleLabel::CTMerge, "CT-Merge"}, {RuleLabel::CTStar, "CT-Star"},
    {RuleLabel::CTMatch, "CT-Match"}, {RuleLabel::CTConj, "CT-Conj"},
    {RuleLabel::CTRule, "CT-Rule"},
};

}  // namespace

std::string label_name(RuleLabel label) {
  for (const auto& e : kLabels) {
    if (e.label == label) return e.name;
  }
  return "?";
}

std::optional<RuleLabel> label_from_name(const std::string& name) {
  for (const auto& e : kLabels) {
    if (name == e.name) return e.label;
  }
  return std::nullopt;
}

bool premise_arity_ok(const Derivation& d) {
  const std::size_t n = d.premises.size();
  switch (d.label) {
    case RuleLabel::TVar:
    case RuleLabel::TSVar:
    case RuleLabel::TEmpty:
    case RuleLabel::CTVar:
    case RuleLabel::CTSVar:
    case RuleLabel::CTEmpty:
      return n == 0;
    case RuleLabel::TFun:
    case RuleLabel::CTFun: {
      const auto* t = std::get_if<Term>(&d.conclusion.subject);
      return t != nullptr && n == t->args.size();
    }
    case RuleLabel::TElem:
    case RuleLabel::TMerge:
    case RuleLabel::CTElem:
    case RuleLabel::CTMerge:
    case RuleLabel::CTStar:
    case RuleLabel::TMatch:
    case RuleLabel::CTMatch:
      return n == 2;
    case RuleLabel::Sub:
    case RuleLabel::Gen:
      return n == 1;
    case RuleLabel::TConj:
    case RuleLabel::CTConj: {
      const auto* c = std::get_if<Cond>(&d.conclusion.subject);
      return c != nullptr && n == c->members.size();
    }
    case RuleLabel::TRule:
    case RuleLabel::CTRule: {
      const auto* r = std::get_if<Rule>(&d.conclusion.subject);
      return r != nullptr && n == 1 + r->action.size();
    }
  }
  return false;
}

std::string to_string(const Sort& s) { return s.name; }

std::string to_string(const DecoratedSort& s) {
  return s.sort.name + "^" + (s.deco.is_any() ? "?" : *s.deco.symbol);
}

std::string to_string(const TypeVar& v) {
  return v.id == 0 ? "?" : "α" + std::to_string(v.id);
}

std::string to_string(const TypeTerm& t) {
  if (t.is_var()) return to_string(t.as_var());
  if (t.is_ground()) return to_string(t.as_ground());
  return "wt";
}

std::string to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::Var:
      return t.name;
    case TermKind::StarVar:
      return t.name + "*";
    case TermKind::SynApp:
    case TermKind::ListApp:
      break;
  }
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(t.args[i]);
  }
  return out + ")";
}

std::string to_string(const Cond& c) {
  if (c.kind == Cond::Kind::Match) {
    return to_string(c.pattern) + " << [" + to_string(c.at) + "] " +
           to_string(c.subject);
  }
  std::string out;
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    if (i > 0) out += " /\\ ";
    out += to_string(c.members[i]);
  }
  return out;
}

std::string to_string(const Rule& r) {
  std::string out = to_string(r.cond) + " -> (";
  for (std::size_t i = 0; i < r.action.size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(r.action[i]);
  }
  return out + ")";
}

std::string to_string(const Constraint& c) {
  return to_string(c.lhs) + (c.is_eq() ? " =_s " : " <:_s ") +
         to_string(c.rhs);
}

std::string to_string(const ConstraintSet& cs) {
  std::string out = "{";
  bool first = true;
  for (const auto& c : cs) {
    if (!first) out += ", ";
    first = false;
    out += to_string(c);
  }
  return out + "}";
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += to_string(v) + " ↦ " + to_string(t);
  }
  return out + "}";
}

std::string to_string(const Subject& s) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Term>) {
          return to_string(x);
        } else {
          return "(" + to_string(x) + ")";
        }
      },
      s);
}

namespace {

void collect(const Term& t, std::vector<Term>& out) {
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (const auto& a : t.args) collect(a, out);
}

void collect(const Cond& c, std::vector<Term>& out) {
  if (c.kind == Cond::Kind::Match) {
    collect(c.pattern, out);
    collect(c.subject, out);
    return;
  }
  for (const auto& m : c.members) collect(m, out);
}

}  // namespace

std::vector<Term> collect_variables(const Rule& r) {
  std::vector<Term> out;
  collect(r.cond, out);
  for (const auto& e : r.action) collect(e, out);
  return out;
}

std::vector<Term> collect_variables(const Cond& c) {
  std::vector<Term> out;
  collect(c, out);
  return out;
}

std::vector<Term> collect_variables(const Term& t) {
  std::vector<Term> out;
  collect(t, out);
  return out;
}

}  // namespace decosort
