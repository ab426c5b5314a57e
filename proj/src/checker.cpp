#include "decosort/checker.h"

#include <algorithm>

namespace decosort {

std::string check_error_kind_name(CheckError::Kind k) {
  switch (k) {
    case CheckError::Kind::NoRank:
      return "NoRank";
    case CheckError::Kind::ArityMismatch:
      return "ArityMismatch";
    case CheckError::Kind::NotSubtype:
      return "NotSubtype";
    case CheckError::Kind::UndeclaredVariable:
      return "UndeclaredVariable";
    case CheckError::Kind::StarOutsideList:
      return "StarOutsideList";
    case CheckError::Kind::ExpectedListType:
      return "ExpectedListType";
    case CheckError::Kind::UnresolvedAnnotation:
      return "UnresolvedAnnotation";
  }
  return "?";
}

namespace {

Derivation node(RuleLabel label, Subject subject, TypeTerm type,
                std::vector<Derivation> premises = {}) {
  return {label, {std::move(subject), std::move(type), std::nullopt},
          std::move(premises)};
}

std::string join(const std::string& path, const std::string& step) {
  return path.empty() ? step : path + "." + step;
}

CheckOutcome fail(CheckError::Kind k, std::string path, std::string detail) {
  return CheckOutcome::fail({k, std::move(path), std::move(detail)});
}

CheckOutcome variable_leaf(const Context& ctx, const Term& e,
                           const std::string& path) {
  auto t = ctx.typing(e);
  if (!t) {
    return fail(CheckError::Kind::UndeclaredVariable, path,
                "variable " + to_string(e) + " is not declared");
  }
  if (!t->is_ground()) {
    return fail(CheckError::Kind::UndeclaredVariable, path,
                "variable " + to_string(e) + " has no ground typing");
  }
  RuleLabel label =
      e.kind == TermKind::StarVar ? RuleLabel::TSVar : RuleLabel::TVar;
  return CheckOutcome::ok(node(label, e, *t));
}

CheckOutcome check_at(const Context& ctx, const Term& e,
                      const DecoratedSort& expected, const std::string& path);

// Derives e at the type read off its head symbol or typing.
CheckOutcome natural(const Context& ctx, const Term& e,
                     const std::string& path) {
  switch (e.kind) {
    case TermKind::Var:
      return variable_leaf(ctx, e, path);
    case TermKind::StarVar:
      return fail(CheckError::Kind::StarOutsideList, path,
                  "star variable " + to_string(e) +
                      " may only appear directly inside a list");
    case TermKind::SynApp: {
      const SynRank* rank = ctx.syn_rank(e.name);
      if (rank == nullptr) {
        return fail(CheckError::Kind::NoRank, path,
                    "no syntactic rank for operator " + e.name);
      }
      if (rank->domain.size() != e.args.size()) {
        return fail(CheckError::Kind::ArityMismatch, path,
                    e.name + " expects " + std::to_string(rank->domain.size()) +
                        " argument(s), got " + std::to_string(e.args.size()));
      }
      std::vector<Derivation> premises;
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        auto arg = check_at(ctx, e.args[i], rank->domain[i],
                            join(path, std::to_string(i + 1)));
        if (!arg) return arg;
        premises.push_back(std::move(arg.derivation()));
      }
      return CheckOutcome::ok(
          node(RuleLabel::TFun, e, rank->codomain, std::move(premises)));
    }
    case TermKind::ListApp:
      break;
  }

  const VariadicRank* rank = ctx.variadic_rank(e.name);
  if (rank == nullptr) {
    return fail(CheckError::Kind::NoRank, path,
                "no variadic rank for operator " + e.name);
  }
  const DecoratedSort& list_type = rank->codomain;
  Term spine = Term::list(e.name);
  Derivation d = node(RuleLabel::TEmpty, spine, list_type);
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    const Term& last = e.args[i];
    const std::string arg_path = join(path, std::to_string(i + 1));
    spine.args.push_back(last);
    std::vector<Derivation> premises;
    premises.push_back(std::move(d));
    RuleLabel label;
    if (last.kind == TermKind::StarVar) {
      auto leaf = variable_leaf(ctx, last, arg_path);
      if (!leaf) return leaf;
      if (leaf.derivation().conclusion.type != TypeTerm(list_type)) {
        return fail(CheckError::Kind::ExpectedListType, arg_path,
                    "star variable " + to_string(last) + " has type " +
                        to_string(leaf.derivation().conclusion.type) +
                        " but the list " + e.name + " has type " +
                        to_string(list_type));
      }
      premises.push_back(std::move(leaf.derivation()));
      label = RuleLabel::TMerge;
    } else if (ctx.sortof(last) == list_type) {
      auto sub = check_at(ctx, last, list_type, arg_path);
      if (!sub) return sub;
      premises.push_back(std::move(sub.derivation()));
      label = RuleLabel::TMerge;
    } else {
      auto elem = check_at(ctx, last, rank->elem, arg_path);
      if (!elem) return elem;
      premises.push_back(std::move(elem.derivation()));
      label = RuleLabel::TElem;
    }
    d = node(label, spine, list_type, std::move(premises));
  }
  return CheckOutcome::ok(std::move(d));
}

std::string closure_text(const Context& ctx, const Sort& s) {
  std::string out;
  for (const auto& a : ctx.ancestors(s)) {
    out += (out.empty() ? "" : " <: ") + a.name;
  }
  return out;
}

CheckOutcome check_at(const Context& ctx, const Term& e,
                      const DecoratedSort& expected, const std::string& path) {
  auto nat = natural(ctx, e, path);
  if (!nat) return nat;
  Derivation d = std::move(nat.derivation());
  DecoratedSort current = d.conclusion.type.as_ground();
  if (current == expected) return CheckOutcome::ok(std::move(d));

  if (expected.deco.is_any() && !current.deco.is_any()) {
    current = current.generalized();
    d = node(RuleLabel::Gen, e, current, {std::move(d)});
    if (current == expected) return CheckOutcome::ok(std::move(d));
  }
  if (ctx.subtype_holds(current, expected)) {
    return CheckOutcome::ok(node(RuleLabel::Sub, e, expected, {std::move(d)}));
  }
  return fail(CheckError::Kind::NotSubtype, path,
              to_string(e) + " : " + to_string(current) +
                  " is not a subtype of " + to_string(expected) +
                  " (closure of " + current.sort.name + ": " +
                  closure_text(ctx, current.sort) + ")");
}

CheckOutcome check_cond_at(const Context& ctx, const Cond& c,
                           const std::string& path) {
  if (c.kind == Cond::Kind::Conj) {
    std::vector<Derivation> premises;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      auto m = check_cond_at(ctx, c.members[i], join(path, std::to_string(i + 1)));
      if (!m) return m;
      premises.push_back(std::move(m.derivation()));
    }
    return CheckOutcome::ok(
        node(RuleLabel::TConj, c, TypeTerm::wt(), std::move(premises)));
  }
  if (!c.at.is_ground()) {
    return fail(CheckError::Kind::UnresolvedAnnotation, path,
                "match annotation " + to_string(c.at) + " is not a sort");
  }
  const DecoratedSort& at = c.at.as_ground();
  auto p = check_at(ctx, c.pattern, at, join(path, "pattern"));
  if (!p) return p;
  auto s = check_at(ctx, c.subject, at, join(path, "subject"));
  if (!s) return s;
  std::vector<Derivation> premises;
  premises.push_back(std::move(p.derivation()));
  premises.push_back(std::move(s.derivation()));
  return CheckOutcome::ok(
      node(RuleLabel::TMatch, c, TypeTerm::wt(), std::move(premises)));
}

}  // namespace

CheckOutcome check_term(const Context& ctx, const Term& e,
                        const DecoratedSort& expected) {
  return check_at(ctx, e, expected, "");
}

CheckOutcome check_cond(const Context& ctx, const Cond& c) {
  return check_cond_at(ctx, c, "cond");
}

CheckOutcome check_rule(const Context& ctx, const Rule& r) {
  auto cond = check_cond(ctx, r.cond);
  if (!cond) return cond;
  std::vector<Derivation> premises;
  premises.push_back(std::move(cond.derivation()));
  for (std::size_t i = 0; i < r.action.size(); ++i) {
    const Term& e = r.action[i];
    const std::string path = "action." + std::to_string(i + 1);
    if (e.kind == TermKind::StarVar) {
      return fail(CheckError::Kind::StarOutsideList, path,
                  "star variable " + to_string(e) +
                      " may only appear directly inside a list");
    }
    auto t = ctx.sortof(e);
    if (!t) {
      if (e.kind == TermKind::SynApp || e.kind == TermKind::ListApp) {
        return fail(CheckError::Kind::NoRank, path,
                    "no rank for operator " + e.name);
      }
      return fail(CheckError::Kind::UndeclaredVariable, path,
                  "action term " + to_string(e) + " has no declared type");
    }
    auto a = check_at(ctx, e, *t, path);
    if (!a) return a;
    premises.push_back(std::move(a.derivation()));
  }
  return CheckOutcome::ok(
      node(RuleLabel::TRule, r, TypeTerm::wt(), std::move(premises)));
}

namespace {

CheckOutcome simple_term(const Context& ctx, const Term& e,
                         const std::string& path) {
  switch (e.kind) {
    case TermKind::Var: {
      auto t = ctx.typing(e);
      if (!t || !t->is_ground()) {
        return fail(CheckError::Kind::UndeclaredVariable, path,
                    "variable " + e.name + " is not declared");
      }
      return CheckOutcome::ok(
          node(RuleLabel::TVar, e, t->as_ground().generalized()));
    }
    case TermKind::StarVar:
      return fail(CheckError::Kind::StarOutsideList, path,
                  "star variables are not part of the simple system");
    case TermKind::ListApp:
      return fail(CheckError::Kind::NoRank, path,
                  "variadic operator " + e.name +
                      " is not part of the simple system");
    case TermKind::SynApp:
      break;
  }
  const SynRank* rank = ctx.syn_rank(e.name);
  if (rank == nullptr) {
    return fail(CheckError::Kind::NoRank, path,
                "no rank for operator " + e.name);
  }
  if (rank->domain.size() != e.args.size()) {
    return fail(CheckError::Kind::ArityMismatch, path,
                e.name + " expects " + std::to_string(rank->domain.size()) +
                    " argument(s), got " + std::to_string(e.args.size()));
  }
  std::vector<Derivation> premises;
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    const std::string arg_path = join(path, std::to_string(i + 1));
    auto a = simple_term(ctx, e.args[i], arg_path);
    if (!a) return a;
    const auto& got = a.derivation().conclusion.type.as_ground();
    if (got.sort != rank->domain[i].sort) {
      return fail(CheckError::Kind::NotSubtype, arg_path,
                  "argument has sort " + got.sort.name + ", expected " +
                      rank->domain[i].sort.name);
    }
    premises.push_back(std::move(a.derivation()));
  }
  return CheckOutcome::ok(node(RuleLabel::TFun, e, rank->codomain.generalized(),
                               std::move(premises)));
}

CheckOutcome simple_cond(const Context& ctx, const Cond& c,
                         const std::string& path) {
  if (c.kind == Cond::Kind::Conj) {
    std::vector<Derivation> premises;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      auto m = simple_cond(ctx, c.members[i], join(path, std::to_string(i + 1)));
      if (!m) return m;
      premises.push_back(std::move(m.derivation()));
    }
    return CheckOutcome::ok(
        node(RuleLabel::TConj, c, TypeTerm::wt(), std::move(premises)));
  }
  if (!c.at.is_ground()) {
    return fail(CheckError::Kind::UnresolvedAnnotation, path,
                "match annotation " + to_string(c.at) + " is not a sort");
  }
  const Sort& s = c.at.as_ground().sort;
  std::vector<Derivation> premises;
  for (const auto* side : {&c.pattern, &c.subject}) {
    const std::string side_path =
        join(path, side == &c.pattern ? "pattern" : "subject");
    auto d = simple_term(ctx, *side, side_path);
    if (!d) return d;
    if (d.derivation().conclusion.type.as_ground().sort != s) {
      return fail(CheckError::Kind::NotSubtype, side_path,
                  to_string(*side) + " does not have sort " + s.name);
    }
    premises.push_back(std::move(d.derivation()));
  }
  return CheckOutcome::ok(
      node(RuleLabel::TMatch, c, TypeTerm::wt(), std::move(premises)));
}

}  // namespace

CheckOutcome check_simple(const Context& ctx, const Rule& r) {
  auto cond = simple_cond(ctx, r.cond, "cond");
  if (!cond) return cond;
  std::vector<Derivation> premises;
  premises.push_back(std::move(cond.derivation()));
  for (std::size_t i = 0; i < r.action.size(); ++i) {
    auto a = simple_term(ctx, r.action[i], "action." + std::to_string(i + 1));
    if (!a) return a;
    premises.push_back(std::move(a.derivation()));
  }
  return CheckOutcome::ok(
      node(RuleLabel::TRule, r, TypeTerm::wt(), std::move(premises)));
}

std::vector<std::string> unbound_action_variables(const Rule& r) {
  auto in_cond = collect_variables(r.cond);
  std::vector<std::string> out;
  for (const auto& e : r.action) {
    for (const auto& v : collect_variables(e)) {
      if (std::find(in_cond.begin(), in_cond.end(), v) == in_cond.end()) {
        out.push_back(to_string(v));
      }
    }
  }
  return out;
}

}  // namespace decosort
