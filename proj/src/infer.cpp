#include "decosort/infer.h"

namespace decosort {

namespace {

std::string join(const std::string& path, const std::string& step) {
  return path.empty() ? step : path + "." + step;
}

InferOutcome fail(CheckError::Kind k, std::string path, std::string detail) {
  return InferOutcome::fail({k, std::move(path), std::move(detail)});
}

InferResult leaf(RuleLabel label, Subject subject, TypeTerm type,
                 ConstraintSet cs, std::vector<Derivation> premises = {}) {
  Derivation d{label, {std::move(subject), type, cs}, std::move(premises)};
  return {std::move(type), std::move(cs), std::move(d)};
}

InferOutcome infer_at(const Context& ctx, const Term& e, FreshSupply& fresh,
                      const std::string& path,
                      std::optional<TypeVar> spine = std::nullopt);

InferOutcome infer_variable(const Context& ctx, const Term& e,
                            FreshSupply& fresh, const std::string& path,
                            std::optional<TypeVar> spine) {
  if (e.kind == TermKind::StarVar && !spine) {
    return fail(CheckError::Kind::StarOutsideList, path,
                "star variable " + to_string(e) +
                    " may only appear directly inside a list");
  }
  auto t = ctx.typing(e);
  if (!t || t->is_hole()) {
    return fail(CheckError::Kind::UndeclaredVariable, path,
                "variable " + to_string(e) + " has no typing");
  }
  TypeVar a = spine ? *spine : fresh.fresh();
  if (e.kind == TermKind::StarVar) {
    return InferOutcome::ok(
        leaf(RuleLabel::CTSVar, e, a, {Constraint::eq(*t, a)}));
  }
  return InferOutcome::ok(leaf(RuleLabel::CTVar, e, a, {Constraint::eq(a, *t)}));
}

InferOutcome infer_list(const Context& ctx, const Term& e, FreshSupply& fresh,
                        const std::string& path, std::optional<TypeVar> spine) {
  const VariadicRank* rank = ctx.variadic_rank(e.name);
  if (rank == nullptr) {
    return fail(CheckError::Kind::NoRank, path,
                "no variadic rank for operator " + e.name);
  }
  const TypeTerm list_type = rank->codomain;
  const TypeVar a = spine ? *spine : fresh.fresh();
  const Constraint own = Constraint::eq(a, list_type);

  Term prefix = Term::list(e.name);
  InferResult acc = leaf(RuleLabel::CTEmpty, prefix, a, {own});
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    const Term& last = e.args[i];
    const std::string arg_path = join(path, std::to_string(i + 1));
    prefix.args.push_back(last);

    RuleLabel label;
    std::optional<TypeVar> premise_var;
    if (last.kind == TermKind::StarVar) {
      label = RuleLabel::CTStar;
      premise_var = a;
    } else if (ctx.sortof(last) == rank->codomain) {
      label = RuleLabel::CTMerge;
      premise_var = a;
    } else {
      label = RuleLabel::CTElem;
    }
    auto elem = infer_at(ctx, last, fresh, arg_path, premise_var);
    if (!elem) return elem;
    InferResult& r = elem.result();

    ConstraintSet cs = acc.constraints;
    cs.insert_all(r.constraints);
    cs.insert(own);
    if (label == RuleLabel::CTElem) {
      cs.insert(Constraint::sub(r.type, rank->elem));
    }
    std::vector<Derivation> premises;
    premises.push_back(std::move(acc.derivation));
    premises.push_back(std::move(r.derivation));
    acc = leaf(label, prefix, a, std::move(cs), std::move(premises));
  }
  return InferOutcome::ok(std::move(acc));
}

InferOutcome infer_at(const Context& ctx, const Term& e, FreshSupply& fresh,
                      const std::string& path, std::optional<TypeVar> spine) {
  switch (e.kind) {
    case TermKind::Var:
    case TermKind::StarVar:
      return infer_variable(ctx, e, fresh, path, spine);
    case TermKind::ListApp:
      return infer_list(ctx, e, fresh, path, spine);
    case TermKind::SynApp:
      break;
  }
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
  ConstraintSet cs;
  std::vector<Derivation> premises;
  std::vector<TypeTerm> arg_types;
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    auto arg = infer_at(ctx, e.args[i], fresh, join(path, std::to_string(i + 1)));
    if (!arg) return arg;
    cs.insert_all(arg.result().constraints);
    arg_types.push_back(arg.result().type);
    premises.push_back(std::move(arg.result().derivation));
  }
  TypeVar a = spine ? *spine : fresh.fresh();
  cs.insert(Constraint::eq(a, rank->codomain));
  for (std::size_t i = 0; i < arg_types.size(); ++i) {
    cs.insert(Constraint::sub(arg_types[i], rank->domain[i]));
  }
  return InferOutcome::ok(
      leaf(RuleLabel::CTFun, e, a, std::move(cs), std::move(premises)));
}

InferOutcome infer_cond_at(const Context& ctx, const Cond& c,
                           FreshSupply& fresh, const std::string& path) {
  if (c.kind == Cond::Kind::Conj) {
    ConstraintSet cs;
    std::vector<Derivation> premises;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      auto m = infer_cond_at(ctx, c.members[i], fresh,
                             join(path, std::to_string(i + 1)));
      if (!m) return m;
      cs.insert_all(m.result().constraints);
      premises.push_back(std::move(m.result().derivation));
    }
    return InferOutcome::ok(
        leaf(RuleLabel::CTConj, c, TypeTerm::wt(), std::move(cs), std::move(premises)));
  }
  if (c.at.is_hole() || c.at.is_wt()) {
    return fail(CheckError::Kind::UnresolvedAnnotation, path,
                "match annotation was not assigned a type variable");
  }
  auto p = infer_at(ctx, c.pattern, fresh, join(path, "pattern"));
  if (!p) return p;
  auto s = infer_at(ctx, c.subject, fresh, join(path, "subject"));
  if (!s) return s;
  ConstraintSet cs = p.result().constraints;
  cs.insert_all(s.result().constraints);
  cs.insert(Constraint::sub(p.result().type, c.at));
  cs.insert(Constraint::eq(s.result().type, c.at));
  std::vector<Derivation> premises;
  premises.push_back(std::move(p.result().derivation));
  premises.push_back(std::move(s.result().derivation));
  return InferOutcome::ok(
      leaf(RuleLabel::CTMatch, c, TypeTerm::wt(), std::move(cs), std::move(premises)));
}

void fill(Cond& c, FreshSupply& fresh) {
  if (c.kind == Cond::Kind::Conj) {
    for (auto& m : c.members) fill(m, fresh);
  } else if (c.at.is_hole()) {
    c.at = fresh.fresh();
  }
}

void substitute(Cond& c, const Substitution& sigma) {
  if (c.kind == Cond::Kind::Conj) {
    for (auto& m : c.members) substitute(m, sigma);
  } else {
    c.at = sigma.apply(c.at);
  }
}

}  // namespace

Context init_context(const Signature& sig, const Rule& r, FreshSupply& fresh) {
  Signature out = sig;
  for (const auto& v : collect_variables(r)) {
    const bool star = v.kind == TermKind::StarVar;
    auto& table = star ? out.star_types : out.var_types;
    const TypeTerm* current = nullptr;
    for (const auto& [n, t] : table) {
      if (n == v.name) {
        current = &t;
        break;
      }
    }
    if (current != nullptr && !current->is_hole()) continue;
    if (star) {
      out.set_star_type(v.name, fresh.fresh());
    } else {
      out.set_var_type(v.name, fresh.fresh());
    }
  }
  return Context(std::move(out));
}

Rule fill_annotations(const Rule& r, FreshSupply& fresh) {
  Rule out = r;
  fill(out.cond, fresh);
  return out;
}

InferOutcome infer_term(const Context& ctx, const Term& e, FreshSupply& fresh) {
  return infer_at(ctx, e, fresh, "");
}

InferOutcome infer_cond(const Context& ctx, const Cond& c, FreshSupply& fresh) {
  return infer_cond_at(ctx, c, fresh, "cond");
}

InferOutcome infer_rule(const Context& ctx, const Rule& r, FreshSupply& fresh) {
  auto cond = infer_cond(ctx, r.cond, fresh);
  if (!cond) return cond;
  ConstraintSet cs = cond.result().constraints;
  std::vector<Derivation> premises;
  premises.push_back(std::move(cond.result().derivation));
  for (std::size_t i = 0; i < r.action.size(); ++i) {
    const Term& e = r.action[i];
    const std::string path = "action." + std::to_string(i + 1);
    if (e.kind == TermKind::StarVar) {
      return fail(CheckError::Kind::StarOutsideList, path,
                  "star variable " + to_string(e) +
                      " may only appear directly inside a list");
    }
    auto tau = ctx.typeof_raw(e);
    if (!tau || tau->is_hole()) {
      if (e.kind == TermKind::Var) {
        return fail(CheckError::Kind::UndeclaredVariable, path,
                    "action term " + to_string(e) + " has no typing");
      }
      return fail(CheckError::Kind::NoRank, path, "no rank for operator " + e.name);
    }
    auto a = infer_at(ctx, e, fresh, path);
    if (!a) return a;
    cs.insert_all(a.result().constraints);
    // The side condition equates the raw typing with itself; only a type
    // variable makes this visible in the constraint set.
    if (tau->is_var()) cs.insert(Constraint::eq(*tau, *tau));
    premises.push_back(std::move(a.result().derivation));
  }
  return InferOutcome::ok(
      leaf(RuleLabel::CTRule, r, TypeTerm::wt(), std::move(cs), std::move(premises)));
}

Inference infer(const Signature& sig, const Rule& r) {
  FreshSupply fresh;
  Context ctx = init_context(sig, r, fresh);
  Rule filled = fill_annotations(r, fresh);
  InferOutcome outcome = infer_rule(ctx, filled, fresh);
  return {std::move(ctx), std::move(filled), std::move(outcome)};
}

Context instantiate(const Context& ctx, const Substitution& sigma) {
  Signature sig = ctx.signature();
  for (auto& [n, t] : sig.var_types) t = sigma.apply(t);
  for (auto& [n, t] : sig.star_types) t = sigma.apply(t);
  return Context(std::move(sig));
}

Rule instantiate(const Rule& r, const Substitution& sigma) {
  Rule out = r;
  substitute(out.cond, sigma);
  return out;
}

}  // namespace decosort
