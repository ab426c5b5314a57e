#include "decosort/oracle.h"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <tuple>

namespace decosort {

GroundUniverse ground_universe(const Context& ctx) {
  GroundUniverse out;
  auto add = [&](const DecoratedSort& d) {
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  };
  const Signature& sig = ctx.signature();
  for (const auto& s : sig.sorts) {
    add({s, Decoration::any()});
    for (const auto& r : sig.syn_ranks) {
      if (r.codomain.sort == s) add(r.codomain);
    }
    for (const auto& r : sig.var_ranks) {
      if (r.codomain.sort == s) add(r.codomain);
    }
  }
  for (const auto* table : {&sig.var_types, &sig.star_types}) {
    for (const auto& [n, t] : *table) {
      if (t.is_ground()) add(t.as_ground());
    }
  }
  return out;
}

EnumResult enumerate_solutions(const Context& ctx, const ConstraintSet& cs,
                               const GroundUniverse& universe,
                               const EnumOptions& opts) {
  EnumResult result;

  std::vector<TypeVar> order;
  for (const auto& c : cs) {
    for (const TypeTerm* side : {&c.lhs, &c.rhs}) {
      if (side->is_var() &&
          std::find(order.begin(), order.end(), side->as_var()) == order.end()) {
        order.push_back(side->as_var());
      }
    }
  }

  // Candidate values per variable, narrowed by the constraints that mention
  // only that variable.
  std::vector<std::vector<DecoratedSort>> domain(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const TypeVar v = order[k];
    std::vector<DecoratedSort> base;
    if (const TypeTerm* f = opts.fixed.lookup(v)) {
      if (f->is_ground()) base.push_back(f->as_ground());
    } else {
      base = universe;
    }
    for (const auto& d : base) {
      Substitution one;
      one.bind(v, d);
      bool ok = true;
      for (const auto& c : cs) {
        auto fv = free_type_vars(c);
        if (fv.size() == 1 && fv.count(v) > 0 && !subst_satisfies(one, c, ctx)) {
          ok = false;
          break;
        }
      }
      if (ok) domain[k].push_back(d);
    }
  }

  // Each constraint is checked right after its last variable is assigned.
  std::vector<std::vector<const Constraint*>> checks(order.size() + 1);
  for (const auto& c : cs) {
    std::size_t last = 0;
    bool any = false;
    for (const auto& v : free_type_vars(c)) {
      auto pos = static_cast<std::size_t>(
          std::find(order.begin(), order.end(), v) - order.begin());
      last = any ? std::max(last, pos + 1) : pos + 1;
      any = true;
    }
    checks[any ? last : 0].push_back(&c);
  }

  Substitution sigma;
  for (const Constraint* c : checks[0]) {
    if (!subst_satisfies(sigma, *c, ctx)) return result;
  }

  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (k == order.size()) {
      result.solutions.push_back(sigma);
      return result.solutions.size() < opts.max_solutions;
    }
    for (const auto& d : domain[k]) {
      if (++result.explored > opts.budget) {
        result.budget_exceeded = true;
        return false;
      }
      Substitution saved = sigma;
      sigma.bind(order[k], d);
      bool ok = true;
      for (const Constraint* c : checks[k + 1]) {
        if (!subst_satisfies(sigma, *c, ctx)) {
          ok = false;
          break;
        }
      }
      bool keep_going = !ok || go(k + 1);
      sigma = std::move(saved);
      if (!keep_going) return false;
    }
    return true;
  };
  go(0);
  return result;
}

namespace {

class Search {
 public:
  Search(const Context& ctx, int depth)
      : ctx_(ctx), universe_(ground_universe(ctx)), depth_(depth) {}

  bool derives(const Term& e, const DecoratedSort& t, int budget, bool star_ok) {
    auto key = std::make_tuple(to_string(e), t, budget, star_ok);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = structural(e, t, star_ok);
    if (!r && budget > 0) {
      auto so = ctx_.sortof(e);
      if (t.deco.is_any() && so && !so->deco.is_any() && so->sort == t.sort) {
        r = derives(e, *so, budget - 1, star_ok);
      }
      for (std::size_t i = 0; !r && i < universe_.size(); ++i) {
        const auto& s = universe_[i];
        if (s != t && ctx_.subtype_holds(s, t)) {
          r = derives(e, s, budget - 1, star_ok);
        }
      }
    }
    memo_[key] = r;
    return r;
  }

  bool top(const Term& e, const DecoratedSort& t) {
    return derives(e, t, depth_, false);
  }

 private:
  bool structural(const Term& e, const DecoratedSort& t, bool star_ok) {
    switch (e.kind) {
      case TermKind::Var:
      case TermKind::StarVar: {
        if (e.kind == TermKind::StarVar && !star_ok) return false;
        auto ty = ctx_.typing(e);
        return ty && *ty == TypeTerm(t);
      }
      case TermKind::SynApp: {
        const SynRank* r = ctx_.syn_rank(e.name);
        if (r == nullptr || r->codomain != t || r->domain.size() != e.args.size()) {
          return false;
        }
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (!derives(e.args[i], r->domain[i], depth_, false)) return false;
        }
        return true;
      }
      case TermKind::ListApp:
        break;
    }
    const VariadicRank* r = ctx_.variadic_rank(e.name);
    if (r == nullptr || r->codomain != t) return false;
    if (e.args.empty()) return true;
    const Term& last = e.args.back();
    const Term prefix = e.prefix();
    const bool merge = ctx_.sortof(last) == r->codomain;
    if (merge) {
      return derives(prefix, t, depth_, false) &&
             derives(last, r->codomain, depth_, true);
    }
    if (last.kind == TermKind::StarVar) return false;
    return derives(prefix, t, depth_, false) &&
           derives(last, r->elem, depth_, false);
  }

  const Context& ctx_;
  GroundUniverse universe_;
  int depth_;
  std::map<std::tuple<std::string, DecoratedSort, int, bool>, bool> memo_;
};

const Term* subject_term(const Judgment& j) { return std::get_if<Term>(&j.subject); }

std::optional<DecoratedSort> ground_type(const Judgment& j) {
  if (!j.type.is_ground()) return std::nullopt;
  return j.type.as_ground();
}

std::string describe(const Derivation& d) {
  return label_name(d.label) + " " + to_string(d.conclusion.subject) + " : " +
         to_string(d.conclusion.type);
}

std::optional<std::string> check_node(const Context& ctx, const Derivation& d) {
  auto bad = [&](const std::string& why) -> std::optional<std::string> {
    return describe(d) + ": " + why;
  };
  if (!premise_arity_ok(d)) return bad("wrong number of premises");
  const Judgment& j = d.conclusion;
  auto premise_is = [&](std::size_t i, const Subject& s,
                        const TypeTerm& t) -> bool {
    const Judgment& pj = d.premises[i].conclusion;
    return pj.subject == s && pj.type == t;
  };

  switch (d.label) {
    case RuleLabel::TMatch: {
      const Cond* c = std::get_if<Cond>(&j.subject);
      if (c == nullptr || c->kind != Cond::Kind::Match || !j.type.is_wt()) {
        return bad("not a match condition typed wt");
      }
      if (!c->at.is_ground()) return bad("annotation is not a sort");
      if (!premise_is(0, c->pattern, c->at) || !premise_is(1, c->subject, c->at)) {
        return bad("premises do not type both sides at the annotation");
      }
      return std::nullopt;
    }
    case RuleLabel::TConj: {
      const Cond* c = std::get_if<Cond>(&j.subject);
      if (c == nullptr || c->kind != Cond::Kind::Conj || !j.type.is_wt()) {
        return bad("not a conjunction typed wt");
      }
      for (std::size_t i = 0; i < c->members.size(); ++i) {
        if (!premise_is(i, c->members[i], TypeTerm::wt())) {
          return bad("premise " + std::to_string(i + 1) + " mismatch");
        }
      }
      return std::nullopt;
    }
    case RuleLabel::TRule: {
      const Rule* r = std::get_if<Rule>(&j.subject);
      if (r == nullptr || !j.type.is_wt()) return bad("not a rule typed wt");
      if (!premise_is(0, r->cond, TypeTerm::wt())) return bad("condition premise mismatch");
      for (std::size_t i = 0; i < r->action.size(); ++i) {
        auto so = ctx.sortof(r->action[i]);
        if (!so || !premise_is(i + 1, r->action[i], *so)) {
          return bad("action " + std::to_string(i + 1) + " not typed at its sortof");
        }
      }
      return std::nullopt;
    }
    default:
      break;
  }

  const Term* e = subject_term(j);
  auto t = ground_type(j);
  if (e == nullptr || !t) return bad("term judgment expected");

  switch (d.label) {
    case RuleLabel::TVar:
    case RuleLabel::TSVar: {
      TermKind want = d.label == RuleLabel::TVar ? TermKind::Var : TermKind::StarVar;
      auto ty = ctx.typing(*e);
      if (e->kind != want || !ty || *ty != TypeTerm(*t)) {
        return bad("typing does not match");
      }
      return std::nullopt;
    }
    case RuleLabel::TFun: {
      const SynRank* r = e->kind == TermKind::SynApp ? ctx.syn_rank(e->name) : nullptr;
      if (r == nullptr || r->codomain != *t || r->domain.size() != e->args.size()) {
        return bad("no matching syntactic rank");
      }
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (!premise_is(i, e->args[i], r->domain[i])) {
          return bad("argument " + std::to_string(i + 1) + " not at its domain sort");
        }
      }
      return std::nullopt;
    }
    case RuleLabel::TEmpty:
    case RuleLabel::TElem:
    case RuleLabel::TMerge: {
      const VariadicRank* r =
          e->kind == TermKind::ListApp ? ctx.variadic_rank(e->name) : nullptr;
      if (r == nullptr || r->codomain != *t) return bad("no matching variadic rank");
      if (d.label == RuleLabel::TEmpty) {
        return e->args.empty() ? std::nullopt : bad("list is not empty");
      }
      if (e->args.empty()) return bad("empty list");
      const Term& last = e->args.back();
      const bool is_list = ctx.sortof(last) == r->codomain;
      if (d.label == RuleLabel::TElem) {
        if (is_list || last.kind == TermKind::StarVar) {
          return bad("side condition of T-Elem violated");
        }
        if (!premise_is(0, e->prefix(), *t) || !premise_is(1, last, r->elem)) {
          return bad("premises mismatch");
        }
      } else {
        if (!is_list) return bad("side condition of T-Merge violated");
        if (!premise_is(0, e->prefix(), *t) || !premise_is(1, last, *t)) {
          return bad("premises mismatch");
        }
      }
      return std::nullopt;
    }
    case RuleLabel::Sub: {
      const Judgment& pj = d.premises[0].conclusion;
      auto pt = ground_type(pj);
      if (pj.subject != j.subject || !pt || !ctx.subtype_holds(*pt, *t)) {
        return bad("premise type is not a subtype");
      }
      return std::nullopt;
    }
    case RuleLabel::Gen: {
      const Judgment& pj = d.premises[0].conclusion;
      auto so = ctx.sortof(*e);
      if (!t->deco.is_any() || pj.subject != j.subject || !so ||
          so->deco.is_any() || so->sort != t->sort || pj.type != TypeTerm(*so)) {
        return bad("side condition of Gen violated");
      }
      return std::nullopt;
    }
    default:
      return bad("not a checking rule");
  }
}

}  // namespace

bool derivation_search(const Context& ctx, const Term& e,
                       const DecoratedSort& target, int depth) {
  if (depth < 0) depth = static_cast<int>(ctx.sorts().size()) + 2;
  Search s(ctx, depth);
  return s.top(e, target);
}

std::optional<std::string> validate_derivation(const Context& ctx,
                                               const Derivation& d) {
  if (auto err = check_node(ctx, d)) return err;
  for (const auto& p : d.premises) {
    if (auto err = validate_derivation(ctx, p)) return err;
  }
  return std::nullopt;
}

bool is_normal_form(const Derivation& d) {
  for (const auto& p : d.premises) {
    if (d.label == RuleLabel::Sub && p.label == RuleLabel::Sub) return false;
    if (!is_normal_form(p)) return false;
  }
  return true;
}

std::set<TypeVar> last_rule_vars(const Derivation& d) {
  std::set<TypeVar> out;
  auto add_type = [&](const TypeTerm& t) {
    if (t.is_var()) out.insert(t.as_var());
  };
  add_type(d.conclusion.type);
  ConstraintSet inherited;
  for (const auto& p : d.premises) {
    add_type(p.conclusion.type);
    if (p.conclusion.constraints) inherited.insert_all(*p.conclusion.constraints);
  }
  if (d.conclusion.constraints) {
    for (const auto& c : *d.conclusion.constraints) {
      if (!inherited.contains(c)) out.merge(free_type_vars(c));
    }
  }
  if (const Cond* c = std::get_if<Cond>(&d.conclusion.subject)) {
    if (c->kind == Cond::Kind::Match) add_type(c->at);
  }
  return out;
}

namespace {

class Generator {
 public:
  Generator(std::uint64_t seed, const GenParams& p) : rng_(seed), p_(p) {}

  Instance run() {
    if (p_.size <= 0) return minimal();
    build_signature();
    ctx_ = Context(sig_);

    std::vector<Cond> conds;
    const int n = 1 + pick(2);
    for (int i = 0; i < n; ++i) {
      DecoratedSort at{sig_.sorts[pick(sig_.sorts.size())], Decoration::any()};
      Term pattern = term(at, depth());
      Term subject = term(at, depth());
      conds.push_back(Cond::match(std::move(pattern), std::move(subject), at));
    }
    Rule rule;
    rule.cond = conds.size() == 1 ? conds.front() : Cond::conj(std::move(conds));
    const int actions = pick(3);
    for (int i = 0; i < actions; ++i) {
      if (!var_names_.empty() && chance(70)) {
        rule.action.push_back(Term::var(var_names_[pick(var_names_.size())]));
      } else {
        DecoratedSort s{sig_.sorts[pick(sig_.sorts.size())], Decoration::any()};
        auto t = application(s, 1);
        if (t) rule.action.push_back(std::move(*t));
      }
    }
    for (const auto& [n2, t] : typings_) sig_.var_types.emplace_back(n2, t);
    for (const auto& [n2, t] : star_typings_) sig_.star_types.emplace_back(n2, t);
    return {sig_, rule};
  }

 private:
  std::size_t pick(std::size_t n) { return n == 0 ? 0 : rng_() % n; }
  int pick(int n) { return n <= 0 ? 0 : static_cast<int>(rng_() % static_cast<unsigned>(n)); }
  bool chance(int percent) { return static_cast<int>(rng_() % 100) < percent; }
  int depth() { return 1 + pick(std::min(4, p_.size)); }

  Instance minimal() {
    Signature sig;
    sig.add_sort("S0");
    sig.syn_ranks.push_back(SynRank::make("c0", {}, "S0"));
    sig.var_types.emplace_back("x", DecoratedSort::any("S0"));
    Rule r{Cond::match(Term::var("x"), Term::var("x"), DecoratedSort::any("S0")), {}};
    return {sig, r};
  }

  void build_signature() {
    const int nsorts = 1 + pick(std::min(5, p_.size + 1));
    for (int i = 0; i < nsorts; ++i) {
      std::string name = "S" + std::to_string(i);
      sig_.add_sort(name);
      if (i > 0 && !p_.simple && chance(60)) {
        sig_.subsorts.emplace_back(Sort{name}, sig_.sorts[pick(i)]);
      }
    }
    auto sort = [&]() { return sig_.sorts[pick(sig_.sorts.size())].name; };
    const int nops = 2 + pick(5);
    int ops = 0;
    // One constant per root at least keeps generation grounded.
    sig_.syn_ranks.push_back(SynRank::make("c0", {}, sort()));
    ++ops;
    if (!p_.simple) {
      sig_.var_ranks.push_back(VariadicRank::make("l0", sort(), sort()));
      ++ops;
    }
    int consts = 1, funs = 0, lists = p_.simple ? 0 : 1;
    while (ops < nops) {
      const int kind = pick(p_.simple ? 2 : 3);
      if (kind == 0) {
        sig_.syn_ranks.push_back(
            SynRank::make("c" + std::to_string(consts++), {}, sort()));
      } else if (kind == 1) {
        std::vector<std::string> dom;
        const int arity = 1 + pick(2);
        for (int a = 0; a < arity; ++a) dom.push_back(sort());
        sig_.syn_ranks.push_back(
            SynRank::make("f" + std::to_string(funs++), dom, sort()));
      } else {
        sig_.var_ranks.push_back(
            VariadicRank::make("l" + std::to_string(lists++), sort(), sort()));
      }
      ++ops;
    }
  }

  std::vector<Sort> below(const Sort& s) {
    std::vector<Sort> out;
    for (const auto& t : sig_.sorts) {
      if (ctx_.sort_leq(t, s)) out.push_back(t);
    }
    return out;
  }

  // A variable fitting `expected`, reused or new.
  Term variable(const DecoratedSort& expected) {
    std::vector<std::string> fits;
    for (const auto& [n, t] : typings_) {
      if (ctx_.subtype_holds(t.as_ground(), expected)) fits.push_back(n);
    }
    if (!fits.empty() && chance(35)) return Term::var(fits[pick(fits.size())]);
    DecoratedSort ty = expected;
    if (expected.deco.is_any()) {
      auto down = below(expected.sort);
      ty = {down[pick(down.size())], Decoration::any()};
      if (!p_.simple && chance(20)) {
        std::vector<DecoratedSort> decorated;
        for (const auto& r : sig_.syn_ranks) {
          if (r.codomain.sort == ty.sort) decorated.push_back(r.codomain);
        }
        for (const auto& r : sig_.var_ranks) {
          if (r.codomain.sort == ty.sort) decorated.push_back(r.codomain);
        }
        if (!decorated.empty()) ty = decorated[pick(decorated.size())];
      }
    }
    std::string name = "x" + std::to_string(var_names_.size());
    var_names_.push_back(name);
    typings_.emplace_back(name, ty);
    return Term::var(name);
  }

  Term star(const DecoratedSort& list_type) {
    std::vector<std::string> fits;
    for (const auto& [n, t] : star_typings_) {
      if (t.as_ground() == list_type) fits.push_back(n);
    }
    if (!fits.empty() && chance(30)) return Term::star(fits[pick(fits.size())]);
    std::string name = "z" + std::to_string(star_typings_.size());
    star_typings_.emplace_back(name, list_type);
    return Term::star(name);
  }

  Term arbitrary(int d) {
    DecoratedSort any{sig_.sorts[pick(sig_.sorts.size())], Decoration::any()};
    if (d <= 0 || chance(40)) {
      if (!typings_.empty()) return Term::var(typings_[pick(typings_.size())].first);
      return variable(any);
    }
    // Any operator, ignoring the expected type.
    const std::size_t total = sig_.syn_ranks.size() + sig_.var_ranks.size();
    const std::size_t k = pick(total);
    if (k < sig_.syn_ranks.size()) {
      const SynRank& r = sig_.syn_ranks[k];
      std::vector<Term> args;
      for (const auto& dom : r.domain) args.push_back(term(dom, d - 1));
      return Term::app(r.op, std::move(args));
    }
    const VariadicRank& r = sig_.var_ranks[k - sig_.syn_ranks.size()];
    return list(r, d);
  }

  Term list(const VariadicRank& r, int d) {
    std::vector<Term> args;
    const int n = pick(4);
    for (int i = 0; i < n; ++i) {
      const int roll = pick(100);
      if (roll < 30) {
        args.push_back(star(r.codomain));
      } else if (roll < 38 && d > 1) {
        args.push_back(list(r, d - 1));
      } else {
        args.push_back(term(r.elem, d - 1));
      }
    }
    return Term::list(r.op, std::move(args));
  }

  std::optional<Term> application(const DecoratedSort& expected, int d) {
    std::vector<std::size_t> syn, var;
    for (std::size_t i = 0; i < sig_.syn_ranks.size(); ++i) {
      const auto& r = sig_.syn_ranks[i];
      if (ctx_.subtype_holds(r.codomain, expected) && (d > 0 || r.domain.empty())) {
        syn.push_back(i);
      }
    }
    for (std::size_t i = 0; i < sig_.var_ranks.size(); ++i) {
      if (ctx_.subtype_holds(sig_.var_ranks[i].codomain, expected)) var.push_back(i);
    }
    if (syn.empty() && var.empty()) return std::nullopt;
    const std::size_t k = pick(syn.size() + var.size());
    if (k < syn.size()) {
      const SynRank& r = sig_.syn_ranks[syn[k]];
      std::vector<Term> args;
      for (const auto& dom : r.domain) args.push_back(term(dom, d - 1));
      return Term::app(r.op, std::move(args));
    }
    return list(sig_.var_ranks[var[k - syn.size()]], d);
  }

  Term term(const DecoratedSort& expected, int d) {
    if (chance(p_.noise)) return arbitrary(d);
    if (d > 0 && chance(65)) {
      if (auto t = application(expected, d)) return std::move(*t);
    }
    return variable(expected);
  }

  std::mt19937_64 rng_;
  GenParams p_;
  Signature sig_;
  Context ctx_;
  std::vector<std::string> var_names_;
  std::vector<std::pair<std::string, TypeTerm>> typings_;
  std::vector<std::pair<std::string, TypeTerm>> star_typings_;
};

}  // namespace

Instance gen_instance(std::uint64_t seed, const GenParams& params) {
  return Generator(seed, params).run();
}

ConstraintSet gen_constraints(std::uint64_t seed, const Context& ctx,
                              const ConstraintGenParams& params) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return n == 0 ? 0 : rng() % n; };
  const GroundUniverse u = ground_universe(ctx);
  const int nvars = std::max(1, params.vars);
  auto side = [&](bool want_var) -> TypeTerm {
    if (want_var || u.empty()) {
      return TypeVar{static_cast<std::uint32_t>(1 + pick(nvars))};
    }
    return u[pick(u.size())];
  };
  ConstraintSet out;
  for (int i = 0; i < params.constraints; ++i) {
    const bool eq = pick(100) < 30;
    const int shape = static_cast<int>(pick(100));
    // Mostly one variable side, sometimes two, rarely none.
    TypeTerm l, r;
    if (shape < 45) {
      l = side(true);
      r = side(false);
    } else if (shape < 80) {
      l = side(false);
      r = side(true);
    } else if (shape < 95) {
      l = side(true);
      r = side(true);
    } else {
      l = side(false);
      r = side(false);
    }
    out.insert(eq ? Constraint::eq(l, r) : Constraint::sub(l, r));
  }
  return out;
}

}  // namespace decosort
