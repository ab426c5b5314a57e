#include <gtest/gtest.h>

#include <map>

#include "decosort/infer.h"
#include "decosort/oracle.h"
#include "support.h"

using namespace decosort;
using testing_support::equal_modulo_renaming;
using testing_support::example_rule;
using testing_support::gamma_ex;

namespace {

const TypeTerm kZl = DecoratedSort::of("Z", "l");
const TypeTerm kZq = DecoratedSort::any("Z");
const TypeTerm kNone = DecoratedSort::of("N", "one");

TypeTerm v(std::uint32_t i) { return TypeTerm::var(i); }

Signature open_example() {
  Signature sig = gamma_ex();
  sig.clear_typings();
  return sig;
}

// Γ_inf: the open example with x*, y, z* at α1, α2, α3.
Context gamma_inf() {
  FreshSupply fresh;
  return init_context(open_example(), example_rule(TypeTerm::hole()), fresh);
}

void collect_conclusions(const Derivation& d, std::vector<TypeTerm>& out) {
  out.push_back(d.conclusion.type);
  for (const auto& p : d.premises) collect_conclusions(p, out);
}

}  // namespace

TEST(InitContext, FreshVariablesInOrder) {
  Context ctx = gamma_inf();
  EXPECT_EQ(ctx.typing(Term::star("x")), v(1));
  EXPECT_EQ(ctx.typing(Term::var("y")), v(2));
  EXPECT_EQ(ctx.typing(Term::star("z")), v(3));
}

TEST(InitContext, NoVariables) {
  FreshSupply fresh;
  Rule r{Cond::match(Term::app("one"), Term::app("one"), kZq), {}};
  Context ctx = init_context(open_example(), r, fresh);
  EXPECT_EQ(ctx.signature(), open_example());
  EXPECT_EQ(fresh.peek(), 1u);
}

TEST(InitContext, SharedVariableGetsOneBinding) {
  FreshSupply fresh;
  Rule r{Cond::conj({Cond::match(Term::var("y"), Term::app("one"), TypeTerm::hole()),
                     Cond::match(Term::var("y"), Term::app("one"), TypeTerm::hole())}),
         {}};
  Context ctx = init_context(open_example(), r, fresh);
  EXPECT_EQ(ctx.signature().var_types.size(), 1u);
  EXPECT_EQ(fresh.peek(), 2u);
}

TEST(InitContext, GroundTypingsKept) {
  Signature sig = open_example();
  sig.set_var_type("y", kZq);
  FreshSupply fresh;
  Context ctx = init_context(sig, example_rule(TypeTerm::hole()), fresh);
  EXPECT_EQ(ctx.typing(Term::var("y")), kZq);
  EXPECT_EQ(ctx.typing(Term::star("x")), v(1));
  EXPECT_EQ(ctx.typing(Term::star("z")), v(2));
}

TEST(InferTerm, EmptyList) {
  Context ctx = gamma_inf();
  FreshSupply fresh(5);
  auto out = infer_term(ctx, Term::list("l"), fresh);
  ASSERT_TRUE(out);
  EXPECT_EQ(out.result().type, v(5));
  EXPECT_EQ(out.result().constraints, (ConstraintSet{Constraint::eq(v(5), kZl)}));
  EXPECT_EQ(out.result().derivation.label, RuleLabel::CTEmpty);
}

TEST(InferTerm, Constant) {
  Context ctx = gamma_inf();
  FreshSupply fresh(7);
  auto out = infer_term(ctx, Term::app("one"), fresh);
  ASSERT_TRUE(out);
  EXPECT_EQ(out.result().type, v(7));
  EXPECT_EQ(out.result().constraints, (ConstraintSet{Constraint::eq(v(7), kNone)}));
  EXPECT_EQ(out.result().derivation.label, RuleLabel::CTFun);
}

TEST(InferTerm, ListOfConstant) {
  Context ctx = gamma_inf();
  FreshSupply fresh(6);
  auto out = infer_term(ctx, Term::list("l", {Term::app("one")}), fresh);
  ASSERT_TRUE(out);
  EXPECT_EQ(out.result().type, v(6));
  EXPECT_TRUE(out.result().constraints.same_elements(
      ConstraintSet{Constraint::eq(v(6), kZl), Constraint::sub(v(7), kZq),
                    Constraint::eq(v(7), kNone)}));
  EXPECT_EQ(out.result().derivation.label, RuleLabel::CTElem);
}

TEST(InferTerm, Variable) {
  Signature sig = open_example();
  sig.set_var_type("x", v(1));
  Context ctx(sig);
  FreshSupply fresh(2);
  auto out = infer_term(ctx, Term::var("x"), fresh);
  ASSERT_TRUE(out);
  EXPECT_EQ(out.result().type, v(2));
  EXPECT_EQ(out.result().constraints, (ConstraintSet{Constraint::eq(v(2), v(1))}));
}

TEST(InferTerm, Errors) {
  Context ctx = gamma_inf();
  FreshSupply fresh(10);
  EXPECT_EQ(infer_term(ctx, Term::star("x"), fresh).error().kind,
            CheckError::Kind::StarOutsideList);
  EXPECT_EQ(infer_term(ctx, Term::var("w"), fresh).error().kind,
            CheckError::Kind::UndeclaredVariable);
  EXPECT_EQ(infer_term(ctx, Term::app("zz"), fresh).error().kind, CheckError::Kind::NoRank);
}

TEST(InferCond, ExampleMatch) {
  Inference inf = infer(open_example(), example_rule(TypeTerm::hole()));
  ASSERT_TRUE(inf.outcome);
  const Derivation& match = inf.outcome.result().derivation.premises.at(0);
  ASSERT_TRUE(match.conclusion.constraints);
  const TypeTerm ann = inf.rule.cond.at;
  const TypeTerm pattern = match.premises.at(0).conclusion.type;
  const TypeTerm subject = match.premises.at(1).conclusion.type;
  EXPECT_TRUE(match.conclusion.constraints->contains(Constraint::sub(pattern, ann)));
  EXPECT_TRUE(match.conclusion.constraints->contains(Constraint::eq(subject, ann)));
}

TEST(InferCond, TrivialMatch) {
  Signature sig = open_example();
  sig.set_var_type("x", v(1));
  Context ctx(sig);
  FreshSupply fresh(2);
  Cond c = Cond::match(Term::var("x"), Term::var("x"), v(9));
  auto out = infer_cond(ctx, c, fresh);
  ASSERT_TRUE(out);
  // Fresh α2 and α3 for the two occurrences.
  ConstraintSet want{Constraint::eq(v(2), v(1)), Constraint::eq(v(3), v(1)),
                     Constraint::sub(v(2), v(9)), Constraint::eq(v(3), v(9))};
  EXPECT_TRUE(out.result().constraints.same_elements(want));
  EXPECT_EQ(out.result().type, TypeTerm::wt());
}

TEST(InferCond, ConjunctionIsUnion) {
  Signature sig = open_example();
  Context ctx(sig);
  Cond one = Cond::match(Term::app("one"), Term::app("one"), kZq);
  FreshSupply f1;
  auto single = infer_cond(ctx, one, f1);
  FreshSupply f2;
  auto both = infer_cond(ctx, Cond::conj({one, one}), f2);
  ASSERT_TRUE(single);
  ASSERT_TRUE(both);
  EXPECT_EQ(both.result().derivation.label, RuleLabel::CTConj);
  // The copies differ only by fresh names, so the union doubles.
  EXPECT_EQ(both.result().constraints.size(), 2 * single.result().constraints.size());
  ConstraintSet u = both.result().derivation.premises[0].conclusion.constraints.value();
  u.insert_all(both.result().derivation.premises[1].conclusion.constraints.value());
  EXPECT_EQ(u, both.result().constraints);
}

TEST(InferCond, GroundAnnotationWithoutVariables) {
  Context ctx(open_example());
  FreshSupply fresh;
  Cond c = Cond::match(Term::app("one"), Term::app("one"), DecoratedSort::of("N", "one"));
  auto out = infer_cond(ctx, Cond::conj({c, c}), fresh);
  ASSERT_TRUE(out);
  // Per copy: α_p = N^one, α_s = N^one, α_p <: N^one; the match's α_s = N^one
  // is already present.
  EXPECT_EQ(out.result().constraints.size(), 6u);
}

TEST(InferRule, ExampleRuleConstraints) {
  Inference inf = infer(open_example(), example_rule(TypeTerm::hole()));
  ASSERT_TRUE(inf.outcome);
  const auto& res = inf.outcome.result();
  const ConstraintSet& ccond = *res.derivation.premises.at(0).conclusion.constraints;
  const TypeTerm y = *inf.context.typing(Term::var("y"));
  const TypeTerm action = res.derivation.premises.at(1).conclusion.type;
  ConstraintSet want = ccond;
  want.insert(Constraint::eq(action, y));
  want.insert(Constraint::eq(y, y));
  EXPECT_TRUE(res.constraints.same_elements(want));
}

TEST(InferRule, EmptyAction) {
  Rule r = example_rule(TypeTerm::hole());
  r.action.clear();
  Inference inf = infer(open_example(), r);
  ASSERT_TRUE(inf.outcome);
  EXPECT_EQ(inf.outcome.result().constraints,
            *inf.outcome.result().derivation.premises.at(0).conclusion.constraints);
}

TEST(InferRule, ConstantAction) {
  Rule r = example_rule(TypeTerm::hole());
  r.action = {Term::app("one")};
  Inference inf = infer(open_example(), r);
  ASSERT_TRUE(inf.outcome);
  const auto& res = inf.outcome.result();
  ConstraintSet want = *res.derivation.premises.at(0).conclusion.constraints;
  const TypeTerm k = res.derivation.premises.at(1).conclusion.type;
  ASSERT_TRUE(k.is_var());
  want.insert(Constraint::eq(k, kNone));
  EXPECT_TRUE(res.constraints.same_elements(want));
}

TEST(InferRule, ExampleModuloRenaming) {
  Inference inf = infer(open_example(), example_rule(TypeTerm::hole()));
  ASSERT_TRUE(inf.outcome);
  // The figure's numbering of the whole rule set.
  ConstraintSet want{Constraint::eq(v(5), kZl),  Constraint::eq(v(5), v(1)),
                     Constraint::sub(v(8), kZq), Constraint::eq(v(8), v(2)),
                     Constraint::eq(v(5), v(3)), Constraint::eq(v(6), kZl),
                     Constraint::sub(v(7), kZq), Constraint::eq(v(7), kNone),
                     Constraint::sub(v(5), v(4)), Constraint::eq(v(6), v(4)),
                     Constraint::eq(v(9), v(2)), Constraint::eq(v(2), v(2))};
  EXPECT_TRUE(equal_modulo_renaming({inf.outcome.result().constraints}, {want}));
}

TEST(InferRule, ShapeAndFreshnessOnGeneratedInstances) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Instance inst = gen_instance(seed);
    inst.signature.clear_typings();
    Inference inf = infer(inst.signature, inst.rule);
    if (!inf.outcome) continue;
    const auto& res = inf.outcome.result();
    for (const auto& c : res.constraints) {
      EXPECT_TRUE(c.lhs.is_var() || c.rhs.is_var()) << "seed " << seed << ": " << to_string(c);
    }
    // A list spine is shared by the list node, its prefixes and the star
    // arguments merged into it; every other conclusion variable is new.
    std::vector<TypeTerm> types;
    collect_conclusions(res.derivation, types);
    std::map<TypeTerm, int> seen;
    for (const auto& t : types) {
      if (t.is_var()) ++seen[t];
    }
    std::function<void(const Derivation&)> drop_spines = [&](const Derivation& d) {
      if (d.label == RuleLabel::CTElem || d.label == RuleLabel::CTMerge ||
          d.label == RuleLabel::CTStar) {
        for (const auto& p : d.premises) {
          if (p.conclusion.type == d.conclusion.type) --seen[p.conclusion.type];
        }
      }
      for (const auto& p : d.premises) drop_spines(p);
    };
    drop_spines(res.derivation);
    for (const auto& [t, n] : seen) {
      EXPECT_EQ(n, 1) << "seed " << seed << ": " << to_string(t);
    }
  }
}

TEST(InferRule, EveryJudgmentCarriesItsPremisesConstraints) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Instance inst = gen_instance(seed);
    inst.signature.clear_typings();
    Inference inf = infer(inst.signature, inst.rule);
    if (!inf.outcome) continue;
    std::function<void(const Derivation&)> walk = [&](const Derivation& d) {
      ASSERT_TRUE(d.conclusion.constraints.has_value());
      for (const auto& p : d.premises) {
        for (const auto& c : *p.conclusion.constraints) {
          EXPECT_TRUE(d.conclusion.constraints->contains(c)) << "seed " << seed;
        }
        walk(p);
      }
    };
    walk(inf.outcome.result().derivation);
  }
}

TEST(Instantiate, ReplacesTypingsAndAnnotations) {
  Inference inf = infer(open_example(), example_rule(TypeTerm::hole()));
  Substitution s;
  s.bind(TypeVar{2}, kZq);
  s.bind(inf.rule.cond.at.as_var(), kZl);
  Context ctx = instantiate(inf.context, s);
  EXPECT_EQ(ctx.typing(Term::var("y")), kZq);
  EXPECT_EQ(ctx.typing(Term::star("x")), v(1));
  EXPECT_EQ(instantiate(inf.rule, s).cond.at, kZl);
}
