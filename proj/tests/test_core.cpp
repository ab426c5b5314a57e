#include <gtest/gtest.h>

#include <random>

#include "decosort/context.h"
#include "decosort/core.h"
#include "support.h"

using namespace decosort;

namespace {

const TypeTerm kZl = DecoratedSort::of("Z", "l");
const TypeTerm kZq = DecoratedSort::any("Z");
const TypeTerm kNq = DecoratedSort::any("N");
const TypeTerm kNone = DecoratedSort::of("N", "one");

TypeTerm v(std::uint32_t i) { return TypeTerm::var(i); }

Context ex() { return Context(testing_support::gamma_ex()); }

// The constraint set printed for the resolution example, duplicates kept.
std::vector<Constraint> printed_example_set() {
  using C = Constraint;
  return {C::eq(v(5), kZl),  C::eq(v(10), v(1)), C::eq(v(5), kZl),  C::eq(v(10), kZl),
          C::eq(v(9), v(2)), C::eq(v(5), kZl),   C::sub(v(9), kZq), C::eq(v(8), v(3)),
          C::eq(v(5), kZl),  C::eq(v(8), kZl),   C::eq(v(6), kZl),  C::eq(v(7), kNone),
          C::eq(v(6), kZl),  C::sub(v(7), kZq),  C::sub(v(5), v(4)), C::eq(v(6), v(4)),
          C::eq(v(2), v(2))};
}

}  // namespace

TEST(Printing, TypesAndConstraints) {
  EXPECT_EQ(to_string(kZl), "Z^l");
  EXPECT_EQ(to_string(kZq), "Z^?");
  EXPECT_EQ(to_string(v(5)), "α5");
  EXPECT_EQ(to_string(TypeTerm::hole()), "?");
  EXPECT_EQ(to_string(TypeTerm::wt()), "wt");
  EXPECT_EQ(to_string(Constraint::eq(v(5), kZl)), "α5 =_s Z^l");
  EXPECT_EQ(to_string(Constraint::sub(v(5), kZq)), "α5 <:_s Z^?");
  EXPECT_EQ(to_string(testing_support::example_rule(kZq)),
            "l(x*,y,z*) << [Z^?] l(one()) -> (y)");
}

TEST(ConstraintSet, InsertionOrderWithoutDuplicates) {
  ConstraintSet cs;
  EXPECT_TRUE(cs.insert(Constraint::eq(v(1), kZl)));
  EXPECT_TRUE(cs.insert(Constraint::sub(v(2), kZq)));
  EXPECT_FALSE(cs.insert(Constraint::eq(v(1), kZl)));
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0], Constraint::eq(v(1), kZl));
  cs.erase_at(0);
  EXPECT_FALSE(cs.contains(Constraint::eq(v(1), kZl)));
  EXPECT_TRUE(cs.insert(Constraint::eq(v(1), kZl)));
  EXPECT_EQ(cs[1], Constraint::eq(v(1), kZl));
}

TEST(ConstraintSet, SameElementsIgnoresOrder) {
  ConstraintSet a{Constraint::eq(v(1), kZl), Constraint::sub(v(2), kZq)};
  ConstraintSet b{Constraint::sub(v(2), kZq), Constraint::eq(v(1), kZl)};
  EXPECT_TRUE(a.same_elements(b));
  EXPECT_FALSE(a == b);
}

TEST(Substitution, Apply) {
  Substitution s;
  s.bind(TypeVar{5}, kZl);
  EXPECT_EQ(s.apply(v(5)), kZl);
  EXPECT_EQ(Substitution{}.apply(v(5)), v(5));
  EXPECT_EQ(s.apply(v(6)), v(6));
  EXPECT_EQ(s.apply(TypeTerm::wt()), TypeTerm::wt());
}

TEST(Substitution, ChainNormalizesToFixedPoint) {
  Substitution s;
  s.bind(TypeVar{1}, v(2));
  s.bind(TypeVar{2}, kNq);
  s.normalize();
  ASSERT_NE(s.lookup(TypeVar{1}), nullptr);
  EXPECT_EQ(*s.lookup(TypeVar{1}), kNq);
  EXPECT_EQ(*s.lookup(TypeVar{2}), kNq);
}

TEST(Substitution, SelfBindingIgnored) {
  Substitution s;
  s.bind(TypeVar{3}, v(3));
  EXPECT_TRUE(s.empty());
}

TEST(Substitution, ApplyIsIdempotentOnNormalized) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    Substitution s;
    const std::vector<TypeTerm> grounds{kZl, kZq, kNq, kNone};
    for (std::uint32_t i = 1; i <= 6; ++i) {
      const auto roll = rng() % 3;
      // Images point only at larger variables, so there are no cycles.
      if (roll == 0 && i < 6) s.bind(TypeVar{i}, v(i + 1 + rng() % (6 - i)));
      if (roll == 1) s.bind(TypeVar{i}, grounds[rng() % grounds.size()]);
    }
    s.normalize();
    for (std::uint32_t i = 1; i <= 7; ++i) {
      EXPECT_EQ(s.apply(s.apply(v(i))), s.apply(v(i)));
      // After normalization one lookup suffices.
      const TypeTerm* img = s.lookup(TypeVar{i});
      if (img != nullptr) {
        EXPECT_EQ(*img, s.apply(v(i)));
      }
    }
  }
}

TEST(Satisfaction, Examples) {
  const Context ctx = ex();
  Substitution s;
  s.bind(TypeVar{2}, kZq);
  EXPECT_TRUE(subst_satisfies(s, Constraint::sub(v(2), kZq), ctx));
  EXPECT_TRUE(subst_satisfies(Substitution{}, Constraint::eq(kZl, kZl), ctx));
  Substitution t;
  t.bind(TypeVar{1}, kNone);
  EXPECT_FALSE(subst_satisfies(t, Constraint::sub(v(1), kZl), ctx));
  EXPECT_TRUE(subst_satisfies(t, Constraint::sub(v(1), kZq), ctx));
}

TEST(Satisfaction, ReflexiveEqualityAlwaysHolds) {
  const Context ctx = ex();
  Substitution s;
  s.bind(TypeVar{1}, kNone);
  for (const TypeTerm& t : {v(1), v(2), kZl, kZq, kNq, kNone, TypeTerm::wt()}) {
    EXPECT_TRUE(subst_satisfies(s, Constraint::eq(t, t), ctx)) << to_string(t);
    EXPECT_TRUE(subst_satisfies(Substitution{}, Constraint::eq(t, t), ctx))
        << to_string(t);
  }
}

TEST(FreeVars, Examples) {
  EXPECT_EQ(free_type_vars(ConstraintSet{Constraint::eq(v(1), kZl)}),
            (std::set<TypeVar>{TypeVar{1}}));
  EXPECT_TRUE(free_type_vars(ConstraintSet{}).empty());
  ConstraintSet printed;
  for (const auto& c : printed_example_set()) printed.insert(c);
  std::set<TypeVar> want;
  for (std::uint32_t i = 1; i <= 10; ++i) want.insert(TypeVar{i});
  EXPECT_EQ(free_type_vars(printed), want);
}

TEST(FreeVars, UnionProperty) {
  std::mt19937_64 rng(11);
  const std::vector<TypeTerm> pool{v(1), v(2), v(3), v(4), kZl, kNq};
  for (int round = 0; round < 200; ++round) {
    ConstraintSet a, b;
    for (int i = 0; i < 4; ++i) {
      a.insert(Constraint::eq(pool[rng() % pool.size()], pool[rng() % pool.size()]));
      b.insert(Constraint::sub(pool[rng() % pool.size()], pool[rng() % pool.size()]));
    }
    ConstraintSet u = a;
    u.insert_all(b);
    std::set<TypeVar> want = free_type_vars(a);
    for (auto x : free_type_vars(b)) want.insert(x);
    EXPECT_EQ(free_type_vars(u), want);
  }
}

TEST(Variables, FirstOccurrenceOrder) {
  Rule r = testing_support::example_rule(kZq);
  auto vars = collect_variables(r);
  ASSERT_EQ(vars.size(), 3u);
  EXPECT_EQ(vars[0], Term::star("x"));
  EXPECT_EQ(vars[1], Term::var("y"));
  EXPECT_EQ(vars[2], Term::star("z"));
}

TEST(Variables, StarAndPlainWithSameNameAreDistinct) {
  Rule r{Cond::match(Term::list("l", {Term::star("x")}), Term::var("x"), kZq), {}};
  EXPECT_EQ(collect_variables(r).size(), 2u);
}

TEST(Labels, RoundTrip) {
  for (int i = 0; i <= static_cast<int>(RuleLabel::CTRule); ++i) {
    const auto l = static_cast<RuleLabel>(i);
    const auto back = label_from_name(label_name(l));
    ASSERT_TRUE(back.has_value()) << label_name(l);
    EXPECT_EQ(*back, l);
  }
  EXPECT_FALSE(label_from_name("T-Nothing").has_value());
}

TEST(Terms, Prefix) {
  Term t = Term::list("l", {Term::star("x"), Term::var("y")});
  EXPECT_EQ(t.prefix(), Term::list("l", {Term::star("x")}));
  EXPECT_EQ(to_string(Term::list("l")), "l()");
}
