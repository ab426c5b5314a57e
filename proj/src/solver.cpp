#include "decosort/solver.h"

#include <functional>

namespace decosort {

Degree degree(const ConstraintSet& cs) {
  Degree d;
  d.m = cs.size();
  for (const auto& c : cs) {
    if (c.is_sub()) ++d.n;
  }
  return d;
}

std::string solve_kind_name(SolveOutcome::Kind k) {
  switch (k) {
    case SolveOutcome::Kind::Solved:
      return "Solved";
    case SolveOutcome::Kind::Failed:
      return "Failed";
    case SolveOutcome::Kind::Stuck:
      return "Stuck";
  }
  return "?";
}

std::optional<DecoratedSort> default_ground(const Context& ctx) {
  if (ctx.sorts().empty()) return std::nullopt;
  return DecoratedSort{ctx.sorts().front(), Decoration::any()};
}

namespace {

bool ground_sub(const Constraint& c) {
  return c.is_sub() && c.lhs.is_ground() && c.rhs.is_ground();
}
// s <: α
bool lower_bound(const Constraint& c) {
  return c.is_sub() && c.lhs.is_ground() && c.rhs.is_var();
}
// α <: s
bool upper_bound(const Constraint& c) {
  return c.is_sub() && c.lhs.is_var() && c.rhs.is_ground();
}
bool var_sub(const Constraint& c) {
  return c.is_sub() && c.lhs.is_var() && c.rhs.is_var();
}

using PairTest = std::function<bool(const Constraint&, const Constraint&)>;

// Unordered pairs {C[i], C[j]} with i < j.
std::optional<std::pair<std::size_t, std::size_t>> find_pair(
    const ConstraintSet& cs, const PairTest& test) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (test(cs[i], cs[j])) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

// Ordered pairs (C[i], C[j]) with i != j, for patterns whose two members
// play different roles.
std::optional<std::pair<std::size_t, std::size_t>> find_ordered(
    const ConstraintSet& cs, const PairTest& test) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (i != j && test(cs[i], cs[j])) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> find_one(
    const ConstraintSet& cs, const std::function<bool(std::size_t)>& test) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (test(i)) return i;
  }
  return std::nullopt;
}

bool occurs_elsewhere(const ConstraintSet& cs, std::size_t skip, TypeVar v) {
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (k == skip) continue;
    if (free_type_vars(cs[k]).count(v) > 0) return true;
  }
  return false;
}

struct Rewrite {
  std::string rule;
  std::vector<std::size_t> consumed;
  std::vector<Constraint> produced;  // placed where the first consumed was
  std::optional<std::pair<TypeVar, TypeTerm>> binding;
};

std::optional<Rewrite> find_rewrite(const Context& ctx, const ConstraintSet& cs) {
  auto holds = [&](const TypeTerm& a, const TypeTerm& b) {
    return ctx.subtype_holds(a.as_ground(), b.as_ground());
  };

  if (auto i = find_one(cs, [&](std::size_t k) {
        return cs[k].is_eq() && cs[k].lhs == cs[k].rhs;
      })) {
    return Rewrite{"1", {*i}, {}, std::nullopt};
  }
  if (auto i = find_one(cs, [&](std::size_t k) {
        return cs[k].is_sub() && cs[k].lhs == cs[k].rhs;
      })) {
    return Rewrite{"2", {*i}, {}, std::nullopt};
  }
  if (auto i = find_one(cs, [&](std::size_t k) {
        return ground_sub(cs[k]) && holds(cs[k].lhs, cs[k].rhs);
      })) {
    return Rewrite{"3", {*i}, {}, std::nullopt};
  }
  if (auto i = find_one(cs, [&](std::size_t k) {
        return cs[k].is_eq() && cs[k].lhs.is_var();
      })) {
    return Rewrite{"4", {*i}, {}, std::make_pair(cs[*i].lhs.as_var(), cs[*i].rhs)};
  }
  if (auto i = find_one(cs, [&](std::size_t k) {
        return cs[k].is_eq() && cs[k].rhs.is_var();
      })) {
    return Rewrite{"5", {*i}, {}, std::make_pair(cs[*i].rhs.as_var(), cs[*i].lhs)};
  }

  std::optional<DecoratedSort> lub;
  if (auto p = find_pair(cs, [&](const Constraint& a, const Constraint& b) {
        if (!lower_bound(a) || !lower_bound(b) || a.rhs != b.rhs) return false;
        lub = ctx.common_supersort(a.lhs.as_ground(), b.lhs.as_ground());
        return lub.has_value();
      })) {
    return Rewrite{"6",
                   {p->first, p->second},
                   {Constraint::sub(*lub, cs[p->first].rhs)},
                   std::nullopt};
  }
  auto same_var_uppers = [](const Constraint& a, const Constraint& b) {
    return upper_bound(a) && upper_bound(b) && a.lhs == b.lhs;
  };
  if (auto p = find_pair(cs, [&](const Constraint& a, const Constraint& b) {
        return same_var_uppers(a, b) && holds(a.rhs, b.rhs);
      })) {
    return Rewrite{"7a", {p->second}, {}, std::nullopt};
  }
  if (auto p = find_pair(cs, [&](const Constraint& a, const Constraint& b) {
        return same_var_uppers(a, b) && holds(b.rhs, a.rhs);
      })) {
    return Rewrite{"7b", {p->first}, {}, std::nullopt};
  }
  if (auto p = find_pair(cs, [&](const Constraint& a, const Constraint& b) {
        return a.is_sub() && b.is_sub() && a.lhs == b.rhs && a.rhs == b.lhs;
      })) {
    const Constraint& a = cs[p->first];
    return Rewrite{"8", {p->first, p->second}, {Constraint::eq(a.lhs, a.rhs)},
                   std::nullopt};
  }
  // (9) α1 <: α, α <: α2
  if (auto p = find_ordered(cs, [&](const Constraint& a, const Constraint& b) {
        return var_sub(a) && var_sub(b) && a.rhs == b.lhs;
      })) {
    const Constraint& a = cs[p->first];
    const Constraint& b = cs[p->second];
    return Rewrite{"9", {p->first, p->second}, {Constraint::sub(a.lhs, b.rhs)},
                   std::make_pair(a.rhs.as_var(), b.rhs)};
  }
  // (10) s^g <: α, α <: α1
  if (auto p = find_ordered(cs, [&](const Constraint& a, const Constraint& b) {
        return lower_bound(a) && var_sub(b) && a.rhs == b.lhs;
      })) {
    const Constraint& a = cs[p->first];
    const Constraint& b = cs[p->second];
    return Rewrite{"10", {p->first, p->second}, {Constraint::sub(a.lhs, b.rhs)},
                   std::make_pair(a.rhs.as_var(), b.rhs)};
  }
  // (11) α1 <: α, α <: s^g
  if (auto p = find_ordered(cs, [&](const Constraint& a, const Constraint& b) {
        return var_sub(a) && upper_bound(b) && a.rhs == b.lhs;
      })) {
    const Constraint& a = cs[p->first];
    const Constraint& b = cs[p->second];
    return Rewrite{"11", {p->first, p->second}, {Constraint::sub(a.lhs, b.rhs)},
                   std::make_pair(a.rhs.as_var(), a.lhs)};
  }
  // (12) s1 <: α, α <: s2 with s1 <: s2
  if (auto p = find_ordered(cs, [&](const Constraint& a, const Constraint& b) {
        return lower_bound(a) && upper_bound(b) && a.rhs == b.lhs &&
               holds(a.lhs, b.rhs);
      })) {
    const Constraint& a = cs[p->first];
    const Constraint& b = cs[p->second];
    return Rewrite{"12", {p->first, p->second}, {},
                   std::make_pair(a.rhs.as_var(), b.rhs)};
  }
  if (auto i = find_one(cs, [&](std::size_t k) {
        return cs[k].is_sub() && cs[k].lhs.is_var() &&
               !occurs_elsewhere(cs, k, cs[k].lhs.as_var());
      })) {
    return Rewrite{"13", {*i}, {}, std::make_pair(cs[*i].lhs.as_var(), cs[*i].rhs)};
  }
  if (auto i = find_one(cs, [&](std::size_t k) {
        return cs[k].is_sub() && cs[k].rhs.is_var() &&
               !occurs_elsewhere(cs, k, cs[k].rhs.as_var());
      })) {
    return Rewrite{"14", {*i}, {}, std::make_pair(cs[*i].rhs.as_var(), cs[*i].lhs)};
  }
  return std::nullopt;
}

ConstraintSet apply_rewrite(const ConstraintSet& cs, const Rewrite& rw) {
  Substitution step;
  if (rw.binding) step.bind(rw.binding->first, rw.binding->second);
  ConstraintSet out;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (k == rw.consumed.front()) {
      for (const auto& c : rw.produced) out.insert(step.apply(c));
    }
    bool consumed = false;
    for (auto idx : rw.consumed) consumed = consumed || idx == k;
    if (!consumed) out.insert(step.apply(cs[k]));
  }
  return out;
}

}  // namespace

std::optional<FailureHit> detect_failure(const Context& ctx,
                                         const ConstraintSet& cs) {
  auto holds = [&](const TypeTerm& a, const TypeTerm& b) {
    return ctx.subtype_holds(a.as_ground(), b.as_ground());
  };
  auto hit = [&](int rule, std::pair<std::size_t, std::size_t> p) {
    return FailureHit{rule, {cs[p.first], cs[p.second]}};
  };

  if (auto p = find_ordered(cs, [&](const Constraint& a, const Constraint& b) {
        return lower_bound(a) && upper_bound(b) && a.rhs == b.lhs &&
               !holds(a.lhs, b.rhs);
      })) {
    return hit(1, *p);
  }
  if (auto p = find_pair(cs, [&](const Constraint& a, const Constraint& b) {
        return lower_bound(a) && lower_bound(b) && a.rhs == b.rhs &&
               !ctx.common_supersort(a.lhs.as_ground(), b.lhs.as_ground());
      })) {
    return hit(2, *p);
  }
  if (auto p = find_pair(cs, [&](const Constraint& a, const Constraint& b) {
        return upper_bound(a) && upper_bound(b) && a.lhs == b.lhs &&
               !holds(a.rhs, b.rhs) && !holds(b.rhs, a.rhs);
      })) {
    return hit(3, *p);
  }
  for (const auto& c : cs) {
    if (ground_sub(c) && !holds(c.lhs, c.rhs)) return FailureHit{4, {c}};
  }
  for (const auto& c : cs) {
    if (c.is_eq() && c.lhs.is_ground() && c.rhs.is_ground() && c.lhs != c.rhs) {
      return FailureHit{5, {c}};
    }
  }
  return std::nullopt;
}

SolveOutcome solve(const Context& ctx, const ConstraintSet& cs,
                   const SolveOptions& opts) {
  SolveOutcome out;
  ConstraintSet current = cs;
  Substitution sigma;
  while (true) {
    if (current.empty()) break;
    if (auto f = detect_failure(ctx, current)) {
      out.kind = SolveOutcome::Kind::Failed;
      out.failure = std::move(*f);
      out.residual = std::move(current);
      return out;
    }
    auto rw = find_rewrite(ctx, current);
    if (!rw) {
      out.kind = SolveOutcome::Kind::Stuck;
      out.residual = std::move(current);
      return out;
    }
    ConstraintSet next = apply_rewrite(current, *rw);
    SolveStep step;
    step.rule = rw->rule;
    for (auto idx : rw->consumed) step.consumed.push_back(current[idx]);
    step.produced = rw->produced;
    step.binding = rw->binding;
    step.before = degree(current);
    step.after = degree(next);
    out.trace.push_back(std::move(step));
    if (rw->binding) sigma.bind(rw->binding->first, rw->binding->second);
    current = std::move(next);
  }

  sigma.normalize();
  if (opts.complete) {
    if (auto dflt = default_ground(ctx)) {
      for (const auto& v : free_type_vars(cs)) {
        TypeTerm img = sigma.apply(v);
        if (img.is_var()) sigma.bind(img.as_var(), *dflt);
      }
      sigma.normalize();
    }
  }
  out.kind = SolveOutcome::Kind::Solved;
  out.sigma = std::move(sigma);
  return out;
}

}  // namespace decosort
