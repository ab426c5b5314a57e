#pragma once

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <cstdio>
#include <set>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "decosort/context.h"
#include "decosort/core.h"
#include "decosort/syntax.h"

namespace testing_support {

inline std::string corpus(const std::string& name) {
  return std::string(DECOSORT_TEST_DIR) + "/corpus/" + name;
}
inline std::string golden(const std::string& name) {
  return std::string(DECOSORT_TEST_DIR) + "/golden/" + name;
}

// The running example: N <: Z, a list operator l over Z, the constant one,
// x* and z* at Z^l and y at Z^?.
inline decosort::Signature gamma_ex() {
  using namespace decosort;
  Signature sig;
  sig.add_sort("Z");
  sig.add_subsort("N", "Z");
  sig.var_ranks.push_back(VariadicRank::make("l", "Z", "Z"));
  sig.syn_ranks.push_back(SynRank::make("one", {}, "N"));
  sig.star_types.emplace_back("x", DecoratedSort::of("Z", "l"));
  sig.star_types.emplace_back("z", DecoratedSort::of("Z", "l"));
  sig.var_types.emplace_back("y", DecoratedSort::any("Z"));
  return sig;
}

inline decosort::Rule example_rule(decosort::TypeTerm at) {
  using namespace decosort;
  Term pattern = Term::list("l", {Term::star("x"), Term::var("y"), Term::star("z")});
  Term subject = Term::list("l", {Term::app("one")});
  return Rule{Cond::match(pattern, subject, at), {Term::var("y")}};
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline decosort::SourceFile load(const std::string& path) {
  return decosort::parse(slurp(path));
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the command-line tool with the given arguments.
inline RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string base = std::string(DECOSORT_BINARY_DIR) + "/cli_run_" +
                           std::to_string(::getpid()) + "_" +
                           std::to_string(counter++);
  const std::string cmd = std::string(DECOSORT_CLI) + " " + args + " >" + base +
                          ".out 2>" + base + ".err";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(base + ".out");
  r.err = slurp(base + ".err");
  std::remove((base + ".out").c_str());
  std::remove((base + ".err").c_str());
  return r;
}

// Searches for a consistent bijective renaming of type variables under which
// every `got` set equals the corresponding `want` set. Equalities compare as
// unordered pairs.
inline bool equal_modulo_renaming(const std::vector<decosort::ConstraintSet>& got,
                                  const std::vector<decosort::ConstraintSet>& want) {
  using namespace decosort;
  if (got.size() != want.size()) return false;
  auto canon = [](Constraint c) {
    if (c.is_eq() && c.rhs < c.lhs) std::swap(c.lhs, c.rhs);
    return c;
  };
  std::vector<std::set<Constraint>> w(want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    for (const auto& c : want[i]) w[i].insert(canon(c));
  }
  std::vector<std::set<Constraint>> g(got.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    for (const auto& c : got[i]) g[i].insert(canon(c));
    if (g[i].size() != w[i].size()) return false;
  }
  std::set<TypeVar> gv_set, wv_set;
  for (const auto& s : got) for (auto v : free_type_vars(s)) gv_set.insert(v);
  for (const auto& s : want) for (auto v : free_type_vars(s)) wv_set.insert(v);
  if (gv_set.size() != wv_set.size()) return false;
  std::vector<TypeVar> gv(gv_set.begin(), gv_set.end());
  std::vector<TypeVar> wv(wv_set.begin(), wv_set.end());

  std::map<TypeVar, TypeVar> map;
  std::set<TypeVar> used;
  auto rename = [&](const TypeTerm& t, bool& complete) -> TypeTerm {
    if (!t.is_var()) return t;
    auto it = map.find(t.as_var());
    if (it == map.end()) {
      complete = false;
      return t;
    }
    return it->second;
  };
  // Every fully renamed constraint of a got set must be in the want set.
  auto consistent = [&]() {
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (const auto& c : g[i]) {
        bool complete = true;
        Constraint r{c.kind, rename(c.lhs, complete), rename(c.rhs, complete)};
        if (complete && w[i].count(canon(r)) == 0) return false;
      }
    }
    return true;
  };
  std::function<bool(std::size_t)> search = [&](std::size_t k) {
    if (k == gv.size()) return true;
    for (auto cand : wv) {
      if (used.count(cand) > 0) continue;
      map[gv[k]] = cand;
      used.insert(cand);
      if (consistent() && search(k + 1)) return true;
      used.erase(cand);
      map.erase(gv[k]);
    }
    return false;
  };
  return search(0);
}

}  // namespace testing_support
