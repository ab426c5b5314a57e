// Command-line driver: validate, check, infer, solve and gen.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "decosort/checker.h"
#include "decosort/infer.h"
#include "decosort/oracle.h"
#include "decosort/report.h"
#include "decosort/solver.h"
#include "decosort/syntax.h"

using namespace decosort;

namespace {

enum Exit {
  kOk = 0,
  kTypeError = 1,
  kParseError = 2,
  kIllFormed = 3,
  kStuck = 4,
  kBudget = 5,
};

struct Options {
  std::string file;
  bool trace = false;
  std::string format = "text";
  std::uint64_t max_enum = 1'000'000;
  bool oracle = false;
  std::uint64_t seed = 0;
  int size = 3;
  bool simple = false;
};

bool json(const Options& o) { return o.format == "json"; }

// Loads and validates; returns an exit code when processing must stop.
std::optional<int> load(const Options& o, SourceFile& out) {
  std::ifstream in(o.file);
  if (!in) {
    std::cerr << o.file << ": error: cannot read file\n";
    return kParseError;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    out = parse(text);
  } catch (const ParseError& e) {
    std::cerr << format_parse_error(e, text, o.file);
    return kParseError;
  }
  return std::nullopt;
}

std::vector<Violation> violations(const SourceFile& f) {
  return Context(f.signature).validate();
}

void print_violations(const std::vector<Violation>& vs) {
  for (const auto& v : vs) {
    std::cerr << "violation: " << violation_kind_name(v.kind) << ": " << v.detail
              << "\n";
  }
}

std::string rule_header(const SourceFile& f, std::size_t i) {
  return "rule " + std::to_string(i + 1) + " (line " +
         std::to_string(f.rules[i].line) + ")";
}

void lint(const SourceFile& f, std::size_t i, const std::string& file) {
  for (const auto& v : unbound_action_variables(f.rules[i].rule)) {
    std::cerr << file << ":" << f.rules[i].line << ": warning: action variable "
              << v << " does not occur in the condition\n";
  }
}

int cmd_validate(const Options& o) {
  SourceFile f;
  if (auto rc = load(o, f)) return *rc;
  auto vs = violations(f);
  if (json(o)) {
    Json out{{"ok", vs.empty()}, {"violations", Json::array()}};
    for (const auto& v : vs) out["violations"].push_back(to_json(v));
    std::cout << out.dump(2) << "\n";
  } else if (vs.empty()) {
    std::cout << "signature ok\n";
  } else {
    for (const auto& v : vs) {
      std::cout << "violation: " << violation_kind_name(v.kind) << ": "
                << v.detail << "\n";
    }
  }
  return vs.empty() ? kOk : kIllFormed;
}

int cmd_check(const Options& o) {
  SourceFile f;
  if (auto rc = load(o, f)) return *rc;
  if (auto vs = violations(f); !vs.empty()) {
    print_violations(vs);
    return kIllFormed;
  }
  Context ctx(f.signature);
  int rc = kOk;
  Json rules = Json::array();
  for (std::size_t i = 0; i < f.rules.size(); ++i) {
    lint(f, i, o.file);
    auto outcome = check_rule(ctx, f.rules[i].rule);
    rc = std::max(rc, outcome ? int{kOk} : int{kTypeError});
    if (json(o)) {
      Json r{{"rule", to_string(f.rules[i].rule)}, {"line", f.rules[i].line},
             {"well_typed", outcome.well_typed()}};
      if (outcome) {
        if (o.trace) r["derivation"] = to_json(outcome.derivation());
      } else {
        r["error"] = to_json(outcome.error());
      }
      rules.push_back(std::move(r));
      continue;
    }
    std::cout << rule_header(f, i) << ": ";
    if (outcome) {
      std::cout << "well-typed\n";
      if (o.trace) std::cout << derivation_text(outcome.derivation());
    } else {
      const auto& e = outcome.error();
      std::cout << "error " << check_error_kind_name(e.kind) << " at " << e.path
                << ": " << e.detail << "\n";
    }
  }
  if (json(o)) std::cout << Json{{"rules", rules}}.dump(2) << "\n";
  return rc;
}

Json typings_json(const Context& ctx) {
  Json out = Json::array();
  for (const auto& [n, t] : ctx.signature().var_types) {
    out.push_back(Json{{"var", n}, {"type", to_json(t)}});
  }
  for (const auto& [n, t] : ctx.signature().star_types) {
    out.push_back(Json{{"var", n + "*"}, {"type", to_json(t)}});
  }
  return out;
}

void print_typings(const Context& ctx) {
  std::cout << "  context:";
  for (const auto& [n, t] : ctx.signature().var_types) {
    std::cout << " " << n << " : " << to_string(t) << ";";
  }
  for (const auto& [n, t] : ctx.signature().star_types) {
    std::cout << " " << n << "* : " << to_string(t) << ";";
  }
  std::cout << "\n";
}

int run_inference(const Options& o, bool solving) {
  SourceFile f;
  if (auto rc = load(o, f)) return *rc;
  if (auto vs = violations(f); !vs.empty()) {
    print_violations(vs);
    return kIllFormed;
  }
  int rc = kOk;
  Json rules = Json::array();
  for (std::size_t i = 0; i < f.rules.size(); ++i) {
    lint(f, i, o.file);
    Inference inf = infer(f.signature, f.rules[i].rule);
    Json r{{"rule", to_string(inf.rule)}, {"line", f.rules[i].line},
           {"context", typings_json(inf.context)}};
    if (!json(o)) {
      std::cout << rule_header(f, i) << ": " << to_string(inf.rule) << "\n";
      print_typings(inf.context);
    }
    if (!inf.outcome) {
      rc = std::max(rc, int{kTypeError});
      const auto& e = inf.outcome.error();
      if (json(o)) {
        r["error"] = to_json(e);
        rules.push_back(std::move(r));
      } else {
        std::cout << "  error " << check_error_kind_name(e.kind) << " at " << e.path
                  << ": " << e.detail << "\n";
      }
      continue;
    }
    const InferResult& res = inf.outcome.result();
    r["constraints"] = to_json(res.constraints);
    if (o.trace && !solving) r["derivation"] = to_json(res.derivation);
    if (!json(o)) {
      std::cout << "  constraints: " << to_string(res.constraints) << "\n";
      if (o.trace && !solving) std::cout << derivation_text(res.derivation);
    }
    if (solving) {
      SolveOutcome s = solve(inf.context, res.constraints);
      int code = s.solved() ? kOk : s.failed() ? kTypeError : kStuck;
      Json sj = to_json(s);
      if (!o.trace) sj.erase("trace");
      if (!json(o)) {
        std::cout << "  outcome: " << solve_kind_name(s.kind) << "\n";
        if (o.trace) std::cout << trace_text(s.trace);
        if (s.solved()) {
          for (const auto& [v, t] : s.sigma.bindings()) {
            std::cout << "    " << to_string(v) << " ↦ " << to_string(t) << "\n";
          }
        } else if (s.failed()) {
          std::cout << "  fail rule (" << s.failure.rule << ") on";
          for (const auto& c : s.failure.witness) std::cout << " [" << to_string(c) << "]";
          std::cout << "\n";
        } else {
          std::cout << "  residual: " << to_string(s.residual) << "\n";
        }
      }
      if (o.oracle) {
        EnumOptions eo;
        eo.budget = o.max_enum;
        auto er = enumerate_solutions(inf.context, res.constraints,
                                      ground_universe(inf.context), eo);
        if (er.budget_exceeded) code = std::max(code, int{kBudget});
        sj["oracle"] = Json{{"solutions", er.solutions.size()},
                            {"budget_exceeded", er.budget_exceeded}};
        if (!json(o)) {
          std::cout << "  oracle: " << er.solutions.size() << " solution(s)"
                    << (er.budget_exceeded ? ", budget exceeded" : "") << "\n";
        }
      }
      r["solve"] = std::move(sj);
      rc = std::max(rc, code);
    }
    rules.push_back(std::move(r));
  }
  if (json(o)) std::cout << Json{{"rules", rules}}.dump(2) << "\n";
  return rc;
}

int cmd_gen(const Options& o) {
  GenParams p;
  p.size = o.size;
  p.simple = o.simple;
  Instance inst = gen_instance(o.seed, p);
  std::cout << "// seed " << o.seed << "\n" << print_source(inst.signature, {inst.rule});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type checking and inference for rules with decorated sorts"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "Input file")->required();
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto* validate = app.add_subcommand("validate", "Check signature well-formedness");
  add_common(validate);
  auto* check = app.add_subcommand("check", "Type-check every rule");
  add_common(check);
  check->add_flag("--trace", o.trace, "Print derivation trees");
  auto* inf = app.add_subcommand("infer", "Generate constraints for every rule");
  add_common(inf);
  inf->add_flag("--trace", o.trace, "Print constraint-typing derivations");
  auto* sol = app.add_subcommand("solve", "Infer and solve every rule");
  add_common(sol);
  sol->add_flag("--trace", o.trace, "Print the resolution steps");
  sol->add_flag("--oracle", o.oracle, "Count solutions by enumeration");
  sol->add_option("--max-enum", o.max_enum, "Enumeration budget");
  auto* gen = app.add_subcommand("gen", "Print a generated instance");
  gen->add_option("--seed", o.seed, "Generator seed");
  gen->add_option("--size", o.size, "Size parameter (0 = minimal)");
  gen->add_flag("--simple", o.simple, "Restrict to the simple fragment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kParseError;
  }

  if (*validate) return cmd_validate(o);
  if (*check) return cmd_check(o);
  if (*inf) return run_inference(o, false);
  if (*sol) return run_inference(o, true);
  if (*gen) return cmd_gen(o);
  return kParseError;
}
