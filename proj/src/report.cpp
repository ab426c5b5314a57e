#include "decosort/report.h"

#include <algorithm>
#include <sstream>

namespace decosort {

namespace {

// Number of code points, for alignment of lines containing α, ↦ and •.
std::size_t width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

void flatten(const Derivation& d, int depth,
             std::vector<std::pair<std::string, std::string>>& rows) {
  rows.emplace_back(std::string(static_cast<std::size_t>(depth) * 2, ' ') +
                        judgment_text(d.conclusion),
                    label_name(d.label));
  for (const auto& p : d.premises) flatten(p, depth + 1, rows);
}

}  // namespace

std::string judgment_text(const Judgment& j) {
  std::string out = to_string(j.subject) + " : " + to_string(j.type);
  if (j.constraints) out += " • " + to_string(*j.constraints);
  return out;
}

std::string derivation_text(const Derivation& d) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(d, 0, rows);
  std::size_t left = 0, right = 0;
  for (const auto& [j, l] : rows) {
    left = std::max(left, width(j));
    right = std::max(right, width(l));
  }
  std::ostringstream out;
  for (const auto& [j, l] : rows) {
    out << j << std::string(left - width(j) + 2 + right - width(l), ' ') << l
        << "\n";
  }
  return out.str();
}

std::string trace_text(const std::vector<SolveStep>& trace) {
  std::ostringstream out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace[i];
    out << "step " << (i + 1) << ": rule (" << s.rule << ")";
    for (const auto& c : s.consumed) out << " [" << to_string(c) << "]";
    if (!s.produced.empty()) {
      out << " =>";
      for (const auto& c : s.produced) out << " [" << to_string(c) << "]";
    }
    if (s.binding) {
      out << " with " << to_string(s.binding->first) << " ↦ "
          << to_string(s.binding->second);
    }
    out << "  degree (" << s.before.m << "," << s.before.n << ") -> ("
        << s.after.m << "," << s.after.n << ")\n";
  }
  return out.str();
}

Json to_json(const TypeTerm& t) { return to_string(t); }

Json to_json(const Constraint& c) {
  return Json{{"kind", c.is_eq() ? "eq" : "sub"},
              {"lhs", to_json(c.lhs)},
              {"rhs", to_json(c.rhs)}};
}

Json to_json(const ConstraintSet& cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back(to_json(c));
  return out;
}

Json to_json(const Substitution& s) {
  // std::map iteration gives bindings sorted by variable.
  Json out = Json::array();
  for (const auto& [v, t] : s.bindings()) {
    out.push_back(Json{{"var", to_string(v)}, {"type", to_json(t)}});
  }
  return out;
}

Json to_json(const Derivation& d) {
  Json conclusion{{"subject", to_string(d.conclusion.subject)},
                  {"type", to_json(d.conclusion.type)}};
  if (d.conclusion.constraints) {
    conclusion["constraints"] = to_json(*d.conclusion.constraints);
  }
  Json premises = Json::array();
  for (const auto& p : d.premises) premises.push_back(to_json(p));
  return Json{{"rule", label_name(d.label)},
              {"conclusion", std::move(conclusion)},
              {"premises", std::move(premises)}};
}

Json to_json(const CheckError& e) {
  return Json{{"kind", check_error_kind_name(e.kind)},
              {"at", e.path},
              {"detail", e.detail}};
}

Json to_json(const Violation& v) {
  return Json{{"kind", violation_kind_name(v.kind)}, {"detail", v.detail}};
}

Json to_json(const SolveStep& s) {
  Json consumed = Json::array(), produced = Json::array();
  for (const auto& c : s.consumed) consumed.push_back(to_json(c));
  for (const auto& c : s.produced) produced.push_back(to_json(c));
  Json out{{"rule", s.rule}, {"consumed", consumed}, {"produced", produced}};
  if (s.binding) {
    out["binding"] = Json{{"var", to_string(s.binding->first)},
                          {"type", to_json(s.binding->second)}};
  }
  out["degree_before"] = Json::array({s.before.m, s.before.n});
  out["degree_after"] = Json::array({s.after.m, s.after.n});
  return out;
}

Json to_json(const SolveOutcome& o) {
  Json trace = Json::array();
  for (const auto& s : o.trace) trace.push_back(to_json(s));
  Json out{{"outcome", solve_kind_name(o.kind)}};
  switch (o.kind) {
    case SolveOutcome::Kind::Solved:
      out["substitution"] = to_json(o.sigma);
      break;
    case SolveOutcome::Kind::Failed: {
      Json witness = Json::array();
      for (const auto& c : o.failure.witness) witness.push_back(to_json(c));
      out["fail_rule"] = o.failure.rule;
      out["witness"] = std::move(witness);
      break;
    }
    case SolveOutcome::Kind::Stuck:
      out["residual"] = to_json(o.residual);
      break;
  }
  out["trace"] = std::move(trace);
  return out;
}

}  // namespace decosort
