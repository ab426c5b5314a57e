#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "decosort/context.h"
#include "decosort/core.h"

namespace decosort {

struct RuleEntry {
  Rule rule;
  int line = 0;

  bool operator==(const RuleEntry& o) const { return rule == o.rule; }
};

struct SourceFile {
  Signature signature;
  std::vector<RuleEntry> rules;

  bool operator==(const SourceFile&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : std::runtime_error(msg), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Line-oriented declarations:
//   sort S | sort S <: T
//   op f : S1 ... Sn -> S
//   vop l : S* -> S
//   var x : S | S^g | ?
//   svar x* : S^l | ?
//   rule p << [ann] s /\ ... -> (e1, ..., en)
// `//` starts a comment. Applications of declared variadic operators are
// resolved to list applications once the whole file has been read.
SourceFile parse(const std::string& text);

// "name:line:col: error: msg" followed by the offending line and a caret.
std::string format_parse_error(const ParseError& e, const std::string& text,
                               const std::string& name);

std::string print_type(const TypeTerm& t);
std::string print_source(const SourceFile& f);
std::string print_source(const Signature& sig, const std::vector<Rule>& rules);

}  // namespace decosort
