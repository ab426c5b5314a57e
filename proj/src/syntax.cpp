#include "decosort/syntax.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace decosort {

namespace {

enum class Tok { Ident, Sym, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    i += n;
    col += static_cast<int>(n);
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      out.push_back({Tok::Newline, "\n", line, col});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (src.compare(i, 2, "//") == 0) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::Ident, src.substr(i, j - i), line, col});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* two : {"<:", "->", "<<", "/\\"}) {
      if (src.compare(i, 2, two) == 0) {
        out.push_back({Tok::Sym, two, line, col});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("(),:[]^*?").find(c) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, c), line, col});
      advance(1);
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SourceFile run() {
    SourceFile f;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Newline) {
        ++pos_;
        continue;
      }
      declaration(f);
      end_of_line();
    }
    resolve(f);
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at_sym(const char* s) const {
    return peek().kind == Tok::Sym && peek().text == s;
  }
  [[noreturn]] void error(const std::string& msg) const {
    throw ParseError(peek().line, peek().col, msg);
  }
  std::string describe() const {
    switch (peek().kind) {
      case Tok::Newline:
        return "end of line";
      case Tok::End:
        return "end of input";
      default:
        return "'" + peek().text + "'";
    }
  }
  void expect(const char* s) {
    if (!at_sym(s)) error(std::string("expected '") + s + "', found " + describe());
    ++pos_;
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) {
      error(std::string("expected ") + what + ", found " + describe());
    }
    return toks_[pos_++].text;
  }
  void end_of_line() {
    if (peek().kind == Tok::End) return;
    if (peek().kind != Tok::Newline) error("expected end of line, found " + describe());
    ++pos_;
  }

  void declaration(SourceFile& f) {
    const Token start = peek();
    const std::string kw = ident("a declaration keyword");
    Signature& sig = f.signature;
    if (kw == "sort") {
      std::string name = ident("a sort name");
      if (at_sym("<:")) {
        ++pos_;
        sig.add_subsort(name, ident("a supersort name"));
      } else {
        sig.add_sort(name);
      }
    } else if (kw == "op") {
      std::string name = ident("an operator name");
      expect(":");
      std::vector<std::string> dom;
      while (peek().kind == Tok::Ident) dom.push_back(ident("a sort name"));
      expect("->");
      sig.syn_ranks.push_back(SynRank::make(name, dom, ident("a codomain sort")));
    } else if (kw == "vop") {
      std::string name = ident("an operator name");
      expect(":");
      std::string elem = ident("an element sort");
      expect("*");
      expect("->");
      sig.var_ranks.push_back(VariadicRank::make(name, elem, ident("a codomain sort")));
    } else if (kw == "var") {
      std::string name = ident("a variable name");
      expect(":");
      sig.var_types.emplace_back(name, type());
    } else if (kw == "svar") {
      std::string name = ident("a star variable name");
      expect("*");
      expect(":");
      sig.star_types.emplace_back(name, type());
    } else if (kw == "rule") {
      Rule r;
      r.cond = cond();
      expect("->");
      expect("(");
      if (!at_sym(")")) {
        r.action.push_back(term());
        while (at_sym(",")) {
          ++pos_;
          r.action.push_back(term());
        }
      }
      expect(")");
      f.rules.push_back({std::move(r), start.line});
    } else {
      throw ParseError(start.line, start.col, "unknown declaration '" + kw + "'");
    }
  }

  // ? | S | S^g | S^?
  TypeTerm type() {
    if (at_sym("?")) {
      ++pos_;
      return TypeTerm::hole();
    }
    std::string sort = ident("a sort or '?'");
    if (!at_sym("^")) return DecoratedSort::any(sort);
    ++pos_;
    if (at_sym("?")) {
      ++pos_;
      return DecoratedSort::any(sort);
    }
    return DecoratedSort::of(sort, ident("a decoration"));
  }

  Cond cond() {
    std::vector<Cond> members{match()};
    while (at_sym("/\\")) {
      ++pos_;
      members.push_back(match());
    }
    if (members.size() == 1) return members.front();
    return Cond::conj(std::move(members));
  }

  Cond match() {
    Term p = term();
    expect("<<");
    TypeTerm at = TypeTerm::hole();
    if (at_sym("[")) {
      ++pos_;
      at = type();
      expect("]");
    }
    Term s = term();
    return Cond::match(std::move(p), std::move(s), at);
  }

  Term term() {
    std::string name = ident("a term");
    if (at_sym("*")) {
      ++pos_;
      return Term::star(name);
    }
    if (!at_sym("(")) return Term::var(name);
    ++pos_;
    std::vector<Term> args;
    if (!at_sym(")")) {
      args.push_back(term());
      while (at_sym(",")) {
        ++pos_;
        args.push_back(term());
      }
    }
    expect(")");
    return Term::app(name, std::move(args));
  }

  static void resolve(Term& t, const std::set<std::string>& vops) {
    if (t.kind == TermKind::SynApp && vops.count(t.name) > 0) {
      t.kind = TermKind::ListApp;
    }
    for (auto& a : t.args) resolve(a, vops);
  }
  static void resolve(Cond& c, const std::set<std::string>& vops) {
    if (c.kind == Cond::Kind::Conj) {
      for (auto& m : c.members) resolve(m, vops);
      return;
    }
    resolve(c.pattern, vops);
    resolve(c.subject, vops);
  }
  static void resolve(SourceFile& f) {
    std::set<std::string> vops;
    for (const auto& r : f.signature.var_ranks) vops.insert(r.op);
    for (auto& entry : f.rules) {
      resolve(entry.rule.cond, vops);
      for (auto& e : entry.rule.action) resolve(e, vops);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SourceFile parse(const std::string& text) { return Parser(lex(text)).run(); }

std::string format_parse_error(const ParseError& e, const std::string& text,
                               const std::string& name) {
  std::ostringstream out;
  out << name << ":" << e.line() << ":" << e.column() << ": error: " << e.what()
      << "\n";
  std::istringstream in(text);
  std::string line;
  for (int i = 0; i < e.line() && std::getline(in, line); ++i) {
  }
  if (!in.fail() || !line.empty()) {
    out << "  " << line << "\n";
    out << "  " << std::string(static_cast<std::size_t>(std::max(0, e.column() - 1)), ' ')
        << "^\n";
  }
  return out.str();
}

std::string print_type(const TypeTerm& t) {
  if (t.is_ground()) {
    const auto& g = t.as_ground();
    return g.deco.is_any() ? g.sort.name : g.sort.name + "^" + *g.deco.symbol;
  }
  if (t.is_hole()) return "?";
  return to_string(t);
}

namespace {

std::string print_cond(const Cond& c) {
  if (c.kind == Cond::Kind::Conj) {
    std::string out;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      if (i > 0) out += " /\\ ";
      out += print_cond(c.members[i]);
    }
    return out;
  }
  std::string ann = c.at.is_hole() ? "" : "[" + print_type(c.at) + "] ";
  return to_string(c.pattern) + " << " + ann + to_string(c.subject);
}

}  // namespace

std::string print_source(const Signature& sig, const std::vector<Rule>& rules) {
  std::ostringstream out;
  for (const auto& s : sig.sorts) out << "sort " << s.name << "\n";
  for (const auto& [sub, super] : sig.subsorts) {
    out << "sort " << sub.name << " <: " << super.name << "\n";
  }
  for (const auto& r : sig.syn_ranks) {
    out << "op " << r.op << " :";
    for (const auto& d : r.domain) out << " " << d.sort.name;
    out << " -> " << r.codomain.sort.name << "\n";
  }
  for (const auto& r : sig.var_ranks) {
    out << "vop " << r.op << " : " << r.elem.sort.name << "* -> "
        << r.codomain.sort.name << "\n";
  }
  for (const auto& [n, t] : sig.var_types) {
    out << "var " << n << " : " << print_type(t) << "\n";
  }
  for (const auto& [n, t] : sig.star_types) {
    out << "svar " << n << "* : " << print_type(t) << "\n";
  }
  for (const auto& r : rules) {
    out << "rule " << print_cond(r.cond) << " -> (";
    for (std::size_t i = 0; i < r.action.size(); ++i) {
      if (i > 0) out << ", ";
      out << to_string(r.action[i]);
    }
    out << ")\n";
  }
  return out.str();
}

std::string print_source(const SourceFile& f) {
  std::vector<Rule> rules;
  for (const auto& e : f.rules) rules.push_back(e.rule);
  return print_source(f.signature, rules);
}

}  // namespace decosort
