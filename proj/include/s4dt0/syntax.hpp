/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "s4dt0/error.hpp"

namespace s4dt0 {

/// Constructors of the bimodal language. `Box` is the interior modality,
/// `DiffBox` the difference modality [d]; the remaining non-primitive
/// connectives are kept as nodes of their own.
enum class Connective {
  Var,
  Bottom,
  Top,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Box,
  Diamond,
  DiffBox,
  DiffDiamond,
  ForAll,
};

inline constexpr std::size_t arity(Connective c) {
  switch (c) {
    case Connective::Var:
    case Connective::Bottom:
    case Connective::Top:
      return 0;
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
    case Connective::Iff:
      return 2;
    default:
      return 1;
  }
}

/// Immutable formula tree with shared subterms. Copying is cheap.
class Formula {
  struct Node;

 public:
  /// Defaults to ⊥ so that containers of formulas are usable.
  Formula() : Formula(Connective::Bottom, {}, nullptr, nullptr) {}

  static Formula var(std::string name) { return Formula(Connective::Var, std::move(name), nullptr, nullptr); }
  static Formula bottom() { return Formula(); }
  static Formula top() { return Formula(Connective::Top, {}, nullptr, nullptr); }
  static Formula unary(Connective c, const Formula& a) { return Formula(c, {}, a.node_, nullptr); }
  static Formula binary(Connective c, const Formula& a, const Formula& b) {
    return Formula(c, {}, a.node_, b.node_);
  }

  Connective kind() const { return node_->kind; }
  /// Variable name; empty for every other node.
  const std::string& name() const { return node_->name; }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  /// The operand of a unary node.
  Formula operand() const { return Formula(node_->left); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.name() != b.name()) return false;
    switch (arity(a.kind())) {
      case 0: return true;
      case 1: return a.operand() == b.operand();
      default: return a.left() == b.left() && a.right() == b.right();
    }
  }

 private:
  struct Node {
    Connective kind;
    std::string name;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  Formula(Connective c, std::string name, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r)
      : node_(std::make_shared<const Node>(Node{c, std::move(name), std::move(l), std::move(r)})) {}
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

// Builders.
inline Formula var(std::string name) { return Formula::var(std::move(name)); }
inline Formula bottom() { return Formula::bottom(); }
inline Formula top() { return Formula::top(); }
inline Formula neg(const Formula& a) { return Formula::unary(Connective::Not, a); }
inline Formula conj(const Formula& a, const Formula& b) { return Formula::binary(Connective::And, a, b); }
inline Formula disj(const Formula& a, const Formula& b) { return Formula::binary(Connective::Or, a, b); }
inline Formula implies(const Formula& a, const Formula& b) { return Formula::binary(Connective::Implies, a, b); }
inline Formula iff(const Formula& a, const Formula& b) { return Formula::binary(Connective::Iff, a, b); }
inline Formula box(const Formula& a) { return Formula::unary(Connective::Box, a); }
inline Formula diamond(const Formula& a) { return Formula::unary(Connective::Diamond, a); }
inline Formula diffBox(const Formula& a) { return Formula::unary(Connective::DiffBox, a); }
inline Formula diffDiamond(const Formula& a) { return Formula::unary(Connective::DiffDiamond, a); }
inline Formula forAll(const Formula& a) { return Formula::unary(Connective::ForAll, a); }

/// Rebuilds `f` with its children replaced.
inline Formula withChildren(const Formula& f, const Formula& l, const Formula& r = {}) {
  switch (arity(f.kind())) {
    case 0: return f;
    case 1: return Formula::unary(f.kind(), l);
    default: return Formula::binary(f.kind(), l, r);
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

enum class Tok {
  End, Ident, True, False, LParen, RParen,
  Not, Box, Diamond, DiffBox, DiffDiamond, ForAll,
  And, Or, Implies, Iff,
};

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Tok::End, start, {}};
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      if (word == "true") return {Tok::True, start, word};
      if (word == "false") return {Tok::False, start, word};
      return {Tok::Ident, start, word};
    }
    static constexpr std::array<std::pair<std::string_view, Tok>, 12> kSymbols{{
        {"<->", Tok::Iff}, {"->", Tok::Implies}, {"[]", Tok::Box}, {"<>", Tok::Diamond},
        {"[d]", Tok::DiffBox}, {"<d>", Tok::DiffDiamond}, {"[A]", Tok::ForAll}, {"~", Tok::Not},
        {"&", Tok::And}, {"|", Tok::Or}, {"(", Tok::LParen}, {")", Tok::RParen},
    }};
    for (const auto& [sym, kind] : kSymbols) {
      if (text_.substr(pos_, sym.size()) == sym) {
        pos_ += sym.size();
        return {kind, start, std::string(sym)};
      }
    }
    throw UnknownToken("unknown token '" + std::string(1, c) + "'", start);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  Formula parseAll() {
    Formula f = parseIff();
    if (tok_.kind != Tok::End) throw SyntaxError("unexpected '" + tok_.text + "'", tok_.offset);
    return f;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  Formula parseIff() {
    Formula f = parseImp();
    while (tok_.kind == Tok::Iff) {
      advance();
      f = iff(f, parseImp());
    }
    return f;
  }
  Formula parseImp() {
    Formula f = parseOr();
    if (tok_.kind == Tok::Implies) {
      advance();
      return implies(f, parseImp());
    }
    return f;
  }
  Formula parseOr() {
    Formula f = parseAnd();
    while (tok_.kind == Tok::Or) {
      advance();
      f = disj(f, parseAnd());
    }
    return f;
  }
  Formula parseAnd() {
    Formula f = parseUnary();
    while (tok_.kind == Tok::And) {
      advance();
      f = conj(f, parseUnary());
    }
    return f;
  }
  Formula parseUnary() {
    Connective c;
    switch (tok_.kind) {
      case Tok::Not: c = Connective::Not; break;
      case Tok::Box: c = Connective::Box; break;
      case Tok::Diamond: c = Connective::Diamond; break;
      case Tok::DiffBox: c = Connective::DiffBox; break;
      case Tok::DiffDiamond: c = Connective::DiffDiamond; break;
      case Tok::ForAll: c = Connective::ForAll; break;
      default: return parseAtom();
    }
    advance();
    return Formula::unary(c, parseUnary());
  }
  Formula parseAtom() {
    Token t = tok_;
    switch (t.kind) {
      case Tok::True: advance(); return top();
      case Tok::False: advance(); return bottom();
      case Tok::Ident: advance(); return var(t.text);
      case Tok::LParen: {
        advance();
        Formula f = parseIff();
        if (tok_.kind != Tok::RParen) throw SyntaxError("expected ')'", tok_.offset);
        advance();
        return f;
      }
      case Tok::End: throw SyntaxError("unexpected end of input", t.offset);
      default: throw SyntaxError("unexpected '" + t.text + "'", t.offset);
    }
  }

  Lexer lexer_;
  Token tok_{};
};

}  // namespace detail

/// Parses concrete syntax: `[] <> [d] <d> [A] ~ & | -> <->`, `true`, `false`.
/// `->` is right-associative; `&`, `|`, `<->` associate to the left.
inline Formula parse(std::string_view text) { return detail::Parser(text).parseAll(); }

// ---------------------------------------------------------------------------
// Printing

namespace detail {

enum Prec { kIff = 1, kImp = 2, kOr = 3, kAnd = 4, kUnary = 5 };

inline int precedence(Connective c) {
  switch (c) {
    case Connective::Iff: return kIff;
    case Connective::Implies: return kImp;
    case Connective::Or: return kOr;
    case Connective::And: return kAnd;
    default: return kUnary;
  }
}

inline std::string_view symbol(Connective c) {
  switch (c) {
    case Connective::Not: return "~";
    case Connective::Box: return "[]";
    case Connective::Diamond: return "<>";
    case Connective::DiffBox: return "[d]";
    case Connective::DiffDiamond: return "<d>";
    case Connective::ForAll: return "[A]";
    case Connective::And: return " & ";
    case Connective::Or: return " | ";
    case Connective::Implies: return " -> ";
    case Connective::Iff: return " <-> ";
    default: return "";
  }
}

inline void print(const Formula& f, std::string& out);

inline void printChild(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  print(f, out);
  if (parens) out += ')';
}

inline void print(const Formula& f, std::string& out) {
  const Connective c = f.kind();
  switch (c) {
    case Connective::Var: out += f.name(); return;
    case Connective::Bottom: out += "false"; return;
    case Connective::Top: out += "true"; return;
    default: break;
  }
  if (arity(c) == 1) {
    out += symbol(c);
    printChild(f.operand(), precedence(f.operand().kind()) < kUnary, out);
    return;
  }
  const int p = precedence(c);
  const int lp = precedence(f.left().kind());
  const int rp = precedence(f.right().kind());
  const bool rightAssoc = c == Connective::Implies;
  printChild(f.left(), rightAssoc ? lp <= p : lp < p, out);
  out += symbol(c);
  printChild(f.right(), rightAssoc ? rp < p : rp <= p, out);
}

}  // namespace detail

/// Concrete syntax with the fewest parentheses that re-parse to the same tree.
inline std::string print(const Formula& f) {
  std::string out;
  detail::print(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural utilities

/// Replaces every occurrence of the variable `p` by `replacement`.
inline Formula substitute(const Formula& f, const std::string& p, const Formula& replacement) {
  switch (arity(f.kind())) {
    case 0: return (f.kind() == Connective::Var && f.name() == p) ? replacement : f;
    case 1: return withChildren(f, substitute(f.operand(), p, replacement));
    default:
      return withChildren(f, substitute(f.left(), p, replacement), substitute(f.right(), p, replacement));
  }
}

inline void collectVariables(const Formula& f, std::set<std::string>& out) {
  switch (arity(f.kind())) {
    case 0:
      if (f.kind() == Connective::Var) out.insert(f.name());
      return;
    case 1: collectVariables(f.operand(), out); return;
    default:
      collectVariables(f.left(), out);
      collectVariables(f.right(), out);
  }
}

inline std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  collectVariables(f, out);
  return out;
}

inline std::size_t size(const Formula& f) {
  switch (arity(f.kind())) {
    case 0: return 1;
    case 1: return 1 + size(f.operand());
    default: return 1 + size(f.left()) + size(f.right());
  }
}

/// Nesting depth of the modal operators.
inline std::size_t modalDepth(const Formula& f) {
  switch (arity(f.kind())) {
    case 0: return 0;
    case 1: {
      const bool modal = f.kind() != Connective::Not;
      return (modal ? 1 : 0) + modalDepth(f.operand());
    }
    default: return std::max(modalDepth(f.left()), modalDepth(f.right()));
  }
}

/// Tree height (leaves have depth 0).
inline std::size_t depth(const Formula& f) {
  switch (arity(f.kind())) {
    case 0: return 0;
    case 1: return 1 + depth(f.operand());
    default: return 1 + std::max(depth(f.left()), depth(f.right()));
  }
}

/// Rewrites into the primitive fragment {var, ⊥, →, [], [d]}.
inline Formula expandSugar(const Formula& f) {
  auto notP = [](const Formula& a) { return implies(a, bottom()); };
  switch (f.kind()) {
    case Connective::Var:
    case Connective::Bottom: return f;
    case Connective::Top: return notP(bottom());
    case Connective::Not: return notP(expandSugar(f.operand()));
    case Connective::Implies: return implies(expandSugar(f.left()), expandSugar(f.right()));
    case Connective::And: {
      // a & b  ==  ~(a -> ~b)
      return notP(implies(expandSugar(f.left()), notP(expandSugar(f.right()))));
    }
    case Connective::Or: return implies(notP(expandSugar(f.left())), expandSugar(f.right()));
    case Connective::Iff: {
      Formula a = expandSugar(f.left());
      Formula b = expandSugar(f.right());
      return notP(implies(implies(a, b), notP(implies(b, a))));
    }
    case Connective::Box: return box(expandSugar(f.operand()));
    case Connective::DiffBox: return diffBox(expandSugar(f.operand()));
    case Connective::Diamond: return notP(box(notP(expandSugar(f.operand()))));
    case Connective::DiffDiamond: return notP(diffBox(notP(expandSugar(f.operand()))));
    case Connective::ForAll: {
      Formula a = expandSugar(f.operand());
      return notP(implies(diffBox(a), notP(a)));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Axioms

enum class AxiomName { T_box, Four_box, D_box, B_D, Four_D, AT0 };

inline constexpr std::array<AxiomName, 6> kAllAxioms{
    AxiomName::T_box, AxiomName::Four_box, AxiomName::D_box,
    AxiomName::B_D,   AxiomName::Four_D,   AxiomName::AT0,
};

inline std::string_view toString(AxiomName a) {
  switch (a) {
    case AxiomName::T_box: return "T_box";
    case AxiomName::Four_box: return "Four_box";
    case AxiomName::D_box: return "D_box";
    case AxiomName::B_D: return "B_D";
    case AxiomName::Four_D: return "Four_D";
    case AxiomName::AT0: return "AT0";
  }
  return "";
}

inline std::optional<AxiomName> axiomFromString(std::string_view s) {
  for (AxiomName a : kAllAxioms)
    if (toString(a) == s) return a;
  return std::nullopt;
}

inline Formula axiom(AxiomName name) {
  const Formula p = var("p");
  const Formula q = var("q");
  switch (name) {
    case AxiomName::T_box: return implies(box(p), p);
    case AxiomName::Four_box: return implies(box(p), box(box(p)));
    case AxiomName::D_box: return implies(forAll(p), box(p));
    case AxiomName::B_D: return implies(p, diffBox(diffDiamond(p)));
    case AxiomName::Four_D: return implies(forAll(p), diffBox(diffBox(p)));
    case AxiomName::AT0: {
      // p is true exactly here, q exactly at one other point; then one of
      // the two points has a neighbourhood missing the other.
      Formula onlyP = conj(p, diffBox(neg(p)));
      Formula onlyQ = conj(q, diffBox(neg(q)));
      Formula antecedent = conj(onlyP, diffDiamond(onlyQ));
      Formula consequent = disj(box(neg(q)), diffDiamond(conj(q, box(neg(p)))));
      return implies(antecedent, consequent);
    }
  }
  return top();
}

}  // namespace s4dt0
