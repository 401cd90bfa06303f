#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cremona/cyclo.hpp"
#include "cremona/error.hpp"
#include "cremona/geomap.hpp"
#include "cremona/lattice.hpp"
#include "cremona/poly.hpp"
#include "cremona/ratfun.hpp"
#include "cremona/torus.hpp"

namespace cremona {

struct ParseConfig {
  std::int64_t m = 1;  // order of the root of unity `z`
};

namespace parse {

enum class Tok { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket,
                 Comma, Colon, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

inline std::string where(int line, int col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] inline void error_at(const Token &t, const std::string &msg) {
  fail(ErrorKind::ParseError, msg + " at " + where(t.line, t.col));
}

inline std::vector<Token> tokenize(const std::string &src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Num, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    Tok k;
    switch (c) {
    case '+': k = Tok::Plus; break;
    case '-': k = Tok::Minus; break;
    case '*': k = Tok::Star; break;
    case '/': k = Tok::Slash; break;
    case '^': k = Tok::Caret; break;
    case '(': k = Tok::LParen; break;
    case ')': k = Tok::RParen; break;
    case '[': k = Tok::LBracket; break;
    case ']': k = Tok::RBracket; break;
    case ',': k = Tok::Comma; break;
    case ':': k = Tok::Colon; break;
    default:
      fail(ErrorKind::ParseError,
           std::string("unexpected character '") + c + "' at " + where(l, cl));
    }
    out.push_back({k, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Node {
  enum Kind { Num, Root, Var, Sym, Add, Sub, Mul, Div, Neg, Pow } kind;
  Integer value;      // Num
  int index = 0;      // Var: variable index as written; Sym: generator index
  long exponent = 0;  // Pow
  std::vector<std::unique_ptr<Node>> kids;
  Token at;
};
using NodePtr = std::unique_ptr<Node>;

class Parser {
public:
  explicit Parser(const std::string &src) : toks_(tokenize(src)) {}

  const Token &peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char *s) const { return at(Tok::Ident) && peek().text == s; }
  Token take() { return toks_[pos_++]; }
  Token expect(Tok k, const char *what) {
    if (!at(k)) error_at(peek(), std::string("expected ") + what);
    return take();
  }
  void expect_end() {
    if (!at(Tok::End)) error_at(peek(), "unexpected trailing input");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Token op = take();
      lhs = binary(op.kind == Tok::Plus ? Node::Add : Node::Sub, std::move(lhs), term(), op);
    }
    return lhs;
  }

  /// `[e, e, ...]`
  std::vector<NodePtr> bracket_list() {
    expect(Tok::LBracket, "'['");
    std::vector<NodePtr> out;
    if (!at(Tok::RBracket)) {
      out.push_back(expr());
      while (at(Tok::Comma)) {
        take();
        out.push_back(expr());
      }
    }
    expect(Tok::RBracket, "']'");
    return out;
  }

  /// `( e sep e sep ... )`
  std::vector<NodePtr> paren_list(Tok sep) {
    expect(Tok::LParen, "'('");
    std::vector<NodePtr> out;
    out.push_back(expr());
    while (at(sep)) {
      take();
      out.push_back(expr());
    }
    expect(Tok::RParen, "')'");
    return out;
  }

private:
  static NodePtr make(Node::Kind k, const Token &t) {
    auto n = std::make_unique<Node>();
    n->kind = k;
    n->at = t;
    return n;
  }
  static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b, const Token &t) {
    NodePtr n = make(k, t);
    n->kids.push_back(std::move(a));
    n->kids.push_back(std::move(b));
    return n;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      Token op = take();
      lhs = binary(op.kind == Tok::Star ? Node::Mul : Node::Div, std::move(lhs), unary(), op);
    }
    return lhs;
  }

  NodePtr unary() {
    if (at(Tok::Minus)) {
      Token op = take();
      NodePtr n = make(Node::Neg, op);
      n->kids.push_back(unary());
      return n;
    }
    if (at(Tok::Plus)) {
      take();
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!at(Tok::Caret)) return base;
    Token op = take();
    long sign = 1;
    bool paren = false;
    if (at(Tok::LParen)) {
      take();
      paren = true;
    }
    if (at(Tok::Minus)) {
      take();
      sign = -1;
    }
    Token num = expect(Tok::Num, "integer exponent");
    if (paren) expect(Tok::RParen, "')'");
    NodePtr n = make(Node::Pow, op);
    Integer e(num.text);
    if (abs(e) > 4096) error_at(num, "exponent too large");
    n->exponent = sign * e.get_si();
    n->kids.push_back(std::move(base));
    return n;
  }

  NodePtr primary() {
    const Token &t = peek();
    if (at(Tok::Num)) {
      take();
      NodePtr n = make(Node::Num, t);
      n->value = Integer(t.text);
      return n;
    }
    if (at(Tok::LParen)) {
      take();
      NodePtr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::Ident)) {
      Token id = take();
      const std::string &s = id.text;
      if (s == "z") return make(Node::Root, id);
      auto indexed = [&](Node::Kind k) {
        std::string digits = s.substr(1);
        if (digits.empty() || digits.size() > 6 ||
            digits.find_first_not_of("0123456789") != std::string::npos)
          error_at(id, "unknown identifier '" + s + "'");
        NodePtr n = make(k, id);
        n->index = std::stoi(digits);
        return n;
      };
      if (s[0] == 'x') return indexed(Node::Var);
      if (s[0] == 'g') return indexed(Node::Sym);
      error_at(id, "unknown identifier '" + s + "'");
    }
    error_at(t, t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

/// Evaluates to a rational function in `n` variables; variable x_k maps to
/// index k - offset.
class FunctionEvaluator {
public:
  FunctionEvaluator(std::size_t n, int offset, const ParseConfig &cfg)
      : n_(n), offset_(offset), zeta_(CycloNumber::root(cfg.m, cfg.m == 1 ? 0 : 1)) {}

  RationalFunction eval(const Node &e) const {
    switch (e.kind) {
    case Node::Num: return RationalFunction::constant(n_, CycloNumber(e.value));
    case Node::Root: return RationalFunction::constant(n_, zeta_);
    case Node::Sym: error_at(e.at, "generator symbols are only allowed in torus vectors");
    case Node::Var: {
      int i = e.index - offset_;
      if (i < 0 || static_cast<std::size_t>(i) >= n_)
        fail(ErrorKind::ArityMismatch, "variable x" + std::to_string(e.index) +
                                           " out of range for arity " + std::to_string(n_) +
                                           " at " + where(e.at.line, e.at.col));
      return RationalFunction::variable(n_, static_cast<std::size_t>(i));
    }
    case Node::Add: return eval(*e.kids[0]) + eval(*e.kids[1]);
    case Node::Sub: return eval(*e.kids[0]) - eval(*e.kids[1]);
    case Node::Mul: return eval(*e.kids[0]) * eval(*e.kids[1]);
    case Node::Div: {
      RationalFunction d = eval(*e.kids[1]);
      if (d.zero()) fail(ErrorKind::DivisionByZero, "division by zero at " + where(e.at.line, e.at.col));
      return eval(*e.kids[0]) / d;
    }
    case Node::Neg: return RationalFunction::constant(n_, CycloNumber(-1)) * eval(*e.kids[0]);
    case Node::Pow: {
      RationalFunction b = eval(*e.kids[0]);
      if (e.exponent < 0) {
        bool monomial = b.num().size() == 1 && b.den().size() == 1;
        if (!monomial) error_at(e.at, "negative exponent on a non-monomial base");
      }
      return b.pow(static_cast<int>(e.exponent));
    }
    }
    fail(ErrorKind::Internal, "bad node");
  }

private:
  std::size_t n_;
  int offset_;
  CycloNumber zeta_;
};

/// c * prod g_k^{e_k}.
struct SymbolicConstant {
  CycloNumber coefficient{1};
  std::map<int, long> symbols;
};

class ConstantEvaluator {
public:
  explicit ConstantEvaluator(const ParseConfig &cfg)
      : zeta_(CycloNumber::root(cfg.m, cfg.m == 1 ? 0 : 1)) {}

  SymbolicConstant eval(const Node &e) const {
    SymbolicConstant out;
    switch (e.kind) {
    case Node::Num: out.coefficient = CycloNumber(e.value); return out;
    case Node::Root: out.coefficient = zeta_; return out;
    case Node::Sym: out.symbols[e.index] = 1; return out;
    case Node::Var: error_at(e.at, "variables are not allowed in constants");
    case Node::Add:
    case Node::Sub: {
      SymbolicConstant a = eval(*e.kids[0]), b = eval(*e.kids[1]);
      if (!a.symbols.empty() || !b.symbols.empty())
        error_at(e.at, "generator symbols cannot be added");
      out.coefficient = e.kind == Node::Add ? a.coefficient + b.coefficient
                                            : a.coefficient - b.coefficient;
      return out;
    }
    case Node::Mul:
    case Node::Div: {
      SymbolicConstant a = eval(*e.kids[0]), b = eval(*e.kids[1]);
      long s = e.kind == Node::Mul ? 1 : -1;
      if (s < 0 && b.coefficient.zero())
        fail(ErrorKind::DivisionByZero, "division by zero at " + where(e.at.line, e.at.col));
      out.coefficient = s > 0 ? a.coefficient * b.coefficient : a.coefficient / b.coefficient;
      out.symbols = a.symbols;
      for (const auto &[k, v] : b.symbols) out.symbols[k] += s * v;
      return out;
    }
    case Node::Neg: {
      out = eval(*e.kids[0]);
      out.coefficient = -out.coefficient;
      return out;
    }
    case Node::Pow: {
      SymbolicConstant b = eval(*e.kids[0]);
      if (e.exponent < 0 && b.coefficient.zero())
        fail(ErrorKind::DivisionByZero, "zero to a negative power at " + where(e.at.line, e.at.col));
      out.coefficient = b.coefficient.pow(e.exponent);
      for (const auto &[k, v] : b.symbols) out.symbols[k] = v * e.exponent;
      return out;
    }
    }
    fail(ErrorKind::Internal, "bad node");
  }

private:
  CycloNumber zeta_;
};

inline int max_variable(const Node &e) {
  int m = e.kind == Node::Var ? e.index : -1;
  for (const auto &k : e.kids) m = std::max(m, max_variable(*k));
  return m;
}

} // namespace parse

/// Components of `[e1, ..., en]` in x1..xn.
inline RationalMapComponents parse_components(const std::string &src, const ParseConfig &cfg = {}) {
  parse::Parser p(src);
  auto items = p.bracket_list();
  p.expect_end();
  if (items.empty()) fail(ErrorKind::ParseError, "empty map");
  parse::FunctionEvaluator ev(items.size(), 1, cfg);
  RationalMapComponents out;
  for (const auto &it : items) out.push_back(ev.eval(*it));
  return out;
}

/// Exponent matrix when every component is a bare Laurent monomial.
inline std::optional<IntMatrix> monomial_exponents(const RationalMapComponents &comps) {
  std::size_t n = comps.size();
  IntMatrix A(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &f = comps[i];
    if (f.num().size() != 1 || f.den().size() != 1) return std::nullopt;
    const auto &[mn, cn] = *f.num().terms().begin();
    const auto &[md, cd] = *f.den().terms().begin();
    if (!(cn / cd).is_one()) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) A(i, j) = mn[j] - md[j];
  }
  return A;
}

/// Chooses the most specific kind: affine, monomial, triangular, rational.
inline GeoMap infer_map(const RationalMapComponents &comps) {
  std::size_t n = comps.size();
  if (auto aff = as_affine(comps)) {
    if (determinant(aff->A).zero())
      fail(ErrorKind::NonInvertibleLinearPart, "affine map has a singular linear part");
    return *aff;
  }
  if (auto A = monomial_exponents(comps)) {
    if (is_unimodular(*A)) {
      bool shape = (*A)(0, 0) == 1;
      for (std::size_t j = 1; shape && j < n; ++j) shape = (*A)(0, j) == 0 && (*A)(j, 0) == 0;
      return MonomialMap(*A, shape && n > 1);
    }
  }
  bool polynomial = true;
  std::vector<MultiPoly> polys;
  for (const auto &c : comps) {
    polynomial = polynomial && c.is_polynomial();
    if (polynomial) polys.push_back(c.as_polynomial());
  }
  if (polynomial && TriangularAuto::has_shape(polys)) return TriangularAuto(polys);
  return RationalMap{comps};
}

/// Projective linear map `(e0 : ... : en)` with linear forms in x0..xn.
inline CycloMatrix parse_projective(const std::string &src, const ParseConfig &cfg = {}) {
  parse::Parser p(src);
  auto items = p.paren_list(parse::Tok::Colon);
  p.expect_end();
  std::size_t d = items.size();
  if (d < 2) fail(ErrorKind::ParseError, "projective map needs at least two coordinates");
  parse::FunctionEvaluator ev(d, 0, cfg);
  CycloMatrix R(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    RationalFunction f = ev.eval(*items[i]);
    if (!f.is_polynomial()) fail(ErrorKind::ParseError, "projective components must be linear forms");
    MultiPoly q = f.as_polynomial();
    for (const auto &[mono, c] : q.terms()) {
      if (total_degree(mono) != 1)
        fail(ErrorKind::ParseError, "projective components must be homogeneous of degree 1");
      for (std::size_t j = 0; j < d; ++j)
        if (mono[j] == 1) R(i, j) = c;
    }
  }
  if (determinant(R).zero())
    fail(ErrorKind::NonInvertibleLinearPart, "projective map is singular");
  return R;
}

namespace parse {

inline CycloNumber constant_of(const Node &e, const ParseConfig &cfg) {
  SymbolicConstant c = ConstantEvaluator(cfg).eval(e);
  for (const auto &[k, v] : c.symbols)
    if (v != 0) error_at(e.at, "generator symbols are only allowed in torus vectors");
  return c.coefficient;
}

/// `matrix [[..], ..] vector [..]` after the `matrix` keyword.
inline AffineMap matrix_vector(Parser &p, const ParseConfig &cfg) {
  p.expect(Tok::LBracket, "'['");
  std::vector<std::vector<CycloNumber>> rows;
  while (true) {
    auto row = p.bracket_list();
    std::vector<CycloNumber> vals;
    for (const auto &e : row) vals.push_back(constant_of(*e, cfg));
    rows.push_back(std::move(vals));
    if (!p.at(Tok::Comma)) break;
    p.take();
  }
  p.expect(Tok::RBracket, "']'");
  if (!p.at_ident("vector")) error_at(p.peek(), "expected 'vector'");
  p.take();
  auto vec = p.bracket_list();
  std::size_t n = rows.size();
  if (vec.size() != n) fail(ErrorKind::ArityMismatch, "vector length differs from matrix size");
  CycloMatrix A(n, n);
  CycloVector b;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) fail(ErrorKind::ArityMismatch, "matrix is not square");
    for (std::size_t j = 0; j < n; ++j) A(i, j) = rows[i][j];
    b.push_back(constant_of(*vec[i], cfg));
  }
  if (determinant(A).zero())
    fail(ErrorKind::NonInvertibleLinearPart, "affine map has a singular linear part");
  return AffineMap(A, b);
}

} // namespace parse

/// A map on K^n: `[e1, ..., en]` or `matrix [[..]] vector [..]`.
inline GeoMap parse_map(const std::string &src, const ParseConfig &cfg = {}) {
  parse::Parser p(src);
  if (p.at_ident("matrix")) {
    p.take();
    AffineMap f = parse::matrix_vector(p, cfg);
    p.expect_end();
    return f;
  }
  return infer_map(parse_components(src, cfg));
}

inline AffineMap parse_affine(const std::string &src, const ParseConfig &cfg = {}) {
  GeoMap g = parse_map(src, cfg);
  if (!std::holds_alternative<AffineMap>(g))
    fail(ErrorKind::InvalidArgument, "expected an affine map, got " + kind_name(g));
  return std::get<AffineMap>(g);
}

inline CycloNumber parse_constant(const std::string &src, const ParseConfig &cfg = {}) {
  parse::Parser p(src);
  auto e = p.expr();
  p.expect_end();
  return parse::constant_of(*e, cfg);
}

/// Torus vectors `(c1, ..., cn)` decomposed over one context. Symbols g<k>
/// not yet declared are declared in order of first appearance.
inline std::vector<TorusVector> parse_torus_vectors(const std::vector<std::string> &srcs,
                                                    FieldContext &ctx, const ParseConfig &cfg) {
  std::vector<std::vector<parse::SymbolicConstant>> vals;
  std::vector<CycloNumber> flat;
  std::vector<int> symbol_order;
  for (const auto &src : srcs) {
    parse::Parser p(src);
    auto items = p.paren_list(parse::Tok::Comma);
    p.expect_end();
    std::vector<parse::SymbolicConstant> row;
    for (const auto &it : items) {
      auto c = parse::ConstantEvaluator(cfg).eval(*it);
      if (c.coefficient.zero()) fail(ErrorKind::InvalidArgument, "torus entries must be nonzero");
      for (const auto &[k, v] : c.symbols)
        if (std::find(symbol_order.begin(), symbol_order.end(), k) == symbol_order.end())
          symbol_order.push_back(k);
      flat.push_back(c.coefficient);
      row.push_back(std::move(c));
    }
    vals.push_back(std::move(row));
  }
  ctx.promote_modulus(cfg.m);
  TorusVector joint = decompose_joint(flat, ctx);
  for (int k : symbol_order) {
    std::string name = "g" + std::to_string(k);
    if (!ctx.index_of_symbol(name)) ctx.declare_symbol(name);
  }
  std::vector<TorusVector> out;
  std::size_t pos = 0;
  for (const auto &row : vals) {
    TorusVector v{joint.modulus, {}};
    for (const auto &c : row) {
      TorusElement e = joint.entries[pos++];
      e.free.resize(ctx.rank(), Integer(0));
      for (const auto &[k, x] : c.symbols)
        e.free[*ctx.index_of_symbol("g" + std::to_string(k))] += x;
      v.entries.push_back(std::move(e));
    }
    out.push_back(std::move(v));
  }
  return out;
}

} // namespace cremona
