#pragma once

// Expression language for analytic functions of one complex variable z.
//
// Grammar (whitespace insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?
//   primary := number | 'i' | 'z' | complex | func '(' expr ')' | '(' expr ')'
//   complex := '(' ['-'] number ('+' | '-') number 'i' ')'
//   exponent:= ['-'] number | '(' ['-'] number [('+' | '-') number 'i'] ')'
//   number  := decimal literal, optional exponent, optional 'i' suffix
//
// Exponents are literals only. Rational powers are written as decimals
// ("^0.6666666666666666") or through exp/log explicitly.

#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace modsurf {

using cplx = std::complex<double>;

enum class Op { Var, Lit, Neg, Add, Sub, Mul, Div, IntPow, Pow, Func };

enum class Fn { Exp, Log, Sqrt, Sin, Cos, Sinh, Cosh };

std::string_view fn_name(Fn fn);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Var;
  cplx value{};      // literal value (Lit) or exponent (Pow)
  int exponent = 0;  // IntPow only
  Fn fn = Fn::Exp;   // Func only
  NodePtr lhs;       // operand of unary nodes, left operand of binary ones
  NodePtr rhs;
};

// Immutable, cheaply copyable expression tree.
class Expr {
 public:
  Expr();  // the variable z

  static Expr var();
  static Expr lit(cplx value);
  static Expr neg(const Expr& a);
  static Expr add(const Expr& a, const Expr& b);
  static Expr sub(const Expr& a, const Expr& b);
  static Expr mul(const Expr& a, const Expr& b);
  static Expr div(const Expr& a, const Expr& b);
  static Expr ipow(const Expr& base, int n);
  // Integer-valued real exponents collapse to ipow.
  static Expr pow(const Expr& base, cplx exponent);
  static Expr apply(Fn fn, const Expr& arg);

  const Node& node() const { return *root_; }
  const NodePtr& root() const { return root_; }

  // Structural equality (literals compared by value).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

bool structurally_equal(const Node& a, const Node& b);

// Number of nodes in the tree.
std::size_t node_count(const Expr& e);

struct ParseDiagnostic {
  std::size_t position = 0;
  std::string message;
  std::vector<std::string> expected;

  std::string to_string() const;
};

class ParseError : public std::invalid_argument {
 public:
  explicit ParseError(ParseDiagnostic diag);
  const ParseDiagnostic& diagnostic() const { return diag_; }

 private:
  ParseDiagnostic diag_;
};

using ParseResult = std::variant<Expr, ParseDiagnostic>;

// Never throws on malformed input; returns a diagnostic instead.
ParseResult parse(std::string_view source);

// Throws ParseError.
Expr parse_or_throw(std::string_view source);

// Canonical, fully parenthesized text. parse(format(e)) == e.
std::string format(const Expr& e);

// Shortest round-trip decimal text of a double.
std::string format_real(double x);

}  // namespace modsurf
