#include "modsurf/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <system_error>

namespace modsurf {

namespace {

constexpr int kMaxDepth = 256;
constexpr int kMaxIntExponent = 64;

constexpr std::array<std::pair<std::string_view, Fn>, 7> kFunctions{{
    {"exp", Fn::Exp},
    {"log", Fn::Log},
    {"sqrt", Fn::Sqrt},
    {"sin", Fn::Sin},
    {"cos", Fn::Cos},
    {"sinh", Fn::Sinh},
    {"cosh", Fn::Cosh},
}};

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

std::optional<int> as_small_integer(cplx c) {
  if (c.imag() != 0.0) return std::nullopt;
  const double r = c.real();
  if (!(std::abs(r) <= kMaxIntExponent) || std::nearbyint(r) != r) return std::nullopt;
  return static_cast<int>(r);
}

// ---------------------------------------------------------------- lexer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End, Bad };

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  std::string_view text;
  double number = 0.0;
  bool imaginary = false;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                  src_[pos_] == '\n' || src_[pos_] == '\r')) {
      ++pos_;
    }
    Token t;
    t.pos = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    const char c = src_[pos_];
    if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
      return number();
    }
    if (is_alpha(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && (is_alpha(src_[end]) || is_digit(src_[end]))) ++end;
      t.kind = Tok::Ident;
      t.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return t;
    }
    ++pos_;
    t.text = src_.substr(t.pos, 1);
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      default: t.kind = Tok::Bad; break;
    }
    return t;
  }

  std::size_t position() const { return pos_; }
  void reset(std::size_t pos) { pos_ = pos; }

 private:
  Token number() {
    Token t;
    t.pos = pos_;
    std::size_t end = pos_;
    while (end < src_.size() && is_digit(src_[end])) ++end;
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (end < src_.size() && is_digit(src_[end])) ++end;
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t k = end + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (k < src_.size() && is_digit(src_[k])) {
        while (k < src_.size() && is_digit(src_[k])) ++k;
        end = k;
      }
    }
    t.text = src_.substr(pos_, end - pos_);
    const auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + end, t.number);
    if (ec != std::errc{} || ptr != src_.data() + end || !std::isfinite(t.number)) {
      t.kind = Tok::Bad;
      pos_ = end;
      return t;
    }
    t.kind = Tok::Number;
    // 'i' suffix makes an imaginary literal, as long as it ends the word.
    if (end < src_.size() && src_[end] == 'i' &&
        !(end + 1 < src_.size() && (is_alpha(src_[end + 1]) || is_digit(src_[end + 1])))) {
      t.imaginary = true;
      ++end;
      t.text = src_.substr(pos_, end - pos_);
    }
    pos_ = end;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- parser

struct Failure {
  ParseDiagnostic diag;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    default: return "'" + std::string(t.text) + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), lex_(src) { advance(); }

  Expr parse_all() {
    Expr e = expression();
    if (cur_.kind != Tok::End) fail("unexpected " + describe(cur_), {"operator", "end of input"});
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(std::string message, std::vector<std::string> expected) const {
    ParseDiagnostic d;
    d.position = std::min(cur_.pos, src_.size());
    d.message = std::move(message);
    d.expected = std::move(expected);
    throw Failure{std::move(d)};
  }

  void enter() {
    if (++depth_ > kMaxDepth) fail("expression nested too deeply", {});
  }
  void leave() { --depth_; }

  Expr expression() {
    enter();
    Expr lhs = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const bool plus = cur_.kind == Tok::Plus;
      advance();
      Expr rhs = term();
      lhs = plus ? Expr::add(lhs, rhs) : Expr::sub(lhs, rhs);
    }
    leave();
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    reject_juxtaposition();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const bool times = cur_.kind == Tok::Star;
      advance();
      Expr rhs = unary();
      reject_juxtaposition();
      lhs = times ? Expr::mul(lhs, rhs) : Expr::div(lhs, rhs);
    }
    return lhs;
  }

  void reject_juxtaposition() const {
    if (cur_.kind == Tok::Number || cur_.kind == Tok::Ident || cur_.kind == Tok::LParen) {
      fail("implicit multiplication is not allowed", {"*"});
    }
  }

  Expr unary() {
    if (cur_.kind == Tok::Minus) {
      enter();
      advance();
      Expr operand = unary();
      leave();
      return Expr::neg(operand);
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (cur_.kind != Tok::Caret) return base;
    advance();
    const cplx c = exponent_literal();
    if (cur_.kind == Tok::Caret) fail("chained '^' needs parentheses", {"operator"});
    if (const auto n = as_small_integer(c)) return Expr::ipow(base, *n);
    return Expr::pow(base, c);
  }

  // ['-'] number  |  '(' ['-'] number [('+'|'-') number'i'] ')'
  cplx exponent_literal() {
    if (cur_.kind == Tok::LParen) {
      advance();
      cplx c = signed_number();
      if (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
        if (c.imag() != 0.0) fail("expected ')' after imaginary exponent", {")"});
        c.imag(imaginary_tail().imag());
      }
      if (cur_.kind != Tok::RParen) fail("expected ')' in exponent literal", {")", "+", "-"});
      advance();
      return c;
    }
    if (cur_.kind == Tok::Minus || cur_.kind == Tok::Number) return signed_number();
    fail("exponent must be a numeric literal", {"number", "(", "-"});
  }

  cplx signed_number() {
    bool negate = false;
    if (cur_.kind == Tok::Minus) {
      negate = true;
      advance();
    }
    if (cur_.kind != Tok::Number) fail("expected a number", {"number"});
    const double v = negate ? -cur_.number : cur_.number;
    const cplx c = cur_.imaginary ? cplx(0.0, v) : cplx(v, 0.0);
    advance();
    return c;
  }

  // ('+'|'-') number'i'
  cplx imaginary_tail() {
    const bool minus = cur_.kind == Tok::Minus;
    advance();
    if (cur_.kind != Tok::Number || !cur_.imaginary) fail("expected imaginary literal", {"number followed by i"});
    const double im = minus ? -cur_.number : cur_.number;
    advance();
    return {0.0, im};
  }

  // Attempts '(' ['-'] real ('+'|'-') imag ')' without consuming on failure.
  std::optional<cplx> try_complex_literal() {
    const Token saved = cur_;
    const std::size_t saved_pos = lex_.position();
    auto restore = [&] {
      cur_ = saved;
      lex_.reset(saved_pos);
      return std::nullopt;
    };
    advance();  // '('
    bool negate = false;
    if (cur_.kind == Tok::Minus) {
      negate = true;
      advance();
    }
    if (cur_.kind != Tok::Number || cur_.imaginary) return restore();
    const double re = negate ? -cur_.number : cur_.number;
    advance();
    if (cur_.kind != Tok::Plus && cur_.kind != Tok::Minus) return restore();
    const bool minus = cur_.kind == Tok::Minus;
    advance();
    if (cur_.kind != Tok::Number || !cur_.imaginary) return restore();
    const double im = minus ? -cur_.number : cur_.number;
    advance();
    if (cur_.kind != Tok::RParen) return restore();
    advance();
    return cplx(re, im);
  }

  Expr primary() {
    switch (cur_.kind) {
      case Tok::Number: {
        const cplx c = cur_.imaginary ? cplx(0.0, cur_.number) : cplx(cur_.number, 0.0);
        advance();
        return Expr::lit(c);
      }
      case Tok::LParen: {
        if (auto c = try_complex_literal()) return Expr::lit(*c);
        advance();
        Expr inner = expression();
        if (cur_.kind != Tok::RParen) fail("expected ')'", {")"});
        advance();
        return inner;
      }
      case Tok::Ident: return identifier();
      case Tok::End: fail("unexpected end of input", {"number", "z", "i", "function", "("});
      default: fail("unexpected " + describe(cur_), {"number", "z", "i", "function", "(", "-"});
    }
  }

  Expr identifier() {
    const std::string_view name = cur_.text;
    if (name == "z") {
      advance();
      return Expr::var();
    }
    if (name == "i") {
      advance();
      return Expr::lit({0.0, 1.0});
    }
    for (const auto& [fname, fn] : kFunctions) {
      if (name == fname) {
        advance();
        if (cur_.kind != Tok::LParen) fail("expected '(' after " + std::string(fname), {"("});
        advance();
        enter();
        Expr arg = expression();
        leave();
        if (cur_.kind != Tok::RParen) fail("expected ')'", {")"});
        advance();
        return Expr::apply(fn, arg);
      }
    }
    if (name == "e") fail("'e' is reserved; write exp(1)", {"number", "z", "i", "function"});
    fail("unknown identifier '" + std::string(name) + "'", {"z", "i", "exp", "log", "sqrt", "sin", "cos", "sinh", "cosh"});
  }

  std::string_view src_;
  Lexer lex_;
  Token cur_;
  int depth_ = 0;
};

// ---------------------------------------------------------------- format

std::string format_literal(cplx c) {
  if (c.imag() == 0.0 && !std::signbit(c.imag()) && !std::signbit(c.real())) {
    return format_real(c.real());
  }
  std::string s = "(" + format_real(c.real());
  s += std::signbit(c.imag()) ? '-' : '+';
  s += format_real(std::abs(c.imag()));
  s += "i)";
  return s;
}

std::string format_exponent(cplx c) {
  if (c.imag() == 0.0 && !std::signbit(c.imag())) {
    if (!std::signbit(c.real())) return format_real(c.real());
    return "(" + format_real(c.real()) + ")";
  }
  return format_literal(c);
}

void format_node(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Var: out += 'z'; return;
    case Op::Lit: out += format_literal(n.value); return;
    case Op::Neg:
      out += "(-";
      format_node(*n.lhs, out);
      out += ')';
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      static constexpr std::array<char, 4> sym{'+', '-', '*', '/'};
      out += '(';
      format_node(*n.lhs, out);
      out += sym[static_cast<int>(n.op) - static_cast<int>(Op::Add)];
      format_node(*n.rhs, out);
      out += ')';
      return;
    }
    case Op::IntPow:
    case Op::Pow: {
      const bool wrap = n.lhs->op == Op::IntPow || n.lhs->op == Op::Pow;
      if (wrap) out += '(';
      format_node(*n.lhs, out);
      if (wrap) out += ')';
      out += '^';
      if (n.op == Op::IntPow) {
        out += n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent);
      } else {
        out += format_exponent(n.value);
      }
      return;
    }
    case Op::Func:
      out += fn_name(n.fn);
      out += '(';
      format_node(*n.lhs, out);
      out += ')';
      return;
  }
}

std::size_t count(const Node& n) {
  std::size_t c = 1;
  if (n.lhs) c += count(*n.lhs);
  if (n.rhs) c += count(*n.rhs);
  return c;
}

}  // namespace

std::string_view fn_name(Fn fn) {
  for (const auto& [name, f] : kFunctions) {
    if (f == fn) return name;
  }
  return "?";
}

Expr::Expr() : root_(make(Node{})) {}

Expr Expr::var() { return Expr(); }

Expr Expr::lit(cplx value) {
  Node n;
  n.op = Op::Lit;
  n.value = value;
  return Expr(make(std::move(n)));
}

Expr Expr::neg(const Expr& a) {
  Node n;
  n.op = Op::Neg;
  n.lhs = a.root_;
  return Expr(make(std::move(n)));
}

namespace {
Node binary(Op op, const NodePtr& a, const NodePtr& b) {
  Node n;
  n.op = op;
  n.lhs = a;
  n.rhs = b;
  return n;
}
}  // namespace

Expr Expr::add(const Expr& a, const Expr& b) { return Expr(make(binary(Op::Add, a.root_, b.root_))); }
Expr Expr::sub(const Expr& a, const Expr& b) { return Expr(make(binary(Op::Sub, a.root_, b.root_))); }
Expr Expr::mul(const Expr& a, const Expr& b) { return Expr(make(binary(Op::Mul, a.root_, b.root_))); }
Expr Expr::div(const Expr& a, const Expr& b) { return Expr(make(binary(Op::Div, a.root_, b.root_))); }

Expr Expr::ipow(const Expr& base, int n) {
  Node node;
  node.op = Op::IntPow;
  node.exponent = n;
  node.lhs = base.root_;
  return Expr(make(std::move(node)));
}

Expr Expr::pow(const Expr& base, cplx exponent) {
  if (const auto n = as_small_integer(exponent)) return ipow(base, *n);
  Node node;
  node.op = Op::Pow;
  node.value = exponent;
  node.lhs = base.root_;
  return Expr(make(std::move(node)));
}

Expr Expr::apply(Fn fn, const Expr& arg) {
  Node n;
  n.op = Op::Func;
  n.fn = fn;
  n.lhs = arg.root_;
  return Expr(make(std::move(n)));
}

bool structurally_equal(const Node& a, const Node& b) {
  if (&a == &b) return true;
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Var: return true;
    case Op::Lit: return a.value == b.value;
    case Op::IntPow:
      if (a.exponent != b.exponent) return false;
      break;
    case Op::Pow:
      if (a.value != b.value) return false;
      break;
    case Op::Func:
      if (a.fn != b.fn) return false;
      break;
    default: break;
  }
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

bool operator==(const Expr& a, const Expr& b) { return structurally_equal(*a.root_, *b.root_); }

std::size_t node_count(const Expr& e) { return count(e.node()); }

std::string ParseDiagnostic::to_string() const {
  std::ostringstream os;
  os << "parse error at offset " << position << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t k = 0; k < expected.size(); ++k) os << (k ? ", " : "") << expected[k];
    os << ')';
  }
  return os.str();
}

ParseError::ParseError(ParseDiagnostic diag)
    : std::invalid_argument(diag.to_string()), diag_(std::move(diag)) {}

ParseResult parse(std::string_view source) {
  try {
    Parser p(source);
    return p.parse_all();
  } catch (Failure& f) {
    return std::move(f.diag);
  }
}

Expr parse_or_throw(std::string_view source) {
  auto r = parse(source);
  if (auto* d = std::get_if<ParseDiagnostic>(&r)) throw ParseError(std::move(*d));
  return std::get<Expr>(std::move(r));
}

std::string format(const Expr& e) {
  std::string out;
  format_node(e.node(), out);
  return out;
}

std::string format_real(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

}  // namespace modsurf
