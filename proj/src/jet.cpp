#include "modsurf/jet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "modsurf/errors.hpp"

namespace modsurf {

namespace {

using Coeffs = std::vector<cplx>;

constexpr double kPi = std::numbers::pi;
constexpr double kCutTol = 4 * std::numeric_limits<double>::epsilon();

double factorial(int j) {
  double f = 1.0;
  for (int k = 2; k <= j; ++k) f *= k;
  return f;
}

bool on_negative_axis(cplx w) {
  return w.real() < 0.0 && std::abs(w.imag()) <= kCutTol * std::abs(w);
}

// arg in (-pi, pi]
cplx principal_log(cplx w) {
  if (w.imag() == 0.0 && w.real() < 0.0) return {std::log(-w.real()), kPi};
  return std::log(w);
}

bool is_branching(const Node& n) {
  return n.op == Op::Pow || (n.op == Op::Func && (n.fn == Fn::Log || n.fn == Fn::Sqrt));
}

// ---------------------------------------------------------------- jet ops

Coeffs mul(const Coeffs& a, const Coeffs& b) {
  const std::size_t n = a.size();
  Coeffs c(n, cplx{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k <= i; ++k) c[i] += a[k] * b[i - k];
  }
  return c;
}

double coeff_scale(const Coeffs& a) {
  double s = 0.0;
  for (const auto& c : a) s = std::max(s, std::abs(c));
  return s;
}

Coeffs div(const Coeffs& a, const Coeffs& b) {
  if (std::abs(b[0]) <= 1e-15 * std::max(1.0, coeff_scale(b))) {
    throw DomainError("division by a vanishing denominator (pole)");
  }
  const std::size_t n = a.size();
  Coeffs q(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = a[i];
    for (std::size_t k = 1; k <= i; ++k) s -= b[k] * q[i - k];
    q[i] = s / b[0];
  }
  return q;
}

Coeffs exp_jet(const Coeffs& a) {
  const std::size_t n = a.size();
  Coeffs b(n);
  b[0] = std::exp(a[0]);
  for (std::size_t i = 1; i < n; ++i) {
    cplx s{};
    for (std::size_t k = 1; k <= i; ++k) s += static_cast<double>(k) * a[k] * b[i - k];
    b[i] = s / static_cast<double>(i);
  }
  return b;
}

// log with a given value for the constant term.
Coeffs log_jet(const Coeffs& a, cplx log_a0) {
  const std::size_t n = a.size();
  Coeffs b(n);
  b[0] = log_a0;
  for (std::size_t i = 1; i < n; ++i) {
    cplx s{};
    for (std::size_t k = 1; k < i; ++k) s += static_cast<double>(k) * b[k] * a[i - k];
    b[i] = (a[i] - s / static_cast<double>(i)) / a[0];
  }
  return b;
}

// a^c with b0 = exp(c * log_a0).
Coeffs pow_jet(const Coeffs& a, cplx c, cplx log_a0) {
  const std::size_t n = a.size();
  Coeffs b(n);
  b[0] = std::exp(c * log_a0);
  for (std::size_t i = 1; i < n; ++i) {
    cplx s{};
    for (std::size_t k = 1; k <= i; ++k) {
      s += (c * static_cast<double>(k) - static_cast<double>(i - k)) * a[k] * b[i - k];
    }
    b[i] = s / (static_cast<double>(i) * a[0]);
  }
  return b;
}

Coeffs ipow_jet(const Coeffs& a, int n) {
  Coeffs result(a.size(), cplx{});
  result[0] = 1.0;
  Coeffs base = a;
  unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
  while (e) {
    if (e & 1U) result = mul(result, base);
    e >>= 1U;
    if (e) base = mul(base, base);
  }
  if (n < 0) {
    Coeffs one(a.size(), cplx{});
    one[0] = 1.0;
    return div(one, result);
  }
  return result;
}

// (sin, cos) or (sinh, cosh) pair; sign = -1 for trig, +1 for hyperbolic.
std::pair<Coeffs, Coeffs> sin_cos_jet(const Coeffs& a, bool hyperbolic) {
  const std::size_t n = a.size();
  Coeffs s(n), c(n);
  s[0] = hyperbolic ? std::sinh(a[0]) : std::sin(a[0]);
  c[0] = hyperbolic ? std::cosh(a[0]) : std::cos(a[0]);
  const double sign = hyperbolic ? 1.0 : -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    cplx ss{}, cc{};
    for (std::size_t k = 1; k <= i; ++k) {
      ss += static_cast<double>(k) * a[k] * c[i - k];
      cc += static_cast<double>(k) * a[k] * s[i - k];
    }
    s[i] = ss / static_cast<double>(i);
    c[i] = sign * cc / static_cast<double>(i);
  }
  return {s, c};
}

}  // namespace

// Resolves anchored branches and evaluates trees. Kept as a friend so the
// evaluator's branch table stays private.
class BranchResolver {
 public:
  using Table = std::unordered_map<const Node*, Evaluator::Branch>;

  static cplx branch_log(const Table& table, const Node& n, cplx w) {
    if (w == cplx{}) throw DomainError("logarithm/power argument vanishes");
    const auto it = table.find(&n);
    if (it == table.end()) {
      if (on_negative_axis(w)) throw DomainError("point lies on a branch cut");
      return principal_log(w);
    }
    const cplx ratio = w / it->second.anchor_arg;
    if (on_negative_axis(ratio)) throw DomainError("point lies on the anchored branch cut");
    return it->second.anchor_log + principal_log(ratio);
  }

  static cplx value(const Table& t, const Node& n, cplx z) {
    switch (n.op) {
      case Op::Var: return z;
      case Op::Lit: return n.value;
      case Op::Neg: return -value(t, *n.lhs, z);
      case Op::Add: return value(t, *n.lhs, z) + value(t, *n.rhs, z);
      case Op::Sub: return value(t, *n.lhs, z) - value(t, *n.rhs, z);
      case Op::Mul: return value(t, *n.lhs, z) * value(t, *n.rhs, z);
      case Op::Div: {
        const cplx d = value(t, *n.rhs, z);
        if (d == cplx{}) throw DomainError("division by zero (pole)");
        return value(t, *n.lhs, z) / d;
      }
      case Op::IntPow: {
        const cplx b = value(t, *n.lhs, z);
        if (n.exponent < 0 && b == cplx{}) throw DomainError("negative power of zero (pole)");
        return std::pow(b, n.exponent);
      }
      case Op::Pow: {
        const cplx w = value(t, *n.lhs, z);
        if (w == cplx{}) {
          if (n.value.real() > 0.0) return {};
          throw DomainError("non-positive power of zero");
        }
        return std::exp(n.value * branch_log(t, n, w));
      }
      case Op::Func: {
        const cplx w = value(t, *n.lhs, z);
        switch (n.fn) {
          case Fn::Exp: return std::exp(w);
          case Fn::Log: return branch_log(t, n, w);
          case Fn::Sqrt: return w == cplx{} ? cplx{} : std::exp(0.5 * branch_log(t, n, w));
          case Fn::Sin: return std::sin(w);
          case Fn::Cos: return std::cos(w);
          case Fn::Sinh: return std::sinh(w);
          case Fn::Cosh: return std::cosh(w);
        }
      }
    }
    return {};
  }

  static Coeffs jet(const Table& t, const Node& n, cplx z0, std::size_t len) {
    switch (n.op) {
      case Op::Var: {
        Coeffs c(len, cplx{});
        c[0] = z0;
        if (len > 1) c[1] = 1.0;
        return c;
      }
      case Op::Lit: {
        Coeffs c(len, cplx{});
        c[0] = n.value;
        return c;
      }
      case Op::Neg: {
        Coeffs c = jet(t, *n.lhs, z0, len);
        for (auto& x : c) x = -x;
        return c;
      }
      case Op::Add:
      case Op::Sub: {
        Coeffs a = jet(t, *n.lhs, z0, len);
        const Coeffs b = jet(t, *n.rhs, z0, len);
        const double sign = n.op == Op::Add ? 1.0 : -1.0;
        for (std::size_t i = 0; i < len; ++i) a[i] += sign * b[i];
        return a;
      }
      case Op::Mul: return mul(jet(t, *n.lhs, z0, len), jet(t, *n.rhs, z0, len));
      case Op::Div: return div(jet(t, *n.lhs, z0, len), jet(t, *n.rhs, z0, len));
      case Op::IntPow: return ipow_jet(jet(t, *n.lhs, z0, len), n.exponent);
      case Op::Pow: {
        const Coeffs a = jet(t, *n.lhs, z0, len);
        return pow_jet(a, n.value, branch_log(t, n, a[0]));
      }
      case Op::Func: {
        const Coeffs a = jet(t, *n.lhs, z0, len);
        switch (n.fn) {
          case Fn::Exp: return exp_jet(a);
          case Fn::Log: return log_jet(a, branch_log(t, n, a[0]));
          case Fn::Sqrt: return pow_jet(a, 0.5, branch_log(t, n, a[0]));
          case Fn::Sin: return sin_cos_jet(a, false).first;
          case Fn::Cos: return sin_cos_jet(a, false).second;
          case Fn::Sinh: return sin_cos_jet(a, true).first;
          case Fn::Cosh: return sin_cos_jet(a, true).second;
        }
      }
    }
    return Coeffs(len, cplx{});
  }

  static void collect(const Node& n, std::vector<const Node*>& pre) {
    if (is_branching(n)) pre.push_back(&n);
    if (n.lhs) collect(*n.lhs, pre);
    if (n.rhs) collect(*n.rhs, pre);
  }

  // Post-order pass: each branching node is anchored after its argument's
  // own branches are fixed.
  static void anchor_pass(Table& t, const Node& n, cplx p,
                          const std::unordered_map<const Node*, int>& offsets) {
    if (n.lhs) anchor_pass(t, *n.lhs, p, offsets);
    if (n.rhs) anchor_pass(t, *n.rhs, p, offsets);
    if (!is_branching(n)) return;
    const cplx w = value(t, *n.lhs, p);
    if (w == cplx{}) throw DomainError("branch anchor sits on a zero of a log/power argument");
    const auto it = offsets.find(&n);
    const int m = it == offsets.end() ? 0 : it->second;
    t[&n] = Evaluator::Branch{w, principal_log(w) + cplx(0.0, 2.0 * kPi * m)};
  }

  static void resolve(Evaluator& ev) {
    ev.branches_.clear();
    if (!ev.policy_.anchor) return;
    const cplx p = *ev.policy_.anchor;
    const Node& root = ev.expr_.node();
    std::vector<const Node*> pre;
    collect(root, pre);
    if (pre.empty()) {
      check_reference(ev, value(ev.branches_, root, p));
      return;
    }
    if (!ev.policy_.reference) {
      anchor_pass(ev.branches_, root, p, {});
      return;
    }
    const cplx ref = *ev.policy_.reference;
    const std::size_t free = std::min<std::size_t>(pre.size(), 3);
    int combos = 1;
    for (std::size_t k = 0; k < free; ++k) combos *= 5;
    double best = std::numeric_limits<double>::infinity();
    Table best_table;
    for (int code = 0; code < combos; ++code) {
      std::unordered_map<const Node*, int> offsets;
      int c = code;
      for (std::size_t k = 0; k < free; ++k) {
        offsets[pre[k]] = c % 5 - 2;
        c /= 5;
      }
      Table t;
      anchor_pass(t, root, p, offsets);
      const double err = std::abs(value(t, root, p) - ref);
      if (err < best) {
        best = err;
        best_table = std::move(t);
      }
    }
    ev.branches_ = std::move(best_table);
    check_reference(ev, value(ev.branches_, root, p));
  }

  static void check_reference(const Evaluator& ev, cplx at_anchor) {
    if (!ev.policy_.reference) return;
    const cplx ref = *ev.policy_.reference;
    if (std::abs(at_anchor - ref) > 1e-9 * std::max(1.0, std::abs(ref))) {
      std::ostringstream os;
      os << "no branch choice reproduces the reference value " << ref << " at the anchor (closest "
         << at_anchor << ")";
      throw DomainError(os.str());
    }
  }
};

cplx ComplexJet::derivative(int j) const { return factorial(j) * coeffs.at(static_cast<std::size_t>(j)); }

double ComplexJet::scale() const { return coeff_scale(coeffs); }

Evaluator::Evaluator(Expr e, BranchPolicy policy) : expr_(std::move(e)), policy_(policy) {
  BranchResolver::resolve(*this);
}

ComplexJet Evaluator::jet(cplx z0, int k) const {
  if (k < 0 || k > kMaxJetOrder) throw OrderError("jet order must lie in [0, 12]");
  ComplexJet j;
  j.center = z0;
  j.coeffs = BranchResolver::jet(branches_, expr_.node(), z0, static_cast<std::size_t>(k) + 1);
  for (const auto& c : j.coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("non-finite jet coefficient");
    }
  }
  return j;
}

cplx Evaluator::value(cplx z) const {
  const cplx v = BranchResolver::value(branches_, expr_.node(), z);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("non-finite value");
  return v;
}

ComplexJet eval_jet(const Expr& e, cplx z0, int k, const BranchPolicy& policy) {
  return Evaluator(e, policy).jet(z0, k);
}

cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z0, int j, const CauchyOptions& opts) {
  if (j < 0) throw OrderError("derivative index must be non-negative");
  const int n = opts.nodes;
  auto estimate = [&](double r) {
    cplx sum{};
    for (int m = 0; m < n; ++m) {
      const double theta = 2.0 * kPi * m / n;
      const cplx u = std::polar(1.0, theta);
      sum += f(z0 + r * u) * std::polar(1.0, -theta * j);
    }
    return factorial(j) * sum / (static_cast<double>(n) * std::pow(r, j));
  };
  double r = opts.radius;
  cplx prev = estimate(r);
  cplx best_value = prev;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.max_shrinks; ++s) {
    r *= opts.shrink;
    const cplx cur = estimate(r);
    const double gap = std::abs(cur - prev) / (1.0 + std::abs(prev));
    if (gap <= opts.agree_tol) return prev;
    if (gap < best_gap) {
      best_gap = gap;
      best_value = prev;
    }
    prev = cur;
  }
  if (best_gap <= 1e-4) return best_value;
  throw DomainError("Cauchy derivative estimates do not settle; singularity or cut near the circle");
}

cplx fd_oracle(const Expr& e, cplx z0, int j) {
  const Evaluator ev(e);
  return cauchy_derivative([&](cplx z) { return ev.value(z); }, z0, j);
}

ZeroProfile zero_profile(const ComplexJet& jet, double tol) {
  ZeroProfile p;
  p.max_order = jet.order();
  const double raw = jet.scale();
  const double scale = raw > 0.0 ? raw : 1.0;
  auto vanishes = [&](int j) { return std::abs(jet.coeffs[static_cast<std::size_t>(j)]) <= tol * scale; };
  p.f_zero = vanishes(0);
  p.f1_zero = jet.order() >= 1 && vanishes(1);
  p.f2_zero = jet.order() >= 2 && vanishes(2);
  p.f_order = -1;
  for (int j = 0; j <= jet.order(); ++j) {
    if (!vanishes(j)) {
      p.f_order = j;
      break;
    }
  }
  p.well_defined = false;
  for (int j = 2; j <= jet.order(); ++j) {
    if (!vanishes(j)) {
      p.n = j;
      p.well_defined = true;
      break;
    }
  }
  if (!p.well_defined) p.n = jet.order();
  return p;
}

ZeroProfile zero_profile(const Expr& e, cplx z0, int max_order, double tol, const BranchPolicy& policy) {
  if (max_order < 2 || max_order > kMaxJetOrder) throw OrderError("maxOrder must lie in [2, 12]");
  return zero_profile(eval_jet(e, z0, max_order, policy), tol);
}

}  // namespace modsurf
