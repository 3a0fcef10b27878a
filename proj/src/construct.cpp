#include "modsurf/construct.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "modsurf/errors.hpp"
#include "modsurf/quadrature.hpp"

namespace modsurf {

bool Domain::contains(cplx z) const {
  constexpr double slack = 1e-12;
  if (kind == Kind::disk) return std::abs(z) <= radius * (1 + slack);
  return z.real() >= rect.x0 - slack && z.real() <= rect.x1 + slack && z.imag() >= rect.y0 - slack &&
         z.imag() <= rect.y1 + slack;
}

Rect Domain::bounds() const {
  if (kind == Kind::disk) return {-radius, radius, -radius, radius};
  return rect;
}

std::vector<cplx> Domain::grid(int n) const {
  const Rect b = bounds();
  std::vector<cplx> out;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const cplx z(b.x0 + (b.x1 - b.x0) * i / (n - 1), b.y0 + (b.y1 - b.y0) * j / (n - 1));
      // The disk is open: boundary lattice points are dropped.
      const bool inside = kind == Kind::disk ? std::abs(z) < radius * (1 - 1e-9) : contains(z);
      if (inside) out.push_back(z);
    }
  return out;
}

std::string Domain::describe() const {
  std::ostringstream os;
  if (kind == Kind::disk)
    os << "disk " << format_real(radius);
  else
    os << "rect " << format_real(rect.x0) << ' ' << format_real(rect.x1) << ' ' << format_real(rect.y0) << ' '
       << format_real(rect.y1);
  return os.str();
}

Domain parse_domain(const std::string& text) {
  std::istringstream is(text);
  std::string kind;
  is >> kind;
  if (kind == "disk") {
    double r;
    if (!(is >> r) || r <= 0) throw std::invalid_argument("disk domain needs a positive radius");
    std::string rest;
    if (is >> rest) throw std::invalid_argument("trailing text in domain: " + rest);
    return Domain::disk(r);
  }
  if (kind == "rect") {
    Rect r;
    if (!(is >> r.x0 >> r.x1 >> r.y0 >> r.y1)) throw std::invalid_argument("rect domain needs x0 x1 y0 y1");
    std::string rest;
    if (is >> rest) throw std::invalid_argument("trailing text in domain: " + rest);
    if (!(r.x0 < r.x1 && r.y0 < r.y1)) throw std::invalid_argument("rect domain needs x0 < x1 and y0 < y1");
    return Domain::rectangle(r);
  }
  throw std::invalid_argument("domain must be \"disk r\" or \"rect x0 x1 y0 y1\"");
}

void validate_spec(const BetaSpec& spec, int grid_n) {
  if (spec.F0 == cplx{}) throw DomainError("F0 must be nonzero");
  if (!spec.domain.contains(0.0)) throw DomainError("domain must contain 0");
  const Evaluator beta(spec.beta);
  for (cplx z : spec.domain.grid(grid_n)) {
    if (std::abs(beta.value(z) - 1.0) <= 1e-12)
      throw DomainError("beta equals 1 inside the domain (F'' would vanish)");
  }
}

namespace {

struct Piece {
  cplx a, b;
  cplx Ba;  // B at a
  double Ba_err;
  cplx value;
  double err;       // quadrature error |K - G|
  double prop_err;  // error propagated from B
  cplx Bmid;
  double Bmid_err;
  bool operator<(const Piece& o) const { return err < o.err; }
};

class Nested {
 public:
  Nested(const BetaSpec& spec, const Evaluator& beta) : spec_(spec), beta_(beta) {}

  cplx beta(cplx s) {
    ++evals_;
    return beta_.value(s);
  }

  std::pair<cplx, double> B_step(cplx from, cplx to, double tol) {
    if (from == to) return {0.0, 0.0};
    QuadOptions o;
    o.abs_tol = tol;
    o.rel_tol = 0;
    o.max_intervals = 200;
    const QuadResult q = integrate_segment([this](cplx s) { return beta(s); }, from, to, o);
    return {q.value, q.error};
  }

  Piece eval_piece(cplx a, cplx b, cplx Ba, double Ba_err, double inner_tol) {
    Piece p{a, b, Ba, Ba_err, {}, 0, 0, {}, 0};
    const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx cur = a, Bcur = Ba;
    double Berr = Ba_err;
    cplx k{}, g{};
    for (std::size_t i = 0; i < 15; ++i) {
      const cplx s = mid + GK15::x[i] * half;
      const auto [dB, e] = B_step(cur, s, inner_tol);
      Bcur += dB;
      Berr += e;
      cur = s;
      const cplx denom = spec_.k + Bcur;
      const double mag = std::abs(denom);
      min_denom_ = std::min(min_denom_, mag);
      if (mag <= 1e-10 * std::max({1.0, std::abs(spec_.k), std::abs(Bcur)}))
        throw PoleOnPath("k + B(s) vanishes on the integration path");
      const cplx v = 1.0 / denom;
      k += GK15::wk[i] * v;
      g += GK15::wg[i] * v;
      p.prop_err += GK15::wk[i] * std::abs(half) * Berr / (mag * mag);
      if (i == 7) {
        p.Bmid = Bcur;
        p.Bmid_err = Berr;
      }
    }
    p.value = k * half;
    p.err = std::abs((k - g) * half);
    return p;
  }

  // Integral of 1/(k+B) along the polyline, to absolute tolerance tol.
  std::pair<cplx, double> outer(const std::vector<cplx>& v, double tol, bool& converged) {
    std::priority_queue<Piece> heap;
    const double inner_tol = std::max(1e-3 * tol, 1e-16);
    cplx Bstart = 0.0;
    double Bstart_err = 0.0;
    double qerr = 0, perr = 0;
    for (std::size_t s = 0; s + 1 < v.size(); ++s) {
      const Piece p = eval_piece(v[s], v[s + 1], Bstart, Bstart_err, inner_tol);
      qerr += p.err;
      perr += p.prop_err;
      heap.push(p);
      const auto [dB, e] = B_step(v[s], v[s + 1], inner_tol);
      Bstart += dB;
      Bstart_err += e;
    }
    B_end_ = Bstart;
    const int max_pieces = 2000;
    // Bisection only reduces the quadrature part; error inherited from B is final.
    while (qerr + perr > tol && qerr > 0.1 * tol && static_cast<int>(heap.size()) < max_pieces) {
      const Piece p = heap.top();
      heap.pop();
      const cplx m = 0.5 * (p.a + p.b);
      const Piece l = eval_piece(p.a, m, p.Ba, p.Ba_err, inner_tol);
      const Piece r = eval_piece(m, p.b, p.Bmid, p.Bmid_err, inner_tol);
      qerr += l.err + r.err - p.err;
      perr += l.prop_err + r.prop_err - p.prop_err;
      heap.push(l);
      heap.push(r);
    }
    cplx sum{};
    double esum = 0;
    while (!heap.empty()) {
      sum += heap.top().value;
      esum += heap.top().err + heap.top().prop_err;
      heap.pop();
    }
    converged = esum <= tol;
    return {sum, esum};
  }

  double min_denom() const { return min_denom_; }
  cplx B_end() const { return B_end_; }
  int evaluations() const { return evals_; }

 private:
  const BetaSpec& spec_;
  const Evaluator& beta_;
  double min_denom_ = std::numeric_limits<double>::infinity();
  cplx B_end_{};
  int evals_ = 0;
};

UllrichResult ullrich_core(const BetaSpec& spec, const Evaluator& beta, const std::vector<cplx>& vertices,
                           double tol) {
  if (vertices.size() < 2 || vertices.front() != cplx{}) throw DomainError("path must start at 0");
  if (spec.F0 == cplx{}) throw DomainError("F0 must be nonzero");
  for (cplx v : vertices)
    if (!spec.domain.contains(v)) throw DomainError("path leaves the construction domain");
  UllrichResult res;
  if (vertices.size() == 2 && vertices[1] == cplx{}) {
    res.F = spec.F0;
    res.denom = spec.k;
    return res;
  }
  double outer_tol = 0.25 * tol / std::abs(spec.F0);
  for (int attempt = 0; attempt < 4; ++attempt) {
    Nested nested(spec, beta);
    bool converged = false;
    const auto [I, e] = nested.outer(vertices, outer_tol, converged);
    res.F = spec.F0 * std::exp(I);
    res.B = nested.B_end();
    res.denom = spec.k + res.B;
    res.evaluations += nested.evaluations();
    // exp(I + d) - exp(I) ~ exp(I) d, plus rounding in exp and the product.
    res.err = std::abs(res.F) * (e + 4e-16 * (1 + std::abs(I)));
    if (!converged && nested.min_denom() < 1e-6)
      throw PoleOnPath("k + B(s) nearly vanishes on the integration path");
    if (res.err <= tol) return res;
    outer_tol *= 0.5 * tol / res.err;
    if (outer_tol < 1e-16) break;
  }
  std::ostringstream os;
  os << "ullrich_eval: error estimate " << res.err << " exceeds tolerance " << tol;
  throw ToleranceNotMet(os.str());
}

}  // namespace

UllrichResult ullrich_eval_path(const BetaSpec& spec, const std::vector<cplx>& vertices, double tol) {
  const Evaluator beta(spec.beta);
  return ullrich_core(spec, beta, vertices, tol);
}

UllrichResult ullrich_eval(const BetaSpec& spec, cplx z, double tol) {
  return ullrich_eval_path(spec, {cplx{}, z}, tol);
}

ConstructedF::ConstructedF(BetaSpec spec, double tol) : impl_(std::make_shared<Impl>()) {
  impl_->spec = std::move(spec);
  impl_->tol = tol;
  impl_->beta = std::make_unique<Evaluator>(impl_->spec.beta);
}

UllrichResult ConstructedF::eval(cplx z) const {
  const std::pair<double, double> key{z.real(), z.imag()};
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (auto it = impl_->memo.find(key); it != impl_->memo.end()) return it->second;
  }
  const UllrichResult r = ullrich_core(impl_->spec, *impl_->beta, {cplx{}, z}, impl_->tol);
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->memo.emplace(key, r);
  return r;
}

ComplexJet ConstructedF::jet(cplx z, int k, DerivativeMode mode) const {
  if (k < 0 || k > kMaxJetOrder) throw OrderError("jet order must lie in [0, 12]");
  ComplexJet j;
  j.center = z;
  j.coeffs.resize(static_cast<std::size_t>(k) + 1);
  const UllrichResult r = eval(z);
  j.coeffs[0] = r.F;
  if (mode == DerivativeMode::structural) {
    if (k > 2) throw OrderError("structural derivatives are available up to order 2");
    if (k >= 1) j.coeffs[1] = r.F / r.denom;
    if (k >= 2) j.coeffs[2] = 0.5 * r.F * (1.0 - impl_->beta->value(z)) / (r.denom * r.denom);
    return j;
  }
  double fact = 1;
  for (int d = 1; d <= k; ++d) {
    fact *= d;
    j.coeffs[d] = cauchy_derivative([this](cplx w) { return value(w); }, z, d, cauchy) / fact;
  }
  return j;
}

AnalyticSource ConstructedF::source(DerivativeMode mode) const {
  const ConstructedF self = *this;
  return {[self, mode](cplx z, int k) {
            return self.jet(z, k, (mode == DerivativeMode::structural && k <= 2) ? mode : DerivativeMode::cauchy);
          },
          [self](cplx z) { return self.value(z); }};
}

namespace {

cplx beta_from_jet(const ComplexJet& j) {
  const cplx F = j.coeffs[0], d1 = j.derivative(1), d2 = j.derivative(2);
  const double scale = std::max({std::abs(F), std::abs(d1), std::abs(d2)});
  if (std::abs(d1) <= kVanishTol * (scale > 0 ? scale : 1.0)) throw DegeneracyError("F' vanishes");
  return (d1 * d1 - F * d2) / (d1 * d1);
}

}  // namespace

cplx recover_beta(const Expr& F, cplx z, const BranchPolicy& policy) { return beta_from_jet(eval_jet(F, z, 2, policy)); }

cplx recover_beta(const ConstructedF& F, cplx z) { return beta_from_jet(F.jet(z, 2, DerivativeMode::cauchy)); }

Expr zero_k_family(ZeroKKind kind, cplx m, cplx n, double l) {
  Expr arg = m == cplx(1.0) ? Expr::var() : Expr::mul(Expr::lit(m), Expr::var());
  if (n != cplx{}) arg = Expr::add(arg, Expr::lit(n));
  if (kind == ZeroKKind::exponential) return Expr::apply(Fn::Exp, arg);
  return Expr::pow(arg, cplx(1.0, l));
}

SignLockResult sign_locked_construct(const BetaSpec& spec, TargetSign target, int grid_n) {
  validate_spec(spec, grid_n);
  const Evaluator beta(spec.beta);
  ValidationFailure fail;
  for (cplx z : spec.domain.grid(grid_n)) {
    const double d = std::abs(beta.value(z) - 0.5);
    const bool ok = target == TargetSign::positive ? d > 0.5 : d < 0.5;
    if (!ok) fail.points.push_back(z);
  }
  if (!fail.points.empty()) {
    fail.reason = target == TargetSign::positive ? "|beta - 1/2| <= 1/2 at some grid points (K would not be positive)"
                                                 : "|beta - 1/2| >= 1/2 at some grid points (K would not be negative)";
    return fail;
  }
  return ConstructedF(spec);
}

}  // namespace modsurf
