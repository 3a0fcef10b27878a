#include "modsurf/fieldtheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "modsurf/errors.hpp"
#include "modsurf/kernels.hpp"

namespace modsurf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> sample_lattice(const RealField& f, const Rect& d, int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("field lattice needs at least 2x2 points");
  std::vector<double> v(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      v[static_cast<std::size_t>(j) * nx + i] =
          f(d.x0 + i * (d.x1 - d.x0) / (nx - 1), d.y0 + j * (d.y1 - d.y0) / (ny - 1));
  return v;
}

void require_positive(const ScalarField& h) {
  for (int j = 0; j < h.ny; ++j)
    for (int i = 0; i < h.nx; ++i) {
      const double v = h.at(i, j);
      if (!(v > 0)) {
        std::ostringstream os;
        os << "field is not strictly positive at (" << h.x(i) << ", " << h.y(j) << "): h = " << v;
        throw PositivityError(os.str());
      }
    }
}

}  // namespace

ScalarField ScalarField::from_F(const Expr& F, const Rect& domain, int nx, int ny, const BranchPolicy& policy) {
  auto src = std::make_shared<AnalyticSource>(AnalyticSource::from_expr(F, policy));
  ScalarField f;
  f.source = Source::from_F;
  f.domain = domain;
  f.nx = nx;
  f.ny = ny;
  f.fn = [src](double x, double y) { return std::abs(src->value(cplx(x, y))); };
  f.exact = [src](double x, double y) {
    const SurfaceSample s = sample_point(*src, cplx(x, y));
    if (!s.hess || !std::isfinite(s.hx)) throw DegeneracyError("h = |F| is not twice differentiable here");
    return Derivs{s.h, s.hx, s.hy, *s.hess};
  };
  f.values = sample_lattice(f.fn, domain, nx, ny);
  return f;
}

ScalarField ScalarField::from_function(RealField h, const Rect& domain, int nx, int ny,
                                       std::function<Derivs(double, double)> exact) {
  ScalarField f;
  f.source = Source::closed_form;
  f.domain = domain;
  f.nx = nx;
  f.ny = ny;
  f.fn = std::move(h);
  f.exact = std::move(exact);
  f.values = sample_lattice(f.fn, domain, nx, ny);
  return f;
}

ScalarField ScalarField::from_samples(std::vector<double> values, const Rect& domain, int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("field lattice needs at least 2x2 points");
  if (values.size() != static_cast<std::size_t>(nx) * ny) throw std::invalid_argument("sample count mismatch");
  ScalarField f;
  f.source = Source::samples;
  f.domain = domain;
  f.nx = nx;
  f.ny = ny;
  f.values = std::move(values);
  return f;
}

std::optional<Derivs> ScalarField::derivs(int i, int j) const {
  const double xx = x(i), yy = y(j);
  if (exact) return exact(xx, yy);
  if (fn) {
    Derivs d;
    d.h = fn(xx, yy);
    std::tie(d.hx, d.hy) = fd_gradient(fn, xx, yy, kFieldFdStep);
    d.hess = fd_hessian(fn, xx, yy, kFieldFdStep);
    return d;
  }
  if (i < 2 || j < 2 || i + 2 >= nx || j + 2 >= ny) return std::nullopt;
  const double sx = dx(), sy = dy();
  auto v = [&](int di, int dj) { return at(i + di, j + dj); };
  auto rich = [](double fine, double coarse) { return (4.0 * fine - coarse) / 3.0; };
  const double c = v(0, 0);
  Derivs d;
  d.h = c;
  d.hx = rich((v(1, 0) - v(-1, 0)) / (2 * sx), (v(2, 0) - v(-2, 0)) / (4 * sx));
  d.hy = rich((v(0, 1) - v(0, -1)) / (2 * sy), (v(0, 2) - v(0, -2)) / (4 * sy));
  d.hess.xx = rich((v(1, 0) - 2 * c + v(-1, 0)) / (sx * sx), (v(2, 0) - 2 * c + v(-2, 0)) / (4 * sx * sx));
  d.hess.yy = rich((v(0, 1) - 2 * c + v(0, -1)) / (sy * sy), (v(0, 2) - 2 * c + v(0, -2)) / (4 * sy * sy));
  d.hess.xy = rich((v(1, 1) - v(1, -1) - v(-1, 1) + v(-1, -1)) / (4 * sx * sy),
                   (v(2, 2) - v(2, -2) - v(-2, 2) + v(-2, -2)) / (16 * sx * sy));
  return d;
}

FieldResidual log_harmonic_residual(const ScalarField& h) {
  require_positive(h);
  FieldResidual r;
  r.nx = h.nx;
  r.ny = h.ny;
  r.values.assign(h.values.size(), kNaN);
  if (!h.fn) {
    kernels::log_harmonic_stencil(h.values, h.nx, h.ny, h.dx(), h.dy(), r.values);
  } else {
    for (int j = 0; j < h.ny; ++j)
      for (int i = 0; i < h.nx; ++i) {
        const double x = h.x(i), y = h.y(j);
        const double c = h.fn(x, y);
        const auto [gx, gy] = fd_gradient(h.fn, x, y, kFieldFdStep);
        const Hessian hs = fd_hessian(h.fn, x, y, kFieldFdStep);
        r.values[h.index(i, j)] = std::fabs(c * hs.trace() - (gx * gx + gy * gy));
      }
  }
  for (double v : r.values)
    if (std::isfinite(v)) r.max = std::max(r.max, v);
  return r;
}

bool is_log_harmonic(const ScalarField& h, double tol) {
  const FieldResidual r = log_harmonic_residual(h);
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    if (!std::isfinite(r.values[k])) continue;
    if (r.values[k] > tol * (1 + h.values[k] * h.values[k])) return false;
  }
  return true;
}

std::string_view to_string(ZmcRegime r) {
  switch (r) {
    case ZmcRegime::maximal_candidate: return "maximal-candidate";
    case ZmcRegime::timelike_candidate: return "timelike-candidate";
    case ZmcRegime::degenerate: return "degenerate";
  }
  return "?";
}

namespace {

struct ZmcEval {
  ZmcPoint point;
  bool f2_zero;
};

ZmcEval zmc_from_jet(const ComplexJet& j) {
  const cplx F = j.coeffs[0], d1 = j.derivative(1), d2 = j.derivative(2);
  double scale = std::max({std::abs(F), std::abs(d1), std::abs(d2)});
  if (scale == 0) scale = 1;
  if (std::abs(F) <= kVanishTol * scale || std::abs(d1) <= kVanishTol * scale)
    throw DegeneracyError("zmc_residual requires F and F' nonvanishing");
  const double g = std::norm(d1);
  const double re = (F * d2 / (d1 * d1)).real();
  ZmcEval e;
  e.point.residual = std::fabs(re - (1.0 - 1.0 / g));
  if (std::fabs(g - 1.0) <= kLightlikeBand)
    e.point.regime = ZmcRegime::degenerate;
  else
    e.point.regime = g < 1 ? ZmcRegime::maximal_candidate : ZmcRegime::timelike_candidate;
  e.f2_zero = std::abs(d2) <= kVanishTol * scale;
  return e;
}

}  // namespace

ZmcPoint zmc_residual(const Expr& F, cplx z, const BranchPolicy& policy) {
  return zmc_from_jet(eval_jet(F, z, 2, policy)).point;
}

ZmcScan zmc_scan(const Expr& F, const Rect& domain, int nx, int ny, const BranchPolicy& policy) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("zmc_scan needs nx, ny >= 2");
  const Evaluator ev(F, policy);
  ZmcScan s;
  s.min_residual = std::numeric_limits<double>::infinity();
  bool all_affine = true;
  int evaluated = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const cplx z(domain.x0 + i * (domain.x1 - domain.x0) / (nx - 1),
                   domain.y0 + j * (domain.y1 - domain.y0) / (ny - 1));
      try {
        const ZmcEval e = zmc_from_jet(ev.jet(z, 2));
        ++evaluated;
        all_affine = all_affine && e.f2_zero;
        if (e.point.regime == ZmcRegime::degenerate) continue;
        s.max_residual = std::max(s.max_residual, e.point.residual);
        s.min_residual = std::min(s.min_residual, e.point.residual);
        ++s.points;
      } catch (const std::exception&) {
      }
    }
  s.vacuous = s.points == 0;
  s.affine = evaluated > 0 && all_affine;
  if (s.vacuous) s.min_residual = s.max_residual = 0;
  return s;
}

double cmc_height(const CmcParams& p, double x, double y) {
  if (p.H == 0) throw PreconditionError("CMC scalar H must be nonzero");
  return p.H / 2 * (x * x + y * y) + p.a * x + p.b * y + (p.a * p.a + p.b * p.b) / (2 * p.H);
}

CmcReport cmc_verify(const CmcParams& p, const Rect& d, int n) {
  if (p.H == 0) throw PreconditionError("CMC scalar H must be nonzero");
  if (n < 2) throw std::invalid_argument("cmc_verify needs n >= 2");
  CmcReport r;
  const double x0 = -p.a / p.H, y0 = -p.b / p.H, h0 = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = d.x0 + i * (d.x1 - d.x0) / (n - 1), y = d.y0 + j * (d.y1 - d.y0) / (n - 1);
      const double h = cmc_height(p, x, y);
      const double hx = p.H * x + p.a, hy = p.H * y + p.b;
      const double hxx = p.H, hyy = p.H;
      r.max_res_laplace = std::max(r.max_res_laplace, std::fabs(hxx + hyy - 2 * p.H));
      r.max_res_eikonal = std::max(r.max_res_eikonal, std::fabs(hx * hx + hy * hy - 2 * p.H * h));
      const double sq = p.H / 2 * ((x - x0) * (x - x0) + (y - y0) * (y - y0)) + h0;
      r.max_res_square = std::max(r.max_res_square, std::fabs(h - sq));
    }
  return r;
}

double characteristic_f_check(double a, double b, double H, const Rect& d, int n) {
  if (H == 0) throw PreconditionError("CMC scalar H must be nonzero");
  if (n < 2) throw std::invalid_argument("characteristic_f_check needs n >= 2");
  double worst = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = d.x0 + i * (d.x1 - d.x0) / (n - 1), y = d.y0 + j * (d.y1 - d.y0) / (n - 1);
      const double f = a * x + b * y + (a * a + b * b) / (2 * H);
      const double fx = a, fy = b;
      worst = std::max(worst, std::fabs(fx * fx + fy * fy + 2 * H * (x * fx + y * fy - f)));
    }
  return worst;
}

ConvexityReport convexity_bounds(const ScalarField& h, Ambient ambient, int rings) {
  require_positive(h);
  ConvexityReport rep;
  rep.ambient = ambient;
  const FieldResidual lh = log_harmonic_residual(h);
  rep.max_log_harmonic_residual = lh.max;
  if (!is_log_harmonic(h)) throw PreconditionError("field is not log-harmonic (h * lap h != |grad h|^2)");

  struct Point {
    double r, q;
  };
  std::vector<Point> pts;
  for (int j = 0; j < h.ny; ++j)
    for (int i = 0; i < h.nx; ++i) {
      const auto d = h.derivs(i, j);
      if (!d) continue;
      const double det = d->hess.det();
      if (!(det > 0)) {
        std::ostringstream os;
        os << "det Hess = " << det << " <= 0 at (" << h.x(i) << ", " << h.y(j) << ")";
        throw ConvexityError(os.str());
      }
      const double g = d->hx * d->hx + d->hy * d->hy;
      double bound, trend;
      if (ambient == Ambient::euclidean) {
        const double w = 1 + d->h * d->hess.trace();
        const double K = det / (w * w);
        bound = 2 * K * d->h * d->h;
        trend = K;
      } else {
        if (!(g < 1)) throw PreconditionError("Minkowski convexity bound needs a spacelike field (|grad h| < 1)");
        bound = 2 * d->hess.xx * d->hess.yy * d->h * d->h;
        trend = std::max({std::fabs(d->hess.xx), std::fabs(d->hess.yy), std::fabs(d->hess.xy)});
      }
      rep.max_bound = std::max(rep.max_bound, bound);
      rep.bound_holds = rep.bound_holds && bound < 1;
      pts.push_back({std::hypot(h.x(i), h.y(j)), trend});
      ++rep.points;
    }
  if (pts.empty() || rings < 1) return rep;
  auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.r < b.r; });
  const double r0 = lo->r, r1 = hi->r;
  rep.ring_max.assign(rings, 0.0);
  for (const Point& p : pts) {
    int k = r1 > r0 ? static_cast<int>((p.r - r0) / (r1 - r0) * rings) : 0;
    k = std::clamp(k, 0, rings - 1);
    rep.ring_max[k] = std::max(rep.ring_max[k], p.q);
  }
  rep.trend_decreasing = std::is_sorted(rep.ring_max.rbegin(), rep.ring_max.rend());
  return rep;
}

LiouvilleReport liouville_residual(const ScalarField& h, const LiouvilleParams& p) {
  require_positive(h);
  LiouvilleReport rep;
  rep.residual.nx = h.nx;
  rep.residual.ny = h.ny;
  rep.residual.values.assign(h.values.size(), kNaN);
  rep.nontrivial.assign(h.values.size(), 0);
  for (int j = 0; j < h.ny; ++j)
    for (int i = 0; i < h.nx; ++i) {
      const auto d = h.derivs(i, j);
      if (!d) continue;
      const double g = d->hx * d->hx + d->hy * d->hy;
      const double e = 2 * p.mu * std::exp(2 * p.b * d->h);
      const double res = g / d->h - p.Q * p.Sg * d->h + e;
      rep.residual.values[h.index(i, j)] = res;
      rep.residual.max = std::max(rep.residual.max, std::fabs(res));
      rep.nontrivial[h.index(i, j)] = p.Q * p.Sg * d->h - e > 0;
    }
  return rep;
}

MasslessReport massless_residuals(const ScalarField& h) {
  require_positive(h);
  MasslessReport r;
  for (int j = 0; j < h.ny; ++j)
    for (int i = 0; i < h.nx; ++i) {
      const auto d = h.derivs(i, j);
      if (!d) continue;
      r.box_res = std::max(r.box_res, std::fabs(d->hess.xx - d->hess.yy));
      r.null_res = std::max(r.null_res, std::fabs(d->hx * d->hx - d->hy * d->hy));
    }
  return r;
}

ScalarField massless_field(const Expr& f, NullOrientation o, const Rect& domain, int n) {
  auto ev = std::make_shared<Evaluator>(f);
  const double s = o == NullOrientation::plus ? 1.0 : -1.0;
  auto jet_at = [ev](double t) {
    const ComplexJet j = ev->jet(cplx(t, 0.0), 2);
    for (int k = 0; k <= 2; ++k) {
      const cplx c = j.coeffs[k];
      if (std::fabs(c.imag()) > 1e-12 * std::max(1.0, std::fabs(c.real())))
        throw DomainError("profile f is not real on the real axis");
    }
    if (!(j.coeffs[0].real() > 0)) throw PositivityError("profile f must be positive");
    return j;
  };
  RealField fn = [jet_at, s](double x, double y) { return jet_at(x + s * y).coeffs[0].real(); };
  auto exact = [jet_at, s](double x, double y) {
    const ComplexJet j = jet_at(x + s * y);
    const double f0 = j.coeffs[0].real(), f1 = j.derivative(1).real(), f2 = j.derivative(2).real();
    Derivs d;
    d.h = f0;
    d.hx = f1;
    d.hy = s * f1;
    d.hess = Hessian{f2, s * f2, f2};
    return d;
  };
  return ScalarField::from_function(fn, domain, n, n, exact);
}

MasslessReport massless_check(const Expr& f, NullOrientation o, const Rect& domain, int n) {
  return massless_residuals(massless_field(f, o, domain, n));
}

SigmaSolveResult sigma_solve(const std::vector<ScalarField>& h, int sx, int sy) {
  if (h.empty()) throw std::invalid_argument("sigma_solve needs at least one field");
  if ((sx != 1 && sx != -1) || (sy != 1 && sy != -1)) throw std::invalid_argument("signature entries must be +1 or -1");
  const int n = static_cast<int>(h.size());
  const ScalarField& f0 = h.front();
  for (const ScalarField& f : h) {
    if (f.nx != f0.nx || f.ny != f0.ny || f.domain.x0 != f0.domain.x0 || f.domain.x1 != f0.domain.x1 ||
        f.domain.y0 != f0.domain.y0 || f.domain.y1 != f0.domain.y1)
      throw std::invalid_argument("sigma_solve fields must share a lattice");
    require_positive(f);
    if (!is_log_harmonic(f)) throw PreconditionError("sigma_solve component is not log-harmonic");
  }
  SigmaSolveResult r;
  r.n = n;
  r.nx = f0.nx;
  r.ny = f0.ny;
  const std::size_t npts = f0.values.size();
  r.gamma.assign(npts, std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0));
  r.residual.assign(npts, kNaN);
  r.rank.assign(npts, 0);
  r.status.assign(npts, SigmaStatus::invalid);

  std::vector<double> p(n), q(n), hv(n), A(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < f0.ny; ++j)
    for (int i = 0; i < f0.nx; ++i) {
      const std::size_t pt = f0.index(i, j);
      bool ok = true;
      for (int c = 0; c < n; ++c) {
        const auto d = h[c].derivs(i, j);
        if (!d) {
          ok = false;
          break;
        }
        p[c] = d->hx;
        q[c] = d->hy;
        hv[c] = d->h;
      }
      if (!ok) continue;
      double normA2 = 0, scale = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double v = p[a] * p[b] + q[a] * q[b];
          A[a * n + b] = v;
          normA2 += v * v;
        }
      for (int c = 0; c < n; ++c) scale = std::max(scale, p[c] * p[c] + q[c] * q[c]);
      const bool a_zero = std::sqrt(normA2) <= 1e-14 * std::max(1.0, scale);
      SigmaStatus st = SigmaStatus::ok;
      double worst = 0;
      int rank = 0;
      for (int c = 0; c < n; ++c) {
        const double B = sx * p[c] * p[c] + sy * q[c] * q[c];
        double* g = r.gamma[pt].data() + static_cast<std::size_t>(c) * n * n;
        if (a_zero) {
          if (std::fabs(B) > 1e-14 * std::max(1.0, scale)) st = SigmaStatus::singular;
          worst = std::max(worst, std::fabs(B));
          continue;
        }
        rank = 1;
        const double coef = -B / (hv[c] * normA2);
        for (int k = 0; k < n * n; ++k) g[k] = coef * A[k];
        double lhs = B;
        for (int k = 0; k < n * n; ++k) lhs += g[k] * A[k] * hv[c];
        worst = std::max(worst, std::fabs(lhs));
      }
      r.status[pt] = st;
      r.rank[pt] = rank;
      r.residual[pt] = worst;
      if (st == SigmaStatus::ok)
        r.max_residual = std::max(r.max_residual, worst);
      else
        ++r.singular_points;
    }
  return r;
}

}  // namespace modsurf
