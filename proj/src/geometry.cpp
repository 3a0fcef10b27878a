#include "modsurf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "kernels_detail.hpp"
#include "modsurf/errors.hpp"
#include "modsurf/kernels.hpp"

namespace modsurf {

std::string_view to_string(Causal c) {
  switch (c) {
    case Causal::spacelike: return "spacelike";
    case Causal::timelike: return "timelike";
    case Causal::lightlike: return "lightlike";
  }
  return "?";
}

std::string_view to_string(KState s) {
  switch (s) {
    case KState::defined: return "defined";
    case KState::undefined: return "undefined";
    case KState::limit_defined: return "limit-defined";
  }
  return "?";
}

std::string_view to_string(KMode m) {
  switch (m) {
    case KMode::none: return "none";
    case KMode::eq5: return "eq5";
    case KMode::eq6: return "eq6";
    case KMode::eq3_fallback: return "eq3-fallback";
    case KMode::remark_f_zero: return "remark-F-zero";
  }
  return "?";
}

std::string_view to_string(SignK s) {
  switch (s) {
    case SignK::Kpos: return "Kpos";
    case SignK::Kzero: return "Kzero";
    case SignK::Kneg: return "Kneg";
  }
  return "?";
}

AnalyticSource AnalyticSource::from_expr(const Expr& e, const BranchPolicy& policy) {
  auto ev = std::make_shared<const Evaluator>(e, policy);
  return {[ev](cplx z, int k) { return ev->jet(z, k); }, [ev](cplx z) { return ev->value(z); }};
}

double minkowski_gaussian(double grad_sq, const Hessian& hs) {
  const double om = 1.0 - grad_sq;
  return -hs.det() / (om * om);
}

double minkowski_mean(double hx, double hy, const Hessian& hs) {
  const double g = hx * hx + hy * hy;
  const double num = (1.0 - hy * hy) * hs.xx + 2.0 * hx * hy * hs.xy + (1.0 - hx * hx) * hs.yy;
  return -num / (2.0 * std::pow(std::fabs(1.0 - g), 1.5));
}

std::pair<double, double> fd_gradient(const RealField& h, double x, double y, double s) {
  auto d = [&](double step, bool along_x) {
    const double dx = along_x ? step : 0.0, dy = along_x ? 0.0 : step;
    return (h(x + dx, y + dy) - h(x - dx, y - dy)) / (2.0 * step);
  };
  const double gx = (4.0 * d(s, true) - d(2 * s, true)) / 3.0;
  const double gy = (4.0 * d(s, false) - d(2 * s, false)) / 3.0;
  return {gx, gy};
}

Hessian fd_hessian(const RealField& h, double x, double y, double s) {
  const double c = h(x, y);
  auto dxx = [&](double st) { return (h(x + st, y) - 2.0 * c + h(x - st, y)) / (st * st); };
  auto dyy = [&](double st) { return (h(x, y + st) - 2.0 * c + h(x, y - st)) / (st * st); };
  auto dxy = [&](double st) {
    return (h(x + st, y + st) - h(x + st, y - st) - h(x - st, y + st) + h(x - st, y - st)) / (4.0 * st * st);
  };
  Hessian r;
  r.xx = (4.0 * dxx(s) - dxx(2 * s)) / 3.0;
  r.yy = (4.0 * dyy(s) - dyy(2 * s)) / 3.0;
  r.xy = (4.0 * dxy(s) - dxy(2 * s)) / 3.0;
  return r;
}

namespace {

Causal causal_of(double grad_sq) {
  if (grad_sq < 1.0 - kLightlikeBand) return Causal::spacelike;
  if (grad_sq > 1.0 + kLightlikeBand) return Causal::timelike;
  return Causal::lightlike;
}

struct Vanishing {
  bool f, f1, f2;
};

Vanishing vanishing(const ComplexJet& j2) {
  double scale = std::max({std::abs(j2.coeffs[0]), std::abs(j2.coeffs[1]), std::abs(j2.coeffs[2])});
  if (scale == 0.0) scale = 1.0;
  const double tol = kVanishTol * scale;
  return {std::abs(j2.coeffs[0]) <= tol, std::abs(j2.coeffs[1]) <= tol, std::abs(j2.coeffs[2]) <= tol};
}

// Fills everything for F != 0 from the jet and a curvature kernel result.
void assemble_regular(SurfaceSample& s, const Vanishing& v, const kernels::detail::CurvaturePoint& kp) {
  const cplx F = s.F, d1 = s.dF, d2 = s.d2F;
  s.h = std::abs(F);
  s.grad_sq = kp.grad_sq;
  s.causal = causal_of(s.grad_sq);
  s.k_numer = kp.numer;
  s.numer_scale = kp.numer_scale;

  // Derivatives of log h = Re log F.
  const cplx g1 = d1 / F;
  const cplx g2 = d2 / F - g1 * g1;
  const double lx = g1.real(), ly = -g1.imag();
  const double lxx = g2.real(), lxy = -g2.imag(), lyy = -g2.real();
  s.hx = s.h * lx;
  s.hy = s.h * ly;
  s.hess = Hessian{s.h * (lxx + lx * lx), s.h * (lxy + lx * ly), s.h * (lyy + ly * ly)};

  if (!v.f1 && !v.f2) {
    const cplx alpha = d1 * d1 / (F * d2);
    s.alpha = alpha;
    s.beta = (d1 * d1 - F * d2) / (d1 * d1);
    s.t = 0.5 - *s.beta;
  }

  if (s.causal == Causal::lightlike) return;

  s.K = kp.k_eq5;
  s.k_state = KState::defined;
  s.k_mode = KMode::eq5;
  if (!v.f2) {
    const double om = 1.0 - s.grad_sq;
    const double re = (d1 * d1 / (F * d2)).real();
    s.K_eq6 = -std::norm(d2) * (re - 1.0) / (om * om);
  }
  s.H = v.f1 ? 0.0 : kp.h_eq15;
  s.H_graph = minkowski_mean(s.hx, s.hy, *s.hess);
}

void assemble_zero(SurfaceSample& s, const AnalyticSource& src) {
  const ComplexJet jet = src.jet(s.point, kMaxJetOrder);
  const ZeroProfile p = zero_profile(jet, kVanishTol);
  s.f_order = p.f_order;
  s.h = std::abs(s.F);
  s.grad_sq = std::norm(s.dF);
  s.causal = causal_of(s.grad_sq);

  if (p.f_order < 0) {
    // F vanishes identically to the computed order: the plane t = 0.
    s.h = 0;
    s.hx = s.hy = 0;
    s.grad_sq = 0;
    s.causal = Causal::spacelike;
    s.hess = Hessian{};
    s.K = 0;
    s.k_state = KState::defined;
    s.k_mode = KMode::eq3_fallback;
    s.H = 0;
    s.H_graph = 0;
    return;
  }
  if (p.f_order == 1) {
    s.smooth = false;
    return;
  }
  s.hx = s.hy = 0;
  s.grad_sq = 0;
  s.causal = Causal::spacelike;
  if (p.f_order % 2 == 1) {
    s.smooth = false;
    auto hfun = [&src](double x, double y) { return std::abs(src.value(cplx(x, y))); };
    s.hess = fd_hessian(hfun, s.point.real(), s.point.imag());
    s.K = minkowski_gaussian(0.0, *s.hess);
    s.k_state = KState::limit_defined;
    s.k_mode = KMode::eq3_fallback;
    return;
  }
  if (p.f_order == 2) {
    const double c2 = std::abs(jet.coeffs[2]);
    s.hess = Hessian{2.0 * c2, 0.0, 2.0 * c2};
    s.K = -4.0 * c2 * c2;
    s.k_state = KState::defined;
    s.k_mode = KMode::remark_f_zero;
    s.H_graph = minkowski_mean(0.0, 0.0, *s.hess);
    return;
  }
  s.hess = Hessian{};
  s.K = 0.0;
  s.k_state = KState::defined;
  s.k_mode = KMode::remark_f_zero;
  s.H = 0.0;
  s.H_graph = 0.0;
}

SurfaceSample from_jet(const AnalyticSource& src, cplx z, const ComplexJet& j2,
                       const kernels::detail::CurvaturePoint* kp) {
  SurfaceSample s;
  s.point = z;
  s.F = j2.coeffs[0];
  s.dF = j2.derivative(1);
  s.d2F = j2.derivative(2);
  const Vanishing v = vanishing(j2);
  s.f_zero = v.f;
  s.f1_zero = v.f1;
  s.f2_zero = v.f2;
  if (v.f) {
    assemble_zero(s, src);
    return s;
  }
  if (kp) {
    assemble_regular(s, v, *kp);
  } else {
    const auto local = kernels::detail::curvature_point(s.F.real(), s.F.imag(), s.dF.real(), s.dF.imag(),
                                                        s.d2F.real(), s.d2F.imag());
    assemble_regular(s, v, local);
  }
  return s;
}

}  // namespace

SurfaceSample sample_point(const AnalyticSource& src, cplx z) { return from_jet(src, z, src.jet(z, 2), nullptr); }

SurfaceSample sample_point(const Expr& F, cplx z, const BranchPolicy& policy) {
  return sample_point(AnalyticSource::from_expr(F, policy), z);
}

AlphaBeta alpha_beta(const ComplexJet& jet) {
  if (jet.order() < 2) throw OrderError("alpha_beta needs a jet of order 2");
  const Vanishing v = vanishing(jet);
  if (v.f || v.f1 || v.f2) throw DegeneracyError("alpha_beta requires F, F', F'' nonvanishing");
  const cplx F = jet.coeffs[0], d1 = jet.derivative(1), d2 = jet.derivative(2);
  AlphaBeta r;
  r.alpha = d1 * d1 / (F * d2);
  r.beta = (d1 * d1 - F * d2) / (d1 * d1);
  r.t = 0.5 - r.beta;
  return r;
}

AlphaBeta alpha_beta(const Expr& F, cplx z, const BranchPolicy& policy) {
  return alpha_beta(eval_jet(F, z, 2, policy));
}

SignK sign_predicates(cplx t, double tol) {
  const double a = std::abs(t);
  if (a > 0.5 + tol) return SignK::Kpos;
  if (a < 0.5 - tol) return SignK::Kneg;
  return SignK::Kzero;
}

GridField scan_grid(const AnalyticSource& src, const Rect& domain, int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("scan_grid: nx and ny must be at least 2");
  GridField g;
  g.domain = domain;
  g.nx = nx;
  g.ny = ny;
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  g.samples.resize(n);
  g.excluded.assign(n, 0);

  std::vector<ComplexJet> jets(n);
  std::vector<double> fr(n), fi(n), ar(n), ai(n), br(n), bi(n);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      const cplx z(g.x(i), g.y(j));
      try {
        jets[k] = src.jet(z, 2);
        const cplx F = jets[k].coeffs[0], d1 = jets[k].derivative(1), d2 = jets[k].derivative(2);
        fr[k] = F.real(), fi[k] = F.imag();
        ar[k] = d1.real(), ai[k] = d1.imag();
        br[k] = d2.real(), bi[k] = d2.imag();
        if (!std::isfinite(std::abs(F)) || !std::isfinite(std::abs(d1)) || !std::isfinite(std::abs(d2)))
          g.excluded[k] = 1;
      } catch (const std::exception&) {
        g.excluded[k] = 1;
      }
      if (g.excluded[k]) {
        fr[k] = fi[k] = ar[k] = ai[k] = br[k] = bi[k] = 0.0;
        g.samples[k].point = z;
      }
    }
  }

  std::vector<double> gs(n), num(n), sc(n), kk(n), hh(n);
  kernels::curvature({fr, fi, ar, ai, br, bi}, {gs, num, sc, kk, hh});

  for (std::size_t k = 0; k < n; ++k) {
    if (g.excluded[k]) continue;
    const kernels::detail::CurvaturePoint kp{gs[k], num[k], sc[k], kk[k], hh[k]};
    try {
      g.samples[k] = from_jet(src, jets[k].center, jets[k], &kp);
    } catch (const std::exception&) {
      g.excluded[k] = 1;
      g.samples[k] = SurfaceSample{};
      g.samples[k].point = jets[k].center;
    }
  }
  return g;
}

GridField scan_grid(const Expr& F, const Rect& domain, int nx, int ny, const BranchPolicy& policy) {
  return scan_grid(AnalyticSource::from_expr(F, policy), domain, nx, ny);
}

EuclideanCurvature euclidean_variant(const AnalyticSource& src, cplx z) {
  const SurfaceSample s = sample_point(src, z);
  if (!s.hess || !std::isfinite(s.hx) || !std::isfinite(s.hy))
    throw DegeneracyError("Hessian of h is undefined at this point");
  const Hessian& hs = *s.hess;
  const double g = s.hx * s.hx + s.hy * s.hy;
  const double w = 1.0 + g;
  EuclideanCurvature r;
  r.K_E3 = hs.det() / (w * w);
  r.H_E3 = ((1.0 + s.hy * s.hy) * hs.xx - 2.0 * s.hx * s.hy * hs.xy + (1.0 + s.hx * s.hx) * hs.yy) /
           (2.0 * std::pow(w, 1.5));
  return r;
}

EuclideanCurvature euclidean_variant(const Expr& F, cplx z, const BranchPolicy& policy) {
  return euclidean_variant(AnalyticSource::from_expr(F, policy), z);
}

}  // namespace modsurf
