#pragma once

// Scalar per-point formulas shared by the reference kernels and the scalar
// tails of the vector kernels. The AVX2 code mirrors these operation by
// operation; keep the two in sync.

#include <cmath>
#include <cstddef>

namespace modsurf::kernels::detail {

struct CurvaturePoint {
  double grad_sq, numer, numer_scale, k_eq5, h_eq15;
};

inline CurvaturePoint curvature_point(double fr, double fi, double ar, double ai, double br, double bi) {
  const double a2 = fr * fr + fi * fi;
  const double g = ar * ar + ai * ai;
  // F'^2
  const double sr = ar * ar - ai * ai;
  const double t = ar * ai;
  const double si = t + t;
  // F F''
  const double pr = fr * br - fi * bi;
  const double pi = fr * bi + fi * br;
  // 2FF'' - F'^2
  const double wr = (pr + pr) - sr;
  const double wi = (pi + pi) - si;
  const double g2 = g * g;
  const double w2 = wr * wr + wi * wi;
  CurvaturePoint r{};
  r.grad_sq = g;
  r.numer = g2 - w2;
  r.numer_scale = g2 + w2;
  const double om = 1.0 - g;
  const double den = (4.0 * a2) * (om * om);
  r.k_eq5 = -(r.numer / den);
  // Re(FF''/F'^2) = Re(FF'' conj(F'^2)) / |F'|^4
  const double re_ratio = (pr * sr + pi * si) / g2;
  const double abs_f = std::sqrt(a2);
  const double aom = std::fabs(om);
  const double p32 = aom * std::sqrt(aom);
  const double q = g / abs_f;
  const double inner = 1.0 - g * (1.0 - re_ratio);
  r.h_eq15 = ((-0.5 * q) * inner) / (2.0 * p32);
  return r;
}

struct StencilSteps {
  StencilSteps(double dx, double dy)
      : two_dx(2.0 * dx), four_dx(4.0 * dx), two_dy(2.0 * dy), four_dy(4.0 * dy),
        dx2(dx * dx), dy2(dy * dy), four_dx2(4.0 * (dx * dx)), four_dy2(4.0 * (dy * dy)) {}
  double two_dx, four_dx, two_dy, four_dy, dx2, dy2, four_dx2, four_dy2;
};

inline double stencil_point(const double* h, std::size_t idx, std::size_t nx, const StencilSteps& st) {
  const double c = h[idx];
  const double c2 = c + c;
  const double xm1 = h[idx - 1], xp1 = h[idx + 1], xm2 = h[idx - 2], xp2 = h[idx + 2];
  const double ym1 = h[idx - nx], yp1 = h[idx + nx], ym2 = h[idx - 2 * nx], yp2 = h[idx + 2 * nx];
  const double dx1 = (xp1 - xm1) / st.two_dx;
  const double dx2 = (xp2 - xm2) / st.four_dx;
  const double hx = (4.0 * dx1 - dx2) / 3.0;
  const double dy1 = (yp1 - ym1) / st.two_dy;
  const double dy2 = (yp2 - ym2) / st.four_dy;
  const double hy = (4.0 * dy1 - dy2) / 3.0;
  const double dxx1 = ((xp1 - c2) + xm1) / st.dx2;
  const double dxx2 = ((xp2 - c2) + xm2) / st.four_dx2;
  const double hxx = (4.0 * dxx1 - dxx2) / 3.0;
  const double dyy1 = ((yp1 - c2) + ym1) / st.dy2;
  const double dyy2 = ((yp2 - c2) + ym2) / st.four_dy2;
  const double hyy = (4.0 * dyy1 - dyy2) / 3.0;
  return std::fabs(c * (hxx + hyy) - (hx * hx + hy * hy));
}

}  // namespace modsurf::kernels::detail
