#include <cmath>
#include <limits>

#include "kernels_detail.hpp"
#include "modsurf/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define MODSURF_HAVE_AVX2_PATH 1
#endif

namespace modsurf::kernels {

#ifdef MODSURF_HAVE_AVX2_PATH

namespace {

__attribute__((target("avx2"))) inline __m256d vabs(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

__attribute__((target("avx2"))) inline __m256d vneg(__m256d x) {
  return _mm256_xor_pd(_mm256_set1_pd(-0.0), x);
}

__attribute__((target("avx2"))) inline __m256d richardson(__m256d fine, __m256d coarse) {
  return _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(_mm256_set1_pd(4.0), fine), coarse), _mm256_set1_pd(3.0));
}

}  // namespace

__attribute__((target("avx2"))) void curvature_avx2(const JetArrays& in, const CurvatureArrays& out) {
  const std::size_t n = in.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d mhalf = _mm256_set1_pd(-0.5);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d fr = _mm256_loadu_pd(in.f_re.data() + k);
    const __m256d fi = _mm256_loadu_pd(in.f_im.data() + k);
    const __m256d ar = _mm256_loadu_pd(in.d1_re.data() + k);
    const __m256d ai = _mm256_loadu_pd(in.d1_im.data() + k);
    const __m256d br = _mm256_loadu_pd(in.d2_re.data() + k);
    const __m256d bi = _mm256_loadu_pd(in.d2_im.data() + k);

    const __m256d a2 = _mm256_add_pd(_mm256_mul_pd(fr, fr), _mm256_mul_pd(fi, fi));
    const __m256d g = _mm256_add_pd(_mm256_mul_pd(ar, ar), _mm256_mul_pd(ai, ai));
    const __m256d sr = _mm256_sub_pd(_mm256_mul_pd(ar, ar), _mm256_mul_pd(ai, ai));
    const __m256d t = _mm256_mul_pd(ar, ai);
    const __m256d si = _mm256_add_pd(t, t);
    const __m256d pr = _mm256_sub_pd(_mm256_mul_pd(fr, br), _mm256_mul_pd(fi, bi));
    const __m256d pi = _mm256_add_pd(_mm256_mul_pd(fr, bi), _mm256_mul_pd(fi, br));
    const __m256d wr = _mm256_sub_pd(_mm256_add_pd(pr, pr), sr);
    const __m256d wi = _mm256_sub_pd(_mm256_add_pd(pi, pi), si);
    const __m256d g2 = _mm256_mul_pd(g, g);
    const __m256d w2 = _mm256_add_pd(_mm256_mul_pd(wr, wr), _mm256_mul_pd(wi, wi));
    const __m256d numer = _mm256_sub_pd(g2, w2);
    const __m256d scale = _mm256_add_pd(g2, w2);
    const __m256d om = _mm256_sub_pd(one, g);
    const __m256d den = _mm256_mul_pd(_mm256_mul_pd(four, a2), _mm256_mul_pd(om, om));
    const __m256d kk = vneg(_mm256_div_pd(numer, den));
    const __m256d re_ratio =
        _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(pr, sr), _mm256_mul_pd(pi, si)), g2);
    const __m256d abs_f = _mm256_sqrt_pd(a2);
    const __m256d aom = vabs(om);
    const __m256d p32 = _mm256_mul_pd(aom, _mm256_sqrt_pd(aom));
    const __m256d q = _mm256_div_pd(g, abs_f);
    const __m256d inner = _mm256_sub_pd(one, _mm256_mul_pd(g, _mm256_sub_pd(one, re_ratio)));
    const __m256d hh = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(mhalf, q), inner), _mm256_mul_pd(two, p32));

    _mm256_storeu_pd(out.grad_sq.data() + k, g);
    _mm256_storeu_pd(out.numer.data() + k, numer);
    _mm256_storeu_pd(out.numer_scale.data() + k, scale);
    _mm256_storeu_pd(out.k_eq5.data() + k, kk);
    _mm256_storeu_pd(out.h_eq15.data() + k, hh);
  }
  for (; k < n; ++k) {
    const auto r = detail::curvature_point(in.f_re[k], in.f_im[k], in.d1_re[k], in.d1_im[k], in.d2_re[k],
                                           in.d2_im[k]);
    out.grad_sq[k] = r.grad_sq;
    out.numer[k] = r.numer;
    out.numer_scale[k] = r.numer_scale;
    out.k_eq5[k] = r.k_eq5;
    out.h_eq15[k] = r.h_eq15;
  }
}

__attribute__((target("avx2"))) void log_harmonic_stencil_avx2(std::span<const double> h, std::size_t nx,
                                                               std::size_t ny, double dx, double dy,
                                                               std::span<double> out) {
  if (nx < 5 || ny < 5) {
    log_harmonic_stencil_scalar(h, nx, ny, dx, dy, out);
    return;
  }
  const detail::StencilSteps st(dx, dy);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const __m256d v_two_dx = _mm256_set1_pd(st.two_dx), v_four_dx = _mm256_set1_pd(st.four_dx);
  const __m256d v_two_dy = _mm256_set1_pd(st.two_dy), v_four_dy = _mm256_set1_pd(st.four_dy);
  const __m256d v_dx2 = _mm256_set1_pd(st.dx2), v_dy2 = _mm256_set1_pd(st.dy2);
  const __m256d v_four_dx2 = _mm256_set1_pd(st.four_dx2), v_four_dy2 = _mm256_set1_pd(st.four_dy2);
  const double* p = h.data();

  for (std::size_t j = 0; j < ny; ++j) {
    const bool border_row = j < 2 || j + 2 >= ny;
    std::size_t i = 0;
    for (; i < nx; ++i) {
      if (!border_row && i >= 2) break;
      out[j * nx + i] = nan;
    }
    if (border_row) continue;
    for (; i + 4 <= nx - 2; i += 4) {
      const std::size_t idx = j * nx + i;
      const __m256d c = _mm256_loadu_pd(p + idx);
      const __m256d c2 = _mm256_add_pd(c, c);
      const __m256d xm1 = _mm256_loadu_pd(p + idx - 1), xp1 = _mm256_loadu_pd(p + idx + 1);
      const __m256d xm2 = _mm256_loadu_pd(p + idx - 2), xp2 = _mm256_loadu_pd(p + idx + 2);
      const __m256d ym1 = _mm256_loadu_pd(p + idx - nx), yp1 = _mm256_loadu_pd(p + idx + nx);
      const __m256d ym2 = _mm256_loadu_pd(p + idx - 2 * nx), yp2 = _mm256_loadu_pd(p + idx + 2 * nx);

      const __m256d hx = richardson(_mm256_div_pd(_mm256_sub_pd(xp1, xm1), v_two_dx),
                                    _mm256_div_pd(_mm256_sub_pd(xp2, xm2), v_four_dx));
      const __m256d hy = richardson(_mm256_div_pd(_mm256_sub_pd(yp1, ym1), v_two_dy),
                                    _mm256_div_pd(_mm256_sub_pd(yp2, ym2), v_four_dy));
      const __m256d hxx =
          richardson(_mm256_div_pd(_mm256_add_pd(_mm256_sub_pd(xp1, c2), xm1), v_dx2),
                     _mm256_div_pd(_mm256_add_pd(_mm256_sub_pd(xp2, c2), xm2), v_four_dx2));
      const __m256d hyy =
          richardson(_mm256_div_pd(_mm256_add_pd(_mm256_sub_pd(yp1, c2), ym1), v_dy2),
                     _mm256_div_pd(_mm256_add_pd(_mm256_sub_pd(yp2, c2), ym2), v_four_dy2));
      const __m256d lap = _mm256_mul_pd(c, _mm256_add_pd(hxx, hyy));
      const __m256d grad = _mm256_add_pd(_mm256_mul_pd(hx, hx), _mm256_mul_pd(hy, hy));
      _mm256_storeu_pd(out.data() + idx, vabs(_mm256_sub_pd(lap, grad)));
    }
    for (; i < nx; ++i) {
      const std::size_t idx = j * nx + i;
      out[idx] = i + 2 >= nx ? nan : detail::stencil_point(p, idx, nx, st);
    }
  }
}

#else

void curvature_avx2(const JetArrays& in, const CurvatureArrays& out) { curvature_scalar(in, out); }

void log_harmonic_stencil_avx2(std::span<const double> h, std::size_t nx, std::size_t ny, double dx,
                               double dy, std::span<double> out) {
  log_harmonic_stencil_scalar(h, nx, ny, dx, dy, out);
}

#endif

}  // namespace modsurf::kernels
