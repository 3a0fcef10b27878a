#include <cmath>
#include <limits>

#include "kernels_detail.hpp"
#include "modsurf/kernels.hpp"

namespace modsurf::kernels {

void curvature_scalar(const JetArrays& in, const CurvatureArrays& out) {
  const std::size_t n = in.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto r = detail::curvature_point(in.f_re[k], in.f_im[k], in.d1_re[k], in.d1_im[k], in.d2_re[k],
                                           in.d2_im[k]);
    out.grad_sq[k] = r.grad_sq;
    out.numer[k] = r.numer;
    out.numer_scale[k] = r.numer_scale;
    out.k_eq5[k] = r.k_eq5;
    out.h_eq15[k] = r.h_eq15;
  }
}

void log_harmonic_stencil_scalar(std::span<const double> h, std::size_t nx, std::size_t ny, double dx,
                                 double dy, std::span<double> out) {
  const detail::StencilSteps st(dx, dy);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t idx = j * nx + i;
      if (i < 2 || j < 2 || i + 2 >= nx || j + 2 >= ny) {
        out[idx] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      out[idx] = detail::stencil_point(h.data(), idx, nx, st);
    }
  }
}

}  // namespace modsurf::kernels
