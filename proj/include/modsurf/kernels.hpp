#pragma once

// Data-parallel arithmetic kernels. Each kernel has a scalar reference and,
// on x86-64, an AVX2 variant selected at runtime. Both variants perform the
// same IEEE operations in the same order (no FMA contraction), so results
// are bitwise identical.

#include <cstddef>
#include <span>
#include <string_view>

namespace modsurf::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool avx2_available();
// The variant used by the dispatching entry points: AVX2 when the CPU has it,
// unless MODSURF_KERNEL=scalar is set or force_isa() overrides it.
Isa active_isa();
void force_isa(Isa isa);
void reset_isa();

// Structure-of-arrays view of (F, F', F'') at n points.
struct JetArrays {
  std::span<const double> f_re, f_im;
  std::span<const double> d1_re, d1_im;
  std::span<const double> d2_re, d2_im;
  std::size_t size() const { return f_re.size(); }
};

// Per-point outputs of the curvature kernel.
//   grad_sq      |F'|^2
//   numer        |F'|^4 - |2FF'' - F'^2|^2   (Gaussian curvature numerator)
//   numer_scale  |F'|^4 + |2FF'' - F'^2|^2   (magnitude of the cancelling terms)
//   k_eq5        -numer / (4|F|^2 (1-|F'|^2)^2)
//   h_eq15       -(1/2)(|F'|^2/|F|) (1 - |F'|^2 (1 - Re(FF''/F'^2))) / (2|1-|F'|^2|^{3/2})
// k_eq5 and h_eq15 are meaningless where F, F' vanish or |F'| = 1; callers mask.
struct CurvatureArrays {
  std::span<double> grad_sq, numer, numer_scale, k_eq5, h_eq15;
};

void curvature_scalar(const JetArrays& in, const CurvatureArrays& out);
void curvature_avx2(const JetArrays& in, const CurvatureArrays& out);
void curvature(const JetArrays& in, const CurvatureArrays& out);

// |h * (h_xx + h_yy) - (h_x^2 + h_y^2)| on a row-major nx-by-ny lattice with
// spacings dx, dy, using central differences with one Richardson level.
// Points closer than two cells to the border are set to NaN.
void log_harmonic_stencil_scalar(std::span<const double> h, std::size_t nx, std::size_t ny, double dx,
                                 double dy, std::span<double> out);
void log_harmonic_stencil_avx2(std::span<const double> h, std::size_t nx, std::size_t ny, double dx,
                               double dy, std::span<double> out);
void log_harmonic_stencil(std::span<const double> h, std::size_t nx, std::size_t ny, double dx, double dy,
                          std::span<double> out);

}  // namespace modsurf::kernels
