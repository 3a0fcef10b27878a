#include <atomic>
#include <cstdlib>
#include <string_view>

#include "modsurf/kernels.hpp"

namespace modsurf::kernels {

namespace {

// -1: no override
std::atomic<int> g_forced{-1};

Isa detect() {
  if (const char* env = std::getenv("MODSURF_KERNEL"); env && std::string_view(env) == "scalar")
    return Isa::scalar;
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() {
  const int f = g_forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Isa>(f);
  static const Isa detected = detect();
  return detected;
}

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
  g_forced.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset_isa() { g_forced.store(-1, std::memory_order_relaxed); }

void curvature(const JetArrays& in, const CurvatureArrays& out) {
  if (active_isa() == Isa::avx2)
    curvature_avx2(in, out);
  else
    curvature_scalar(in, out);
}

void log_harmonic_stencil(std::span<const double> h, std::size_t nx, std::size_t ny, double dx, double dy,
                          std::span<double> out) {
  if (active_isa() == Isa::avx2)
    log_harmonic_stencil_avx2(h, nx, ny, dx, dy, out);
  else
    log_harmonic_stencil_scalar(h, nx, ny, dx, dy, out);
}

}  // namespace modsurf::kernels
