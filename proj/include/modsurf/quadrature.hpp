#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature along straight complex segments.

#include <array>
#include <functional>

#include "modsurf/expr.hpp"

namespace modsurf {

struct GK15 {
  // Abscissae on [-1, 1] in increasing order; Gauss weights are zero at
  // Kronrod-only nodes.
  static const std::array<double, 15> x;
  static const std::array<double, 15> wk;
  static const std::array<double, 15> wg;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

struct QuadResult {
  cplx value{};
  double error = 0;
  int evaluations = 0;
  int intervals = 0;
  bool converged = false;
};

// Single G7K15 application on [a, b]; error is |K15 - G7|.
QuadResult gk15(const std::function<cplx(cplx)>& f, cplx a, cplx b);

// Globally adaptive bisection until error <= max(abs_tol, rel_tol * |value|).
QuadResult integrate_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b, const QuadOptions& opts = {});

}  // namespace modsurf
