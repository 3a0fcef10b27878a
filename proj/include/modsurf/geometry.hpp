#pragma once

// Pointwise and gridded geometry of the graph t = h(x, y) = |F(x + iy)|.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "modsurf/expr.hpp"
#include "modsurf/jet.hpp"

namespace modsurf {

inline constexpr double kLightlikeBand = 1e-9;
inline constexpr double kVanishTol = 1e-9;
inline constexpr double kFdStep = 1e-5;

enum class Causal { spacelike, timelike, lightlike };
enum class KState { defined, undefined, limit_defined };
enum class KMode { none, eq5, eq6, eq3_fallback, remark_f_zero };
enum class SignK { Kpos, Kzero, Kneg };

std::string_view to_string(Causal c);
std::string_view to_string(KState s);
std::string_view to_string(KMode m);
std::string_view to_string(SignK s);

struct Hessian {
  double xx = 0, xy = 0, yy = 0;
  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }
};

// Anything that can produce jets and values of an analytic function.
struct AnalyticSource {
  std::function<ComplexJet(cplx, int)> jet;
  std::function<cplx(cplx)> value;

  static AnalyticSource from_expr(const Expr& e, const BranchPolicy& policy = {});
};

struct SurfaceSample {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  cplx point{};
  cplx F{}, dF{}, d2F{};
  bool f_zero = false, f1_zero = false, f2_zero = false;
  int f_order = 0;  // vanishing order of F when f_zero; -1 if F vanishes to every computed order

  double h = 0;
  double hx = nan, hy = nan;
  double grad_sq = 0;  // |F'|^2
  std::optional<Hessian> hess;
  Causal causal = Causal::spacelike;

  double K = nan;
  KState k_state = KState::undefined;
  KMode k_mode = KMode::none;
  std::optional<double> K_eq6;

  std::optional<double> H;        // half of the graph formula
  std::optional<double> H_graph;  // graph formula on the Hessian; equals 2H where both exist

  double k_numer = nan;      // |F'|^4 - |2FF'' - F'^2|^2
  double numer_scale = nan;  // |F'|^4 + |2FF'' - F'^2|^2

  std::optional<cplx> alpha, beta, t;
  bool smooth = true;
};

SurfaceSample sample_point(const AnalyticSource& src, cplx z);
SurfaceSample sample_point(const Expr& F, cplx z, const BranchPolicy& policy = {});

struct AlphaBeta {
  cplx alpha, beta, t;
};

// Throws DegeneracyError if F, F' or F'' vanish at z.
AlphaBeta alpha_beta(const Expr& F, cplx z, const BranchPolicy& policy = {});
AlphaBeta alpha_beta(const ComplexJet& jet);

SignK sign_predicates(cplx t, double tol = kVanishTol);

struct Rect {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};

// Row-major lattice; row j = 0 is y0.
struct GridField {
  Rect domain;
  int nx = 0, ny = 0;
  std::vector<SurfaceSample> samples;
  std::vector<std::uint8_t> excluded;

  double dx() const { return (domain.x1 - domain.x0) / (nx - 1); }
  double dy() const { return (domain.y1 - domain.y0) / (ny - 1); }
  double x(int i) const { return domain.x0 + i * dx(); }
  double y(int j) const { return domain.y0 + j * dy(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  const SurfaceSample& at(int i, int j) const { return samples[index(i, j)]; }
  bool is_excluded(int i, int j) const { return excluded[index(i, j)] != 0; }
};

// Failed points are masked, never thrown. Throws std::invalid_argument if nx or ny < 2.
GridField scan_grid(const AnalyticSource& src, const Rect& domain, int nx, int ny);
GridField scan_grid(const Expr& F, const Rect& domain, int nx, int ny, const BranchPolicy& policy = {});

struct EuclideanCurvature {
  double K_E3, H_E3;
};

// Throws DegeneracyError where the Hessian of h does not exist.
EuclideanCurvature euclidean_variant(const AnalyticSource& src, cplx z);
EuclideanCurvature euclidean_variant(const Expr& F, cplx z, const BranchPolicy& policy = {});

// Graph curvatures in Lorentz-Minkowski space from first and second derivatives of h.
double minkowski_gaussian(double grad_sq, const Hessian& hs);
double minkowski_mean(double hx, double hy, const Hessian& hs);

// Central differences with one Richardson level.
using RealField = std::function<double(double, double)>;
std::pair<double, double> fd_gradient(const RealField& h, double x, double y, double step = kFdStep);
Hessian fd_hessian(const RealField& h, double x, double y, double step = kFdStep);

}  // namespace modsurf
