#pragma once

// Residual checks built on log-harmonicity: ZMC non-existence, CMC heights,
// convexity bounds, Liouville and massless scalar reductions, sigma models.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "modsurf/geometry.hpp"

namespace modsurf {

struct Derivs {
  double h = 0, hx = 0, hy = 0;
  Hessian hess;
};

// Scalar field on a lattice. Derivatives come from an exact callback when one
// is attached, otherwise from central differences (step 1e-3, one Richardson
// level) of the function, otherwise from the sampled values.
struct ScalarField {
  enum class Source { from_F, closed_form, samples };

  Source source = Source::samples;
  Rect domain;
  int nx = 0, ny = 0;
  std::vector<double> values;  // row-major, row 0 at y0
  RealField fn;
  std::function<Derivs(double, double)> exact;

  static ScalarField from_F(const Expr& F, const Rect& domain, int nx, int ny, const BranchPolicy& policy = {});
  static ScalarField from_function(RealField h, const Rect& domain, int nx, int ny,
                                   std::function<Derivs(double, double)> exact = {});
  static ScalarField from_samples(std::vector<double> values, const Rect& domain, int nx, int ny);

  double dx() const { return (domain.x1 - domain.x0) / (nx - 1); }
  double dy() const { return (domain.y1 - domain.y0) / (ny - 1); }
  double x(int i) const { return domain.x0 + i * dx(); }
  double y(int j) const { return domain.y0 + j * dy(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  double at(int i, int j) const { return values[index(i, j)]; }
  // Nullopt at border points of a sampled field.
  std::optional<Derivs> derivs(int i, int j) const;
};

inline constexpr double kFieldFdStep = 1e-3;

struct FieldResidual {
  int nx = 0, ny = 0;
  std::vector<double> values;  // NaN where undefined
  double max = 0;
};

// |h (h_xx + h_yy) - |grad h|^2| by central differences. Throws PositivityError.
FieldResidual log_harmonic_residual(const ScalarField& h);
// Accepts when the residual is <= tol * (1 + h^2) at every defined point.
bool is_log_harmonic(const ScalarField& h, double tol = 1e-5);

enum class ZmcRegime { maximal_candidate, timelike_candidate, degenerate };
std::string_view to_string(ZmcRegime r);

struct ZmcPoint {
  double residual;
  ZmcRegime regime;
};

// |Re(FF''/F'^2) - (1 - 1/|F'|^2)|. Throws DegeneracyError where F or F' vanish.
ZmcPoint zmc_residual(const Expr& F, cplx z, const BranchPolicy& policy = {});

struct ZmcScan {
  double max_residual = 0;
  double min_residual = 0;
  int points = 0;          // non-degenerate points used
  bool affine = false;     // F'' vanished at every evaluated point
  bool vacuous = false;    // no usable points (constant F)
};

ZmcScan zmc_scan(const Expr& F, const Rect& domain, int nx, int ny, const BranchPolicy& policy = {});

struct CmcParams {
  double H = 1;  // nonzero
  double a = 0;
  double b = 0;
};

// H/2 (x^2+y^2) + a x + b y + (a^2+b^2)/(2H). Throws PreconditionError if H = 0.
double cmc_height(const CmcParams& p, double x, double y);

struct CmcReport {
  double max_res_laplace = 0;  // |h_xx + h_yy - 2H|
  double max_res_eikonal = 0;  // |h_x^2 + h_y^2 - 2 H h|
  double max_res_square = 0;   // |h - (H/2 |z - z0|^2 + h0)|, z0 = -(a+ib)/H, h0 = 0
};

CmcReport cmc_verify(const CmcParams& p, const Rect& domain, int n);

// max |f_x^2 + f_y^2 + 2H (x f_x + y f_y - f)| for f = a x + b y + (a^2+b^2)/(2H).
double characteristic_f_check(double a, double b, double H, const Rect& domain, int n);

enum class Ambient { euclidean, minkowski };

struct ConvexityReport {
  Ambient ambient = Ambient::euclidean;
  double max_bound = 0;  // max 2 K h^2 (euclidean) or max 2 h_xx h_yy h^2 (minkowski)
  bool bound_holds = true;
  double max_log_harmonic_residual = 0;
  // Maxima over rings of increasing distance from the origin: K (euclidean)
  // or max(|h_xx|, |h_yy|, |h_xy|) (minkowski).
  std::vector<double> ring_max;
  bool trend_decreasing = false;
  int points = 0;
};

// Throws PositivityError, PreconditionError (not log-harmonic, or not
// spacelike in the Minkowski case), ConvexityError (det Hess <= 0).
ConvexityReport convexity_bounds(const ScalarField& h, Ambient ambient, int rings = 4);

struct LiouvilleParams {
  double Q = 0, mu = 0, b = 0, Sg = 0;
};

struct LiouvilleReport {
  FieldResidual residual;  // signed |grad h|^2/h - Q Sg h + 2 mu e^{2bh}; max holds max |.|
  std::vector<std::uint8_t> nontrivial;  // Q Sg h - 2 mu e^{2bh} > 0
};

LiouvilleReport liouville_residual(const ScalarField& h, const LiouvilleParams& p);

enum class NullOrientation { plus, minus };  // f(x+y) or f(x-y)

struct MasslessReport {
  double box_res = 0;   // max |h_xx - h_yy|
  double null_res = 0;  // max |h_x^2 - h_y^2|
};

MasslessReport massless_residuals(const ScalarField& h);
// h = f(x +- y) with f an expression in z evaluated on the real axis; exact
// chain-rule derivatives. Throws PositivityError if f <= 0 on the needed interval.
MasslessReport massless_check(const Expr& f, NullOrientation o, const Rect& domain, int n);
ScalarField massless_field(const Expr& f, NullOrientation o, const Rect& domain, int n);

enum class SigmaStatus : std::uint8_t { ok, singular, invalid };

struct SigmaSolveResult {
  int n = 0;  // number of component fields
  int nx = 0, ny = 0;
  // gamma[p][(i*n + j)*n + k] = Gamma^i_{jk} at lattice point p.
  std::vector<std::vector<double>> gamma;
  std::vector<double> residual;  // max_i |F^i| per point
  std::vector<int> rank;         // rank of the single-row system, max over i
  std::vector<SigmaStatus> status;
  double max_residual = 0;  // over ok points
  int singular_points = 0;
};

// Minimum-norm Gamma^i_{jk} = -B^i A_{jk} / (h^i |A|_F^2) per point. All fields
// must share a lattice. Throws PositivityError, PreconditionError.
SigmaSolveResult sigma_solve(const std::vector<ScalarField>& h, int sx, int sy);

}  // namespace modsurf
