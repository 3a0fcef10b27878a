#pragma once

// Generating functions with prescribed curvature behaviour: the nested
// integral construction from beta, the zero-K families, and beta recovery.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modsurf/geometry.hpp"
#include "modsurf/jet.hpp"

namespace modsurf {

// Star-shaped region about 0: a disk |z| < r or a rectangle containing 0.
struct Domain {
  enum class Kind { disk, rect } kind = Kind::disk;
  double radius = 0.5;
  Rect rect{};

  static Domain disk(double r) { return {Kind::disk, r, {}}; }
  static Domain rectangle(const Rect& r) { return {Kind::rect, 0, r}; }

  bool contains(cplx z) const;
  Rect bounds() const;
  // Lattice points of an n-by-n grid over bounds() that lie in the domain.
  std::vector<cplx> grid(int n) const;
  std::string describe() const;
};

// Throws std::invalid_argument on malformed text. Accepts "disk r" and "rect x0 x1 y0 y1".
Domain parse_domain(const std::string& text);

struct BetaSpec {
  Expr beta;
  cplx k{};   // F(0) / F'(0)
  cplx F0{};  // F(0)
  Domain domain = Domain::disk(0.5);
};

// Throws DomainError if F0 = 0, the domain does not contain 0, or beta = 1 at
// a validation grid point.
void validate_spec(const BetaSpec& spec, int grid_n = 21);

struct UllrichResult {
  cplx F{};
  double err = 0;
  cplx B{};  // integral of beta from 0 to z along the path
  cplx denom{};  // k + B(z)
  int evaluations = 0;
};

// F(z) = F0 exp(integral_0^z ds / (k + B(s))), B(s) = integral_0^s beta, along the
// straight segment [0, z]. Throws PoleOnPath, ToleranceNotMet, DomainError.
UllrichResult ullrich_eval(const BetaSpec& spec, cplx z, double tol = 1e-10);

// The same along the polyline vertices[0] = 0, vertices[1], ..., vertices.back() = z.
UllrichResult ullrich_eval_path(const BetaSpec& spec, const std::vector<cplx>& vertices, double tol = 1e-10);

enum class DerivativeMode {
  cauchy,      // Cauchy-integral oracle on the numeric evaluator
  structural,  // F' = F/(k+B), F'' = F(1-beta)/(k+B)^2 from the construction
};

// Numeric F built by ullrich_eval; evaluations are memoized and thread-safe.
class ConstructedF {
 public:
  explicit ConstructedF(BetaSpec spec, double tol = 1e-13);

  const BetaSpec& spec() const { return impl_->spec; }
  UllrichResult eval(cplx z) const;
  cplx value(cplx z) const { return eval(z).F; }
  // Derivatives 0..k at z.
  ComplexJet jet(cplx z, int k, DerivativeMode mode = DerivativeMode::cauchy) const;
  AnalyticSource source(DerivativeMode mode = DerivativeMode::cauchy) const;

  CauchyOptions cauchy{0.05, 64, 0.5, 6, 1e-8};

 private:
  struct Impl {
    BetaSpec spec;
    double tol;
    std::unique_ptr<Evaluator> beta;
    mutable std::mutex mu;
    mutable std::map<std::pair<double, double>, UllrichResult> memo;
  };
  std::shared_ptr<Impl> impl_;
};

// (F'^2 - FF'') / F'^2. Throws DegeneracyError if F' vanishes.
cplx recover_beta(const Expr& F, cplx z, const BranchPolicy& policy = {});
cplx recover_beta(const ConstructedF& F, cplx z);

enum class ZeroKKind { exponential, powerlaw };

// exp(m*z+n) or (m*z+n)^(1+i*l).
Expr zero_k_family(ZeroKKind kind, cplx m, cplx n, double l = 0.0);

enum class TargetSign { positive, negative };

struct ValidationFailure {
  std::string reason;
  std::vector<cplx> points;
};

using SignLockResult = std::variant<ConstructedF, ValidationFailure>;

// Accepts when |beta - 1/2| > 1/2 (positive K) or < 1/2 (negative K) at every
// validation grid point.
SignLockResult sign_locked_construct(const BetaSpec& spec, TargetSign target, int grid_n = 21);

}  // namespace modsurf
