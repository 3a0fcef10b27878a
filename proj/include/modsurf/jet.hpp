#pragma once

// Truncated Taylor (jet) evaluation of expression trees, plain complex
// evaluation, and a Cauchy-integral derivative oracle.

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "modsurf/expr.hpp"

namespace modsurf {

inline constexpr int kMaxJetOrder = 12;

// Taylor coefficients c_j = F^(j)(center) / j!.
struct ComplexJet {
  cplx center{};
  std::vector<cplx> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  cplx value() const { return coeffs.at(0); }
  // F^(j)(center) = j! c_j
  cplx derivative(int j) const;
  // max_j |c_j|
  double scale() const;
};

// Principal branch (cut along the negative real axis of every log/power
// argument) unless an anchor is given. With an anchor p, each branching
// node uses log(w) = Log(w(p)) + 2*pi*i*m + Log(w / w(p)), which is
// continuous around p. When a reference value is also given, the offsets m
// are chosen so that F(p) reproduces it.
struct BranchPolicy {
  std::optional<cplx> anchor;
  std::optional<cplx> reference;

  static BranchPolicy principal() { return {}; }
  static BranchPolicy anchored(cplx point, std::optional<cplx> reference = std::nullopt) {
    return {point, reference};
  }
};

// Binds an expression to a branch policy. Construction resolves the anchored
// branches once; evaluation is const and reentrant.
class Evaluator {
 public:
  explicit Evaluator(Expr e, BranchPolicy policy = {});

  // Throws DomainError, OrderError (k outside [0, kMaxJetOrder]).
  ComplexJet jet(cplx z0, int k) const;
  // Direct complex evaluation with library elementary functions; shares no
  // arithmetic with jet().
  cplx value(cplx z) const;

  const Expr& expr() const { return expr_; }
  const BranchPolicy& policy() const { return policy_; }

  struct Branch {
    cplx anchor_arg;  // w(p)
    cplx anchor_log;  // chosen log of w(p)
  };

 private:
  Expr expr_;
  BranchPolicy policy_;
  std::unordered_map<const Node*, Branch> branches_;

  friend class BranchResolver;
};

ComplexJet eval_jet(const Expr& e, cplx z0, int k, const BranchPolicy& policy = {});

struct CauchyOptions {
  double radius = 1e-1;
  int nodes = 64;
  double shrink = 0.5;
  int max_shrinks = 6;
  double agree_tol = 1e-8;
};

// j-th derivative of an analytic f at z0 from the trapezoid rule on circles
// |z - z0| = r (discrete Cauchy integral), with the radius halved until two
// consecutive radii agree.
cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z0, int j,
                       const CauchyOptions& opts = {});

// F^(j)(z0) of a principal-branch expression via cauchy_derivative.
cplx fd_oracle(const Expr& e, cplx z0, int j);

// Vanishing pattern of F, F', F'' at a point.
struct ZeroProfile {
  bool f_zero = false;
  bool f1_zero = false;
  bool f2_zero = false;
  // Least index >= 2 whose derivative does not vanish (2 at regular points).
  int n = 2;
  // Vanishing order of F itself; -1 if every coefficient up to max_order vanishes.
  int f_order = 0;
  bool well_defined = true;
  int max_order = kMaxJetOrder;
};

ZeroProfile zero_profile(const Expr& e, cplx z0, int max_order = kMaxJetOrder, double tol = 1e-9,
                         const BranchPolicy& policy = {});
ZeroProfile zero_profile(const ComplexJet& jet, double tol = 1e-9);

}  // namespace modsurf
