#pragma once

// Local curvature-sign taxonomy around degenerate points: the tabulated
// predictions, and an empirical circle census that checks them.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modsurf/geometry.hpp"
#include "modsurf/jet.hpp"

namespace modsurf {

enum class KAtPoint { zero, positive, undefined };
std::string_view to_string(KAtPoint k);

struct LocalPrediction {
  KAtPoint k_at_point = KAtPoint::undefined;
  int n_plus = 0;
  int n_minus = 0;
  int zero_curves = 0;
  std::string source;     // "T1R1" .. "T1R4", "T2R1" .. "T2R3"
  bool disputed = false;  // the printed row contradicts direct evaluation
};

// Throws UnclassifiedError for regular points (F, F', F'' all nonzero) and
// profiles that are not well defined.
LocalPrediction predict(const ZeroProfile& p);

struct CensusCircle {
  double radius = 0;
  int samples = 0;
  int sign_changes = 0;
  int pos_arcs = 0;  // arcs with K > 0
  int neg_arcs = 0;
  std::vector<double> crossings;  // angles in [0, 2pi) where K changes sign
  bool resolved = false;          // no sample stayed inside the zero band
};

struct CensusReport {
  double radius = 0;  // smallest resolved radius
  int sign_changes = 0;
  int pos_arcs = 0;
  int neg_arcs = 0;
  bool stable = false;
  std::vector<double> crossings;
  std::vector<CensusCircle> circles;
};

struct CensusOptions {
  std::vector<double> radii{0.1, 0.05, 0.025, 0.0125};
  int samples = 720;
  int max_doublings = 4;
  double zero_tol = 1e-12;  // relative to |F'|^4 + |2FF'' - F'^2|^2
};

// Sign of K = -numer / (positive) on circles |z - z0| = r, numer = |F'|^4 - |2FF'' - F'^2|^2.
// Throws DegeneracyError when no radius can be resolved.
CensusReport census(const AnalyticSource& src, cplx z0, const CensusOptions& opts = {});
CensusReport census(const Expr& F, cplx z0, const CensusOptions& opts = {}, const BranchPolicy& policy = {});

enum class HSign { positive, negative, zero, undefined };
std::string_view to_string(HSign s);

// Rows of the mean-curvature sign table, in printed order; unlisted covers
// F = F' = 0 != F'', which the table omits.
enum class Table3Row { r1, r2, r3, r4, r5, r6, r7, unlisted };
std::string_view to_string(Table3Row r);

struct MeanCurvatureRow {
  Table3Row row = Table3Row::unlisted;
  HSign sign = HSign::undefined;          // consistent with sample_point
  HSign printed_sign = HSign::undefined;  // what the table as printed concludes
  std::optional<double> re_ratio;         // Re(FF''/F'^2), row 1
  std::optional<double> threshold;        // 1 - 1/|F'|^2, row 1
  std::optional<double> printed_threshold;  // 1/|F'|^2 - 1, row 1
  std::optional<double> abs_dF;           // |F'|, rows 1-2
  bool disputed = false;
};

MeanCurvatureRow mean_curvature_row(const Expr& F, cplx z0, const BranchPolicy& policy = {});

}  // namespace modsurf
