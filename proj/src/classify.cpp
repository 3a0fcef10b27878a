#include "modsurf/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "modsurf/errors.hpp"
#include "modsurf/kernels.hpp"

namespace modsurf {

std::string_view to_string(KAtPoint k) {
  switch (k) {
    case KAtPoint::zero: return "zero";
    case KAtPoint::positive: return "positive";
    case KAtPoint::undefined: return "undefined";
  }
  return "?";
}

std::string_view to_string(HSign s) {
  switch (s) {
    case HSign::positive: return "positive";
    case HSign::negative: return "negative";
    case HSign::zero: return "zero";
    case HSign::undefined: return "undefined";
  }
  return "?";
}

std::string_view to_string(Table3Row r) {
  switch (r) {
    case Table3Row::r1: return "T3R1";
    case Table3Row::r2: return "T3R2";
    case Table3Row::r3: return "T3R3";
    case Table3Row::r4: return "T3R4";
    case Table3Row::r5: return "T3R5";
    case Table3Row::r6: return "T3R6";
    case Table3Row::r7: return "T3R7";
    case Table3Row::unlisted: return "unlisted";
  }
  return "?";
}

LocalPrediction predict(const ZeroProfile& p) {
  if (!p.well_defined) throw UnclassifiedError("profile is not well defined (all derivatives vanish)");
  const int n = p.n;
  LocalPrediction r;
  auto set = [&](KAtPoint k, int plus, int minus, const char* src) {
    r.k_at_point = k;
    r.n_plus = plus;
    r.n_minus = minus;
    r.zero_curves = (plus > 0 && minus > 0) ? plus + minus : 0;
    r.source = src;
  };
  if (p.f2_zero) {
    if (n < 3) throw UnclassifiedError("F'' vanishes but no higher derivative was found");
    if (!p.f_zero && !p.f1_zero)
      set(KAtPoint::zero, n - 2, n - 2, "T1R1");
    else if (!p.f_zero && p.f1_zero)
      set(KAtPoint::zero, 1, 0, "T1R2");
    else if (p.f_zero && !p.f1_zero)
      set(KAtPoint::undefined, n - 1, n - 1, "T1R3");
    else
      set(KAtPoint::undefined, 0, 1, "T1R4");
    return r;
  }
  if (!p.f_zero && p.f1_zero) {
    set(KAtPoint::positive, 1, 0, "T2R1");
  } else if (p.f_zero && !p.f1_zero) {
    set(KAtPoint::undefined, 1, 1, "T2R2");
  } else if (p.f_zero && p.f1_zero) {
    set(KAtPoint::undefined, 1, 0, "T2R3");
    r.disputed = true;
  } else {
    throw UnclassifiedError("regular point: F, F', F'' are all nonzero");
  }
  return r;
}

namespace {

CensusCircle census_circle(const AnalyticSource& src, cplx z0, double r, const CensusOptions& opts) {
  CensusCircle c;
  c.radius = r;
  int m = opts.samples;
  std::vector<double> numer, angle;
  std::vector<int> sign;
  for (int round = 0; round <= opts.max_doublings; ++round, m *= 2) {
    std::vector<double> fr(m), fi(m), ar(m), ai(m), br(m), bi(m);
    angle.assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
      // Half-offset angles: refined grids never revisit an earlier sample.
      angle[k] = 2.0 * std::numbers::pi * (k + 0.5) / m;
      const ComplexJet j = src.jet(z0 + std::polar(r, angle[k]), 2);
      const cplx F = j.coeffs[0], d1 = j.derivative(1), d2 = j.derivative(2);
      fr[k] = F.real(), fi[k] = F.imag(), ar[k] = d1.real(), ai[k] = d1.imag();
      br[k] = d2.real(), bi[k] = d2.imag();
    }
    std::vector<double> gs(m), sc(m), kk(m), hh(m);
    numer.assign(m, 0.0);
    kernels::curvature({fr, fi, ar, ai, br, bi}, {gs, numer, sc, kk, hh});
    sign.assign(m, 0);
    bool ambiguous = false;
    for (int k = 0; k < m; ++k) {
      if (!(std::fabs(numer[k]) > opts.zero_tol * sc[k])) {
        ambiguous = true;
        continue;
      }
      sign[k] = numer[k] < 0 ? +1 : -1;
    }
    c.samples = m;
    if (!ambiguous) {
      c.resolved = true;
      break;
    }
  }
  if (!c.resolved) return c;

  for (int k = 0; k < m; ++k) {
    const int k1 = (k + 1) % m;
    if (sign[k] == sign[k1]) continue;
    ++c.sign_changes;
    const double t0 = angle[k];
    const double t1 = k1 == 0 ? angle[k1] + 2.0 * std::numbers::pi : angle[k1];
    double t = t0 + (t1 - t0) * numer[k] / (numer[k] - numer[k1]);
    if (t >= 2.0 * std::numbers::pi) t -= 2.0 * std::numbers::pi;
    c.crossings.push_back(t);
  }
  if (c.sign_changes == 0) {
    c.pos_arcs = sign[0] > 0 ? 1 : 0;
    c.neg_arcs = sign[0] < 0 ? 1 : 0;
  } else {
    c.pos_arcs = c.neg_arcs = c.sign_changes / 2;
  }
  return c;
}

}  // namespace

CensusReport census(const AnalyticSource& src, cplx z0, const CensusOptions& opts) {
  CensusReport rep;
  for (double r : opts.radii) rep.circles.push_back(census_circle(src, z0, r, opts));
  std::vector<const CensusCircle*> ok;
  for (const CensusCircle& c : rep.circles)
    if (c.resolved) ok.push_back(&c);
  std::sort(ok.begin(), ok.end(), [](auto* a, auto* b) { return a->radius < b->radius; });
  const CensusCircle* last = ok.empty() ? nullptr : ok[0];
  const CensusCircle* prev = ok.size() < 2 ? nullptr : ok[1];
  if (!last) throw DegeneracyError("census: the curvature numerator stays within tolerance of zero on every circle");
  rep.radius = last->radius;
  rep.sign_changes = last->sign_changes;
  rep.pos_arcs = last->pos_arcs;
  rep.neg_arcs = last->neg_arcs;
  rep.crossings = last->crossings;
  rep.stable = prev && prev->sign_changes == last->sign_changes && prev->pos_arcs == last->pos_arcs &&
               prev->neg_arcs == last->neg_arcs;
  return rep;
}

CensusReport census(const Expr& F, cplx z0, const CensusOptions& opts, const BranchPolicy& policy) {
  return census(AnalyticSource::from_expr(F, policy), z0, opts);
}

MeanCurvatureRow mean_curvature_row(const Expr& F, cplx z0, const BranchPolicy& policy) {
  const ZeroProfile p = zero_profile(F, z0, kMaxJetOrder, kVanishTol, policy);
  const SurfaceSample s = sample_point(F, z0, policy);
  MeanCurvatureRow r;

  auto sign_of = [](double v, double tol) {
    if (v > tol) return HSign::positive;
    if (v < -tol) return HSign::negative;
    return HSign::zero;
  };

  if (!p.f_zero && !p.f1_zero) {
    r.row = p.f2_zero ? Table3Row::r2 : Table3Row::r1;
    r.abs_dF = std::abs(s.dF);
    const double g = s.grad_sq;
    if (s.causal == Causal::lightlike) {
      r.sign = r.printed_sign = HSign::undefined;
      return r;
    }
    if (r.row == Table3Row::r2) {
      r.printed_sign = *r.abs_dF > 1.0 ? HSign::positive : HSign::negative;
      r.sign = sign_of(*s.H, 0.0);
    } else {
      const double re = (s.F * s.d2F / (s.dF * s.dF)).real();
      r.re_ratio = re;
      r.threshold = 1.0 - 1.0 / g;
      r.printed_threshold = 1.0 / g - 1.0;
      const double tol = kVanishTol * std::max(1.0, std::fabs(*r.threshold));
      // H >= 0 exactly when Re(FF''/F'^2) <= 1 - 1/|F'|^2.
      r.sign = sign_of(*r.threshold - re, tol);
      r.printed_sign = sign_of(*r.printed_threshold - re, tol);
    }
  } else if (!p.f_zero && p.f1_zero) {
    r.row = p.f2_zero ? Table3Row::r4 : Table3Row::r3;
    r.sign = r.printed_sign = HSign::zero;
  } else if (p.f_zero && !p.f1_zero) {
    r.row = p.f2_zero ? Table3Row::r6 : Table3Row::r5;
    r.sign = r.printed_sign = HSign::undefined;
  } else if (!p.f2_zero) {
    r.row = Table3Row::unlisted;
    r.sign = r.printed_sign = HSign::undefined;
  } else {
    r.row = Table3Row::r7;
    r.printed_sign = HSign::zero;
    r.sign = s.H ? sign_of(*s.H, 0.0) : HSign::undefined;
  }
  r.disputed = r.sign != r.printed_sign;
  return r;
}

}  // namespace modsurf
