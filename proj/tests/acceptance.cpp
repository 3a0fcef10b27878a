// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "modsurf/classify.hpp"
#include "modsurf/construct.hpp"
#include "modsurf/errors.hpp"
#include "modsurf/fieldtheory.hpp"
#include "modsurf/raster.hpp"

using namespace modsurf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && dt > budget_s) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(budget_s).substr(0, 3) + " s budget)";
  }
  failures += !o.pass;
  std::printf("%s  %2d  %s: %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), dt);
  std::fflush(stdout);
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct RegularPoint {
  Expr F;
  cplx z;
  SurfaceSample s;
};

std::vector<RegularPoint> regular_points(int per_function, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  std::vector<RegularPoint> out;
  for (const char* src : corpus::kFunctions) {
    const Expr F = parse_or_throw(src);
    for (int got = 0; got < per_function;) {
      const cplx z(u(rng), u(rng));
      const SurfaceSample s = sample_point(F, z);
      if (std::abs(s.F) < 0.05 || std::abs(s.dF) < 0.05 || std::abs(s.d2F) < 0.05) continue;
      if (std::fabs(1.0 - s.grad_sq) < 0.05) continue;
      out.push_back({F, z, s});
      ++got;
    }
  }
  return out;
}

RealField height(const Expr& F) {
  auto ev = std::make_shared<Evaluator>(F);
  return [ev](double x, double y) { return std::abs(ev->value(cplx(x, y))); };
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "constructed example against its closed form", 5.0, [] {
    const cplx F0 = std::pow(cplx(-0.5, 0.0), 2.0 / 3.0);
    const ConstructedF F({parse_or_throw("z+0.5"), -1.0, F0, Domain::disk(0.5)});
    const Evaluator closed(parse_or_throw("((z-1)/(z+2))^0.6666666666666666"), BranchPolicy::anchored(0.0, F0));
    const AnalyticSource src = F.source(DerivativeMode::cauchy);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double err = 0, kmax = -1e300;
    for (int k = 0; k < 100; ++k) {
      const cplx z = std::polar(0.45 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
      err = std::max(err, std::abs(F.value(z) - closed.value(z)));
      kmax = std::max(kmax, sample_point(src, z).K);
    }
    return Outcome{err <= 1e-6 && kmax < 0, "100 points, max error " + g(err) + ", max K " + g(kmax)};
  });

  criterion(2, "zero-curvature families", 2.0, [] {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Rect w{-0.5, 0.5, -0.5, 0.5};
    // K = -numer / (4 h^2 (1 - g)^2) where numer cancels terms of size numer_scale, so
    // rounding in F, F', F'' leaves |K| ~ eps * cancel. Near the lightlike curve cancel is large.
    double worst = 0, worst_abs = 0;
    int used = 0, over_abs = 0;
    for (ZeroKKind kind : {ZeroKKind::exponential, ZeroKKind::powerlaw})
      for (int draw = 0; draw < 5; ++draw) {
        const cplx m(u(rng), u(rng));
        // Re(mz + n) > 0 on the window keeps the power family off its cut.
        const cplx n = kind == ZeroKKind::powerlaw ? cplx(1.5 + 0.5 * u(rng), u(rng)) : cplx(u(rng), u(rng));
        const GridField grid = scan_grid(zero_k_family(kind, m, n, 2 * u(rng)), w, 64, 64);
        for (std::size_t k = 0; k < grid.samples.size(); ++k)
          if (!grid.excluded[k] && grid.samples[k].k_state == KState::defined) {
            const SurfaceSample& s = grid.samples[k];
            const double cancel = s.numer_scale / (4 * s.h * s.h * std::pow(1 - s.grad_sq, 2));
            worst = std::max(worst, std::fabs(s.K) / std::max(1.0, cancel));
            worst_abs = std::max(worst_abs, std::fabs(s.K));
            over_abs += std::fabs(s.K) > 1e-8;
            ++used;
          }
      }
    return Outcome{worst <= 1e-8 && used > 0, std::to_string(used) + " samples, max |K|/max(1, cancel) " + g(worst) +
                                                  ", max |K| " + g(worst_abs) + " (" + std::to_string(over_abs) +
                                                  " near-lightlike samples above 1e-8 absolute)"};
  });

  criterion(3, "vanishing-second-derivative census", 5.0, [] {
    bool ok = true;
    std::string d;
    for (const char* src : {"1+z+z^4", "1+z+z^5", "1+z^3", "z+z^3", "z+z^4", "z^3", "z^4"}) {
      const LocalPrediction p = predict(zero_profile(parse_or_throw(src), 0.0));
      const CensusReport c = census(parse_or_throw(src), 0.0);
      const bool row = c.stable && c.pos_arcs == p.n_plus && c.neg_arcs == p.n_minus;
      ok = ok && row;
      d += std::string(src) + " (" + std::to_string(c.pos_arcs) + "," + std::to_string(c.neg_arcs) + ")" +
           (row ? "" : "!") + " ";
    }
    return Outcome{ok, d};
  });

  criterion(4, "nonvanishing-second-derivative rows and the double zero", 0, [] {
    bool ok = true;
    std::string d;
    for (const char* src : {"1+z^2", "z+z^2"}) {
      const LocalPrediction p = predict(zero_profile(parse_or_throw(src), 0.0));
      const CensusReport c = census(parse_or_throw(src), 0.0);
      ok = ok && c.stable && c.pos_arcs == p.n_plus && c.neg_arcs == p.n_minus;
      d += std::string(src) + " (" + std::to_string(c.pos_arcs) + "," + std::to_string(c.neg_arcs) + ") ";
    }
    const Expr F = parse_or_throw("z^2");
    const LocalPrediction p = predict(zero_profile(F, 0.0));
    const CensusReport c = census(F, 0.0);
    // K(r) = -4 + O(r^2) along a ray; one Richardson step removes the r^2 term.
    const double k1 = sample_point(F, cplx(2e-4, 4e-4)).K, k2 = sample_point(F, cplx(1e-4, 2e-4)).K;
    const double klim = (4 * k2 - k1) / 3;
    const double k0 = sample_point(F, 0.0).K;
    ok = ok && std::fabs(klim + 4) <= 1e-6 && std::fabs(k0 + 4) <= 1e-6 && c.pos_arcs == 0 && c.neg_arcs == 1 &&
         p.disputed;
    d += "z^2: limit K " + g(klim) + ", census (" + std::to_string(c.pos_arcs) + "," + std::to_string(c.neg_arcs) +
         "), disputed " + (p.disputed ? "yes" : "no");
    return Outcome{ok, d};
  });

  criterion(5, "curvature formula concordance", 0, [] {
    double worst6 = 0, worst3 = 0;
    for (const RegularPoint& p : regular_points(20, 55)) {
      const SurfaceSample& s = p.s;
      const double cancel = s.numer_scale / (4 * s.h * s.h * std::pow(1 - s.grad_sq, 2));
      worst6 = std::max(worst6, std::fabs(s.K - *s.K_eq6) / std::max(std::fabs(s.K), 1e-6 * cancel));
      const Hessian hs = fd_hessian(height(p.F), p.z.real(), p.z.imag());
      const double hn = std::fabs(hs.xx) + std::fabs(hs.yy) + 2 * std::fabs(hs.xy);
      const double k3 = minkowski_gaussian(s.grad_sq, hs);
      worst3 = std::max(worst3, std::fabs(s.K - k3) / std::max(std::fabs(s.K), hn * hn / std::pow(1 - s.grad_sq, 2)));
    }
    return Outcome{worst6 <= 1e-8 && worst3 <= 1e-4,
                   "200 points, alpha form " + g(worst6) + ", differenced Hessian " + g(worst3)};
  });

  criterion(6, "log-harmonic and gradient identities", 0, [] {
    double lh = 0, gr = 0;
    for (const RegularPoint& p : regular_points(100, 66)) {
      const RealField h = height(p.F);
      const auto [gx, gy] = fd_gradient(h, p.z.real(), p.z.imag(), kFieldFdStep);
      const Hessian hs = fd_hessian(h, p.z.real(), p.z.imag(), kFieldFdStep);
      lh = std::max(lh, std::fabs(p.s.h * hs.trace() - (gx * gx + gy * gy)) / (1 + p.s.h * p.s.h));
      gr = std::max(gr, std::fabs(p.s.grad_sq - (gx * gx + gy * gy)));
    }
    return Outcome{lh <= 1e-5 && gr <= 1e-6, "1000 points, log-harmonic " + g(lh) + ", gradient " + g(gr)};
  });

  criterion(7, "zero mean curvature non-existence witness", 0, [] {
    const Rect unit{0, 1, 0, 1};
    double least = 1e300;
    for (const char* src : corpus::kFunctions)
      least = std::min(least, zmc_scan(parse_or_throw(src), unit, 21, 21).max_residual);
    const bool affine = zmc_scan(parse_or_throw("2*z+1"), unit, 11, 11).affine;
    const bool vacuous = zmc_scan(parse_or_throw("3"), unit, 11, 11).vacuous;
    return Outcome{least > 0.01 && affine && vacuous,
                   "smallest max residual " + g(least) + "; affine and constant cases flagged"};
  });

  criterion(8, "constant mean curvature identities", 0, [] {
    std::mt19937_64 rng(38);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double lap = 0, eik = 0, chr = 0, sq = 0;
    const Rect w{-1, 1, -1, 1};
    for (int k = 0; k < 50; ++k) {
      double H = u(rng);
      if (std::fabs(H) < 0.1) H = std::copysign(0.1, H);
      const double a = u(rng), b = u(rng);
      const CmcReport r = cmc_verify({H, a, b}, w, 11);
      lap = std::max(lap, r.max_res_laplace);
      eik = std::max(eik, r.max_res_eikonal);
      chr = std::max(chr, characteristic_f_check(a, b, H, w, 11));
      // Completed square at random points.
      for (int t = 0; t < 10; ++t) {
        const double x = u(rng), y = u(rng), x0 = -a / H, y0 = -b / H;
        sq = std::max(sq, std::fabs(cmc_height({H, a, b}, x, y) - H / 2 * ((x - x0) * (x - x0) + (y - y0) * (y - y0))));
      }
    }
    const bool ok = lap <= 1e-12 && eik <= 1e-12 && chr <= 1e-12 && sq <= 1e-12;
    return Outcome{ok, "laplace " + g(lap) + ", eikonal " + g(eik) + ", characteristic " + g(chr) + ", square " + g(sq)};
  });

  criterion(9, "massless scalar and sigma model residuals", 0, [] {
    const Rect d{-1, 1, -1, 1};
    const MasslessReport a = massless_check(parse_or_throw("exp(z)"), NullOrientation::plus, d, 21);
    const MasslessReport b = massless_check(parse_or_throw("2+sin(z)"), NullOrientation::minus, d, 21);
    const double mres = std::max({a.box_res, a.null_res, b.box_res, b.null_res});
    const Rect unit{0, 1, 0, 1};
    auto ex = ScalarField::from_function([](double x, double) { return std::exp(x); }, unit, 21, 21,
                                         [](double x, double) {
                                           const double e = std::exp(x);
                                           return Derivs{e, e, 0, Hessian{e, 0, 0}};
                                         });
    auto ey = ScalarField::from_function([](double, double y) { return std::exp(y); }, unit, 21, 21,
                                         [](double, double y) {
                                           const double e = std::exp(y);
                                           return Derivs{e, 0, e, Hessian{0, 0, e}};
                                         });
    const SigmaSolveResult one = sigma_solve({ex}, 1, 1);
    const SigmaSolveResult two = sigma_solve({ex, ey}, 1, 1);
    const double sres = std::max(one.max_residual, two.max_residual);
    return Outcome{mres <= 1e-10 && sres <= 1e-10,
                   "massless " + g(mres) + ", sigma " + g(sres) + " (singular points " +
                       std::to_string(one.singular_points + two.singular_points) + ")"};
  });

  criterion(10, "convexity bound 2 K h^2 < 1", 0, [] {
    struct Window {
      const char* F;
      Rect r;
    };
    double worst = 0;
    bool ok = true;
    std::string d;
    for (const Window& w : {Window{"z^2", {0.2, 1, 0.2, 1}}, Window{"z^3", {0.3, 1, 0.3, 1}},
                            Window{"z^1.5", {0.3, 1.2, 0.1, 1}}, Window{"3*z^4", {0.5, 1.5, -0.5, 0.5}}}) {
      const ConvexityReport r = convexity_bounds(ScalarField::from_F(parse_or_throw(w.F), w.r, 21, 21), Ambient::euclidean);
      ok = ok && r.bound_holds;
      worst = std::max(worst, r.max_bound);
      d += std::string(w.F) + " " + g(r.max_bound) + " ";
    }
    return Outcome{ok, d + "; max " + g(worst)};
  });

  criterion(11, "golden raster and mesh", 0, [] {
    auto make = [] { return scan_grid(parse_or_throw("sin(z)^2"), Rect{0, std::numbers::pi / 2, -1, 1}, 64, 64); };
    const GridField a = make(), b = make();
    const std::string pgm = causal_raster(a).to_pgm(), obj = mesh_text(a);
    const bool runs = pgm == causal_raster(b).to_pgm() && obj == mesh_text(b);
    const std::string dir = MODSURF_GOLDEN_DIR;
    const bool golden = pgm == slurp(dir + "/sin2_causal.pgm") && obj == slurp(dir + "/sin2_mesh.obj");
    return Outcome{runs && golden, std::string("repeat runs ") + (runs ? "identical" : "differ") + ", golden files " +
                                       (golden ? "identical" : "differ")};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
