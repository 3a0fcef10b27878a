#include "modsurf/repro.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "modsurf/classify.hpp"
#include "modsurf/construct.hpp"
#include "modsurf/errors.hpp"
#include "modsurf/fieldtheory.hpp"

namespace modsurf {

namespace {

ReproItem timed(std::string name, const std::function<void(ReproItem&)>& body) {
  ReproItem it;
  it.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(it);
  } catch (const std::exception& e) {
    it.passed = false;
    it.detail = std::string("exception: ") + e.what();
  }
  it.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return it;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

void constructed_example(ReproItem& it, std::mt19937_64& rng) {
  const cplx F0 = std::pow(cplx(-0.5, 0.0), 2.0 / 3.0);
  const ConstructedF F({parse_or_throw("z+0.5"), -1.0, F0, Domain::disk(0.5)});
  const Evaluator closed(parse_or_throw("((z-1)/(z+2))^0.6666666666666666"), BranchPolicy::anchored(0.0, F0));
  const AnalyticSource src = F.source(DerivativeMode::cauchy);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0, kmax = -1e300;
  for (int k = 0; k < 100; ++k) {
    const cplx z = std::polar(0.45 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
    worst = std::max(worst, std::abs(F.value(z) - closed.value(z)));
    kmax = std::max(kmax, sample_point(src, z).K);
  }
  it.passed = worst <= 1e-6 && kmax < 0;
  it.detail = "max |F - closed form| = " + fmt(worst) + ", max K = " + fmt(kmax);
}

void zero_k(ReproItem& it, ZeroKKind kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0;
  int used = 0;
  const Rect w{-0.5, 0.5, -0.5, 0.5};
  for (int draw = 0; draw < 5; ++draw) {
    const cplx m(u(rng), u(rng));
    // Re(mz + n) > 0 on the window keeps the power family off its cut.
    const cplx n = kind == ZeroKKind::powerlaw ? cplx(1.5 + 0.5 * u(rng), u(rng)) : cplx(u(rng), u(rng));
    const GridField g = scan_grid(zero_k_family(kind, m, n, 2 * u(rng)), w, 64, 64);
    for (std::size_t k = 0; k < g.samples.size(); ++k)
      if (!g.excluded[k] && g.samples[k].k_state == KState::defined) {
        worst = std::max(worst, std::fabs(g.samples[k].K));
        ++used;
      }
  }
  it.passed = worst <= 1e-8 && used > 0;
  it.detail = "max |K| = " + fmt(worst) + " over " + std::to_string(used) + " samples";
}

void census_row(ReproItem& it, const char* src) {
  const LocalPrediction p = predict(zero_profile(parse_or_throw(src), 0.0));
  const CensusReport c = census(parse_or_throw(src), 0.0);
  it.passed = c.stable && c.pos_arcs == p.n_plus && c.neg_arcs == p.n_minus;
  it.detail = p.source + ": predicted (" + std::to_string(p.n_plus) + "," + std::to_string(p.n_minus) +
              "), census (" + std::to_string(c.pos_arcs) + "," + std::to_string(c.neg_arcs) + ") at r = " +
              fmt(c.radius);
}

void double_zero(ReproItem& it) {
  const Expr F = parse_or_throw("z^2");
  const LocalPrediction p = predict(zero_profile(F, 0.0));
  const CensusReport c = census(F, 0.0);
  const double k0 = sample_point(F, 0.0).K;
  // K(r) = -4 + O(r^2) along a ray; one Richardson step removes the r^2 term.
  const double k1 = sample_point(F, cplx(2e-4, 4e-4)).K, k2 = sample_point(F, cplx(1e-4, 2e-4)).K;
  const double klim = (4 * k2 - k1) / 3;
  it.disputed = p.disputed;
  it.passed = std::fabs(k0 + 4) <= 1e-6 && std::fabs(klim + 4) <= 1e-6 && c.pos_arcs == 0 && c.neg_arcs == 1;
  it.detail = "printed (" + std::to_string(p.n_plus) + "," + std::to_string(p.n_minus) + "); K(0) = " + fmt(k0) +
              ", census (" + std::to_string(c.pos_arcs) + "," + std::to_string(c.neg_arcs) + ")";
}

void mean_threshold(ReproItem& it) {
  const Expr F = parse_or_throw("(z^2+1)*exp(-z/2)");
  int checked = 0, flipped = 0;
  bool ok = true;
  for (int k = 0; k < 200; ++k) {
    const cplx z(-0.9 + 0.009 * k, 0.3 - 0.004 * k);
    const MeanCurvatureRow r = mean_curvature_row(F, z);
    const SurfaceSample s = sample_point(F, z);
    if (r.row != Table3Row::r1 || !s.H || r.sign == HSign::undefined) continue;
    ++checked;
    flipped += r.disputed;
    const HSign direct = *s.H > 0 ? HSign::positive : *s.H < 0 ? HSign::negative : HSign::zero;
    ok = ok && (r.sign == direct || r.sign == HSign::zero);
  }
  it.passed = ok && checked > 0;
  it.disputed = flipped > 0;
  it.detail = std::to_string(flipped) + " of " + std::to_string(checked) +
              " points where the printed threshold gives the wrong sign of H";
}

void cmc(ReproItem& it, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    double H = u(rng);
    if (std::fabs(H) < 0.1) H = std::copysign(0.1, H);
    const double a = u(rng), b = u(rng);
    const CmcReport r = cmc_verify({H, a, b}, Rect{-1, 1, -1, 1}, 11);
    worst = std::max({worst, r.max_res_laplace, r.max_res_eikonal, r.max_res_square,
                      characteristic_f_check(a, b, H, Rect{-1, 1, -1, 1}, 11)});
  }
  it.passed = worst <= 1e-12;
  it.detail = "max residual " + fmt(worst) + " over 50 draws";
}

}  // namespace

bool ReproReport::all_passed() const {
  for (const ReproItem& it : items)
    if (!it.passed) return false;
  return true;
}

ReproReport run_repro(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ReproReport rep;
  rep.items.push_back(timed("constructed example matches closed form", [&](ReproItem& it) { constructed_example(it, rng); }));
  rep.items.push_back(timed("zero-K exponential family", [&](ReproItem& it) { zero_k(it, ZeroKKind::exponential, rng); }));
  rep.items.push_back(timed("zero-K power family", [&](ReproItem& it) { zero_k(it, ZeroKKind::powerlaw, rng); }));
  for (const char* src : {"1+z+z^4", "1+z+z^5", "1+z^3", "z+z^3", "z+z^4", "z^3", "z^4", "1+z^2", "z+z^2"})
    rep.items.push_back(timed(std::string("census ") + src, [&](ReproItem& it) { census_row(it, src); }));
  rep.items.push_back(timed("double zero z^2", double_zero));
  rep.items.push_back(timed("mean curvature threshold", mean_threshold));
  rep.items.push_back(timed("cmc identities", [&](ReproItem& it) { cmc(it, rng); }));
  return rep;
}

}  // namespace modsurf
