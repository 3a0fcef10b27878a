#include <cmath>
#include <random>

#include "doctest.h"
#include "modsurf/construct.hpp"
#include "modsurf/errors.hpp"
#include "modsurf/quadrature.hpp"

using namespace modsurf;

namespace {

const cplx kF0 = std::pow(cplx(-0.5, 0.0), 2.0 / 3.0);

BetaSpec example31() { return {parse_or_throw("z+0.5"), -1.0, kF0, Domain::disk(0.5)}; }

Evaluator closed_form() {
  return Evaluator(parse_or_throw("((z-1)/(z+2))^0.6666666666666666"), BranchPolicy::anchored(0.0, kF0));
}

}  // namespace

TEST_CASE("quadrature on segments") {
  const QuadResult q = integrate_segment([](cplx z) { return std::exp(z); }, 0.0, cplx(1, 1));
  CHECK(std::abs(q.value - (std::exp(cplx(1, 1)) - 1.0)) < 1e-13);
  CHECK(q.converged);
  const QuadResult p = integrate_segment([](cplx z) { return 1.0 / (z - 1.05); }, 0.0, 1.0, {1e-12, 0, 4000});
  CHECK(std::abs(p.value - std::log(cplx(0.05 / 1.05))) < 1e-11);
  CHECK(p.intervals > 1);
}

TEST_CASE("ullrich_eval: closed forms") {
  {
    const UllrichResult r = ullrich_eval({parse_or_throw("0"), 1.0, 1.0, Domain::disk(1)}, cplx(0.3, 0.2));
    CHECK(std::abs(r.F - std::exp(cplx(0.3, 0.2))) < 1e-12);
  }
  {
    const UllrichResult r = ullrich_eval({parse_or_throw("0.5"), 1.0, 1.0, Domain::disk(1)}, 0.2);
    CHECK(std::abs(r.F - 1.21) < 1e-12);
    CHECK(r.err <= 1e-10);
  }
  {
    const Evaluator cf = closed_form();
    const UllrichResult r = ullrich_eval(example31(), 0.1);
    CHECK(std::abs(r.F - cf.value(0.1)) < 1e-8);
    CHECK(ullrich_eval(example31(), 0.0).F == kF0);
  }
}

TEST_CASE("ullrich_eval: path independence") {
  const BetaSpec spec{parse_or_throw("1+z^2/3-0.2*z"), cplx(0.7, 0.4), 2.0, Domain::disk(0.6)};
  const cplx z(0.3, -0.4), w(0.2, 0.3);
  const UllrichResult a = ullrich_eval(spec, z);
  const UllrichResult b = ullrich_eval_path(spec, {0.0, w, z});
  CHECK(std::abs(a.F - b.F) <= a.err + b.err + 1e-14);
}

TEST_CASE("ullrich_eval: errors") {
  // k + B(s) = -1 + s vanishes at s = 1.
  const BetaSpec spec{parse_or_throw("1+0*z"), -1.0, 1.0, Domain::disk(2)};
  CHECK_THROWS_AS(ullrich_eval(spec, 1.5), PoleOnPath);
  CHECK_THROWS_AS(ullrich_eval(example31(), 0.9), DomainError);
  CHECK_THROWS_AS(ullrich_eval({parse_or_throw("z"), 1.0, 0.0, Domain::disk(1)}, 0.1), DomainError);
  CHECK_THROWS_AS(ullrich_eval(example31(), 0.2, 1e-300), ToleranceNotMet);
}

TEST_CASE("recover_beta") {
  CHECK(std::abs(recover_beta(parse_or_throw("exp(z)"), cplx(0.4, 1))) < 1e-15);
  CHECK(std::abs(recover_beta(parse_or_throw("((z-1)/(z+2))^0.6666666666666666"), 0.0,
                              BranchPolicy::anchored(0.0, kF0)) - 0.5) < 1e-12);
  const ConstructedF F(example31());
  CHECK(std::abs(recover_beta(F, 0.2) - 0.7) < 1e-6);
  CHECK_THROWS_AS(recover_beta(parse_or_throw("1+z^2"), 0.0), DegeneracyError);
}

TEST_CASE("round trip for random polynomial beta") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-0.4, 0.4);
  int done = 0;
  while (done < 4) {
    const std::string beta = format(Expr::add(
        Expr::add(Expr::lit(cplx(0.3 + c(rng), c(rng))), Expr::mul(Expr::lit(cplx(c(rng), c(rng))), Expr::var())),
        Expr::mul(Expr::lit(cplx(c(rng), c(rng))), Expr::ipow(Expr::var(), 3))));
    const BetaSpec spec{parse_or_throw(beta), cplx(1.0 + c(rng), c(rng)), cplx(1 + c(rng), c(rng)), Domain::disk(0.4)};
    const ConstructedF F(spec);
    const Evaluator b(spec.beta);
    CAPTURE(beta);
    for (int k = 0; k < 20; ++k) {
      const cplx z = std::polar(0.3 * (k + 1) / 20.0, 0.9 * k);
      CHECK(std::abs(recover_beta(F, z) - b.value(z)) < 1e-5);
    }
    ++done;
  }
}

TEST_CASE("structural and Cauchy derivatives agree") {
  const ConstructedF F(example31());
  const ComplexJet a = F.jet(cplx(0.1, 0.2), 2, DerivativeMode::cauchy);
  const ComplexJet b = F.jet(cplx(0.1, 0.2), 2, DerivativeMode::structural);
  CHECK(std::abs(a.coeffs[1] - b.coeffs[1]) < 1e-8);
  CHECK(std::abs(a.coeffs[2] - b.coeffs[2]) < 1e-7);
}

TEST_CASE("zero-K families") {
  CHECK(format(zero_k_family(ZeroKKind::exponential, 1.0, 0.0)) == "exp(z)");
  CHECK(zero_k_family(ZeroKKind::powerlaw, 1.0, 2.0, 3.0) == parse_or_throw("(z+2)^(1+3i)"));
  CHECK(zero_k_family(ZeroKKind::powerlaw, 2.0, 1.0, 0.0).node().op == Op::IntPow);
  const Expr F = zero_k_family(ZeroKKind::powerlaw, 1.0, 2.0, 3.0);
  const GridField g = scan_grid(F, {-0.7, 0.7, -0.7, 0.7}, 16, 16);
  for (std::size_t k = 0; k < g.samples.size(); ++k)
    if (!g.excluded[k] && g.samples[k].k_state == KState::defined) CHECK(std::fabs(g.samples[k].K) < 1e-8);
}

TEST_CASE("sign-locked construction") {
  CHECK(std::holds_alternative<ConstructedF>(sign_locked_construct(example31(), TargetSign::negative)));
  const auto bad = sign_locked_construct(example31(), TargetSign::positive);
  REQUIRE(std::holds_alternative<ValidationFailure>(bad));
  CHECK_FALSE(std::get<ValidationFailure>(bad).points.empty());
  const BetaSpec pos{parse_or_throw("2+z"), 1.0, 1.0, Domain::disk(0.5)};
  const auto ok = sign_locked_construct(pos, TargetSign::positive);
  REQUIRE(std::holds_alternative<ConstructedF>(ok));
  // Every non-degenerate grid point has the target sign.
  const AnalyticSource src = std::get<ConstructedF>(ok).source(DerivativeMode::structural);
  for (cplx z : pos.domain.grid(9)) {
    const SurfaceSample s = sample_point(src, z);
    if (s.k_state == KState::defined) CHECK(s.K > 0);
  }
}

TEST_CASE("domains") {
  CHECK(parse_domain("disk 0.5").radius == 0.5);
  CHECK(parse_domain("rect -1 1 -0.5 0.5").kind == Domain::Kind::rect);
  CHECK_THROWS_AS(parse_domain("circle 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_domain("rect 1 0 0 1"), std::invalid_argument);
  CHECK(Domain::disk(1).grid(5).size() == 9);
}
