#include <cmath>
#include <random>

#include "doctest.h"
#include "modsurf/errors.hpp"
#include "modsurf/jet.hpp"

using namespace modsurf;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const char* kCorpus[] = {
    "exp(z)",        "sin(z)^2",          "1+z+z^4",       "z^3+2",          "(1+z)^(1+2i)",
    "cosh(2*z)+3",   "log(z+3)",          "1/(z-4)",       "sqrt(z+2)*z",    "(z^2+1)*exp(-z/2)",
    "sinh(z)*cos(z)", "(2+z)^0.6666666666666666",
};

}  // namespace

TEST_CASE("jet of polynomials is exact") {
  const Expr e = parse_or_throw("z^3+2");
  const ComplexJet j = eval_jet(e, 1.0, 4);
  CHECK(j.coeffs[0] == cplx(3));
  CHECK(j.derivative(1) == cplx(3));
  CHECK(j.derivative(2) == cplx(6));
  CHECK(j.derivative(3) == cplx(6));
  CHECK(j.derivative(4) == cplx(0));
}

TEST_CASE("jet agrees with Cauchy oracle across a corpus") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (const char* src : kCorpus) {
    const Expr e = parse_or_throw(src);
    for (int k = 0; k < 5; ++k) {
      const cplx z(u(rng), u(rng));
      const ComplexJet j = eval_jet(e, z, 4);
      for (int d = 0; d <= 4; ++d) {
        CAPTURE(src);
        CAPTURE(d);
        CHECK(rel(j.derivative(d), fd_oracle(e, z, d)) < 1e-7);
      }
    }
  }
}

TEST_CASE("value() and jet() agree") {
  for (const char* src : kCorpus) {
    const Evaluator ev(parse_or_throw(src));
    const cplx z(0.21, -0.13);
    CAPTURE(src);
    CHECK(rel(ev.jet(z, 0).value(), ev.value(z)) < 1e-13);
  }
}

TEST_CASE("linearity and Leibniz rule") {
  const Expr f = parse_or_throw("sin(z)");
  const Expr g = parse_or_throw("exp(2*z)");
  const cplx z(0.3, 0.2);
  const ComplexJet jf = eval_jet(f, z, 6), jg = eval_jet(g, z, 6);
  const ComplexJet js = eval_jet(Expr::add(Expr::mul(Expr::lit(3.0), f), g), z, 6);
  const ComplexJet jp = eval_jet(Expr::mul(f, g), z, 6);
  for (int k = 0; k <= 6; ++k) {
    CHECK(rel(js.coeffs[k], 3.0 * jf.coeffs[k] + jg.coeffs[k]) < 1e-13);
    cplx conv{};
    for (int m = 0; m <= k; ++m) conv += jf.coeffs[m] * jg.coeffs[k - m];
    CHECK(rel(jp.coeffs[k], conv) < 1e-13);
  }
}

TEST_CASE("errors: order, poles, cuts") {
  const Expr e = parse_or_throw("1/z");
  CHECK_THROWS_AS(eval_jet(e, 0.0, 2), DomainError);
  CHECK_THROWS_AS(eval_jet(e, 1.0, 13), OrderError);
  CHECK_THROWS_AS(eval_jet(parse_or_throw("log(z)"), -1.0, 1), DomainError);
  CHECK_THROWS_AS(eval_jet(parse_or_throw("sqrt(z)"), cplx(-2, 0), 1), DomainError);
}

TEST_CASE("anchored branch is continuous across the principal cut") {
  // ((z-1)/(z+2))^(2/3): the base is negative real on (-2, 1).
  const Expr e = parse_or_throw("((z-1)/(z+2))^0.6666666666666666");
  const cplx ref = std::pow(cplx(-0.5, 0.0), 2.0 / 3.0);
  const Evaluator ev(e, BranchPolicy::anchored(0.0, ref));
  CHECK(rel(ev.value(0.0), ref) < 1e-12);
  const cplx above = ev.value(cplx(0.1, 1e-9)), below = ev.value(cplx(0.1, -1e-9));
  CHECK(std::abs(above - below) < 1e-7);
  CHECK_THROWS_AS(eval_jet(e, cplx(0.1, 0.0), 1), DomainError);
  CHECK_NOTHROW(ev.jet(cplx(0.1, 0.0), 3));
}

TEST_CASE("zero profiles") {
  auto prof = [](const char* s) { return zero_profile(parse_or_throw(s), 0.0); };
  {
    const ZeroProfile p = prof("1+z+z^4");
    CHECK_FALSE(p.f_zero);
    CHECK_FALSE(p.f1_zero);
    CHECK(p.f2_zero);
    CHECK(p.n == 4);
  }
  {
    const ZeroProfile p = prof("z^3");
    CHECK(p.f_zero);
    CHECK(p.f1_zero);
    CHECK(p.f2_zero);
    CHECK(p.n == 3);
    CHECK(p.f_order == 3);
  }
  {
    const ZeroProfile p = prof("exp(z)");
    CHECK_FALSE(p.f2_zero);
    CHECK(p.n == 2);
  }
  CHECK_FALSE(prof("0*z").well_defined);
  CHECK_THROWS_AS(zero_profile(parse_or_throw("z"), 0.0, 13), OrderError);
}
