#include "doctest.h"

#include "xdyn/errors.hpp"
#include "xdyn/laplace/polynomial.hpp"
#include "xdyn/laplace/rational.hpp"
#include "xdyn/laplace/talbot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace xdyn::laplace;

namespace {

Polynomial from_roots(const std::vector<cplx>& roots) {
  Polynomial p{cplx(1.0)};
  for (const auto& r : roots) p = p * Polynomial{-r, cplx(1.0)};
  return p;
}

double best_matching_error(std::vector<cplx> found, const std::vector<cplx>& planted) {
  std::vector<int> perm(found.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      worst = std::max(worst, std::abs(found[static_cast<std::size_t>(perm[i])] - planted[i]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("polynomial arithmetic and trimming") {
  const Polynomial p = Polynomial::from_real({1.0, 2.0, 0.0, 1e-20});
  CHECK(p.degree() == 1);
  CHECK(Polynomial().degree() == -1);
  CHECK(Polynomial::from_real({0.0, 0.0}).is_zero());
  const Polynomial q = from_roots({cplx(-1.0), cplx(-2.0)});
  CHECK(q.coefficient(0) == cplx(2.0));
  CHECK(q.coefficient(1) == cplx(3.0));
  CHECK(q.coefficient(2) == cplx(1.0));
  CHECK(std::abs(q(cplx(1.0)) - cplx(6.0)) < 1e-15);
  const auto taylor = q.taylor_at(cplx(1.0), 3);
  CHECK(std::abs(taylor[0] - cplx(6.0)) < 1e-15);
  CHECK(std::abs(taylor[1] - cplx(5.0)) < 1e-15);
  CHECK(std::abs(taylor[2] - cplx(1.0)) < 1e-15);
  CHECK(q.derivative().degree() == 1);
}

TEST_CASE("poly_roots on small examples") {
  auto roots = poly_roots(Polynomial::from_real({1.0, 0.0, 1.0}));
  REQUIRE(roots.size() == 2);
  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) { return x.imag() < y.imag(); });
  CHECK(std::abs(roots[0] - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(roots[1] - cplx(0, 1)) < 1e-14);

  auto cubic = poly_roots(Polynomial::from_real({6.0, 11.0, 6.0, 1.0}));
  REQUIRE(cubic.size() == 3);
  std::sort(cubic.begin(), cubic.end(), [](cplx x, cplx y) { return x.real() > y.real(); });
  CHECK(std::abs(cubic[0] - cplx(-1.0)) < 1e-13);
  CHECK(std::abs(cubic[1] - cplx(-2.0)) < 1e-13);
  CHECK(std::abs(cubic[2] - cplx(-3.0)) < 1e-13);

  CHECK_THROWS_AS(poly_roots(Polynomial{cplx(3.0)}), xdyn::DomainError);
  CHECK_THROWS_AS(poly_roots(Polynomial()), xdyn::DomainError);

  const auto with_zero = poly_roots(Polynomial::from_real({0.0, 0.0, 1.0, 1.0}));
  CHECK(std::count(with_zero.begin(), with_zero.end(), cplx{}) == 2);
}

TEST_CASE("poly_roots recovers planted roots") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> radius(0.0, 10.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_int_distribution<int> degree(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = degree(rng);
    std::vector<cplx> planted;
    for (int i = 0; i < n; ++i) planted.push_back(std::polar(radius(rng), angle(rng)));
    const Polynomial p = from_roots(planted);
    const auto found = poly_roots(p);
    REQUIRE(found.size() == planted.size());
    for (const auto& r : found) CHECK(root_residual(p, r) < 1e-8);
    CHECK(best_matching_error(found, planted) < 1e-7);
  }
}

TEST_CASE("rational transform contract") {
  CHECK_THROWS_AS(RationalLaplace(Polynomial::from_real({1.0, 1.0}), Polynomial::from_real({1.0})),
                  xdyn::ContractViolation);
  CHECK_THROWS_AS(RationalLaplace(Polynomial::from_real({1.0}), Polynomial()),
                  xdyn::ContractViolation);
  const RationalLaplace impulsive(Polynomial::from_real({1.0, 1.0}), Polynomial::from_real({2.0, 1.0}));
  CHECK_THROWS_AS(partial_fractions(impulsive), xdyn::ContractViolation);
  CHECK_THROWS_AS(initial_value(impulsive), xdyn::ContractViolation);
}

TEST_CASE("partial fractions of standard pairs") {
  const RationalLaplace step_decay(Polynomial::from_real({1.0}), Polynomial::from_real({0.0, 1.0, 1.0}));
  const auto e1 = partial_fractions(step_decay);
  CHECK(eval_exp_sum(e1, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  for (double t : {0.0, 0.3, 1.0, 7.5}) {
    CHECK(eval_exp_sum(e1, t) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-13));
  }

  const RationalLaplace double_pole(Polynomial::from_real({1.0}), Polynomial::from_real({1.0, 2.0, 1.0}));
  const auto e2 = partial_fractions(double_pole);
  for (double t : {0.0, 0.5, 2.0, 10.0}) {
    CHECK(std::abs(eval_exp_sum(e2, t) - t * std::exp(-t)) < 1e-12);
  }

  const double omega = 1.3;
  const RationalLaplace cosine(Polynomial::from_real({0.0, 1.0}),
                               Polynomial::from_real({2.0 * omega * omega, 0.0, 1.0}));
  const auto e3 = partial_fractions(cosine);
  for (double t : {0.0, 0.7, 3.0, 12.0}) {
    const double expected = std::cos(std::sqrt(2.0) * omega * t);
    CHECK(std::abs(eval_exp_sum(e3, t) - expected) < 1e-12);
    if (t > 0.0) CHECK(std::abs(talbot_invert(cosine, t) - expected) < 1e-8);
  }

  const RationalLaplace triple(Polynomial::from_real({1.0}), from_roots({-1.0, -1.0, -1.0, -2.0}));
  const auto e4 = partial_fractions(triple);
  for (double t : {0.1, 1.0, 4.0}) {
    // 1/((s+1)^3 (s+2))
    const double expected =
        std::exp(-t) * (t * t / 2.0 - t + 1.0) - std::exp(-2.0 * t);
    CHECK(std::abs(eval_exp_sum(e4, t) - expected) < 1e-10);
    CHECK(std::abs(talbot_invert(triple, t) - expected) < 1e-9);
  }
}

TEST_CASE("eval_exp_sum behaviour") {
  const RationalLaplace decay(Polynomial::from_real({1.0}), Polynomial::from_real({1.0, 1.0}));
  const auto e = partial_fractions(decay);
  CHECK(eval_exp_sum(e, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(eval_exp_sum(e, 40.0)) <= std::exp(-40.0) * (1.0 + 1e-12));
  CHECK_THROWS_AS(eval_exp_sum(e, -1.0), xdyn::DomainError);

  const RationalLaplace rotating(Polynomial{cplx(1.0)}, Polynomial{cplx(0.0, -1.0), cplx(1.0)});
  CHECK_THROWS_AS(eval_exp_sum(partial_fractions(rotating), 1.0), xdyn::ConjugatePairingError);
  CHECK(std::abs(partial_fractions(rotating)(1.0) - std::exp(cplx(0.0, 1.0))) < 1e-14);
}

TEST_CASE("inversion is linear") {
  const RationalLaplace f(Polynomial::from_real({1.0, 2.0}), from_roots({-0.5, cplx(-1.0, 3.0), cplx(-1.0, -3.0)}));
  const RationalLaplace g(Polynomial::from_real({3.0}), from_roots({-2.0, -0.1}));
  const double alpha = 0.7;
  const double beta = -1.9;
  const auto combined = partial_fractions(alpha * f + beta * g);
  const auto ef = partial_fractions(f);
  const auto eg = partial_fractions(g);
  for (double t = 0.0; t <= 10.0; t += 0.25) {
    const double lhs = eval_exp_sum(combined, t);
    const double rhs = alpha * eval_exp_sum(ef, t) + beta * eval_exp_sum(eg, t);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("real-coefficient transforms invert to real signals") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> roots;
    for (int i = 0; i < 3; ++i) {
      const cplx p(-0.1 - std::abs(u(rng)), 3.0 * u(rng));
      roots.push_back(p);
      roots.push_back(std::conj(p));
    }
    roots.push_back(-std::abs(u(rng)) - 0.05);
    const RationalLaplace f(Polynomial::from_real({u(rng), u(rng), u(rng), u(rng)}), from_roots(roots));
    const auto e = partial_fractions(f);
    for (int k = 0; k < 100; ++k) CHECK(std::abs(e(0.1 * k).imag()) < 1e-10);
  }
}

TEST_CASE("initial and final value theorems") {
  const RationalLaplace step_decay(Polynomial::from_real({1.0}), Polynomial::from_real({0.0, 1.0, 1.0}));
  CHECK(initial_value(step_decay) == cplx(0.0));
  CHECK(std::abs(final_value(step_decay) - cplx(1.0)) < 1e-15);

  const RationalLaplace decay(Polynomial::from_real({2.0}), Polynomial::from_real({1.0, 1.0}));
  CHECK(initial_value(decay) == cplx(2.0));
  CHECK(final_value(decay) == cplx(0.0));

  const RationalLaplace cosine(Polynomial::from_real({0.0, 1.0}), Polynomial::from_real({2.0, 0.0, 1.0}));
  CHECK(initial_value(cosine) == cplx(1.0));
  CHECK_THROWS_AS(final_value(cosine), xdyn::StabilityError);

  const RationalLaplace growing(Polynomial::from_real({1.0}), Polynomial::from_real({-1.0, 1.0}));
  CHECK_THROWS_AS(final_value(growing), xdyn::StabilityError);
  const RationalLaplace ramp(Polynomial::from_real({1.0}), Polynomial::from_real({0.0, 0.0, 1.0}));
  CHECK_THROWS_AS(final_value(ramp), xdyn::StabilityError);

  CHECK(final_value(RationalLaplace::constant(cplx(0.25))) == cplx(0.25));
  CHECK(initial_value(RationalLaplace::constant(cplx(0.25))) == cplx(0.25));
}

TEST_CASE("Talbot inversion") {
  const RationalLaplace decay(Polynomial::from_real({1.0}), Polynomial::from_real({1.0, 1.0}));
  CHECK(std::abs(talbot_invert(decay, 1.0) - std::exp(-1.0)) < 1e-8);
  const RationalLaplace step_decay(Polynomial::from_real({1.0}), Polynomial::from_real({0.0, 1.0, 1.0}));
  CHECK(std::abs(talbot_invert(step_decay, std::log(2.0)) - 0.5) < 1e-8);
  CHECK_THROWS_AS(talbot_invert(decay, 0.0), xdyn::DomainError);
  CHECK_THROWS_AS(talbot_invert(decay, -2.0), xdyn::DomainError);

  // Oscillatory and mildly growing signals need more nodes than the default.
  const RationalLaplace ringing(Polynomial::from_real({1.0}), Polynomial::from_real({5.0, 2.0, 1.0}));
  const RationalLaplace growing(Polynomial::from_real({1.0}), Polynomial::from_real({-0.2, 1.0}));
  for (double t : {0.05, 1.0, 15.0}) {
    CHECK(std::abs(talbot_invert(ringing, t) - std::exp(-t) * std::sin(2.0 * t) / 2.0) < 1e-8);
    CHECK(std::abs(talbot_invert(growing, t) - std::exp(0.2 * t)) < 1e-8 * std::exp(0.2 * t));
  }
  const RationalLaplace fast(Polynomial::from_real({1.0}), Polynomial::from_real({401.0, 2.0, 1.0}));
  CHECK_THROWS_AS(talbot_invert(fast, 20.0), xdyn::DomainError);
}
