#include "doctest.h"

#include "oracle.hpp"
#include "xdyn/errors.hpp"
#include "xdyn/measures/measures.hpp"

#include <cmath>
#include <random>

using namespace xdyn;
using namespace xdyn::measures;

namespace {

constexpr double kLn4 = 1.3862943611198906;

double qubit_entropy(double p) {
  double s = 0.0;
  for (double v : {p, 1.0 - p})
    if (v > 0.0) s -= v * std::log(v);
  return s;
}

}  // namespace

TEST_CASE("concurrence_x examples") {
  CHECK(concurrence_x(construct_initial(Werner{1.0})) == doctest::Approx(1.0));

  XState s;
  s.a = s.d = 0.3;
  s.b = s.c = 0.2;
  s.w = 0.25;
  CHECK(concurrence_x(s) == doctest::Approx(0.1).epsilon(1e-14));

  for (double r : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
    const double expected = std::max(0.0, (3.0 * r - 1.0) / 2.0);
    CHECK(concurrence_x(construct_initial(EwlPhi{r, 0.5, kPi})) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(concurrence_x(construct_initial(EwlPsi{r, 0.5, 0.0})) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(concurrence_x(construct_initial(EwlPhi{1.0 / 3.0, 0.5, kPi})) < 1e-15);
}

TEST_CASE("concurrence_wootters examples") {
  DensityMatrix4 product;
  product.m(0, 0) = 1.0;
  CHECK(concurrence_wootters(product) == 0.0);

  const DensityMatrix4 bell = construct_initial_dense(BellPhi{0.5, 0.0});
  CHECK(concurrence_wootters(bell) == doctest::Approx(1.0).epsilon(1e-12));

  DensityMatrix4 bad;
  bad.m(0, 0) = 1.2;
  bad.m(1, 1) = -0.2;
  CHECK_THROWS_AS(concurrence_wootters(bad), DomainError);

  for (const auto& rho : oracle::gen_states({7, oracle::StateFamily::general_x}, 10000)) {
    const double cw = concurrence_wootters(rho);
    const double cx = concurrence_x(extract_x(rho));
    REQUIRE(std::abs(cw - cx) < 1e-9);
  }
}

TEST_CASE("dense wootters agrees with the brute-force oracle") {
  for (auto family : {oracle::StateFamily::physical_dense, oracle::StateFamily::single_excitation}) {
    for (const auto& rho : oracle::gen_states({13, family}, 500)) {
      CHECK(std::abs(concurrence_wootters(rho) - oracle::wootters_bruteforce(rho)) < 1e-7);
    }
  }
}

TEST_CASE("single-excitation concurrence") {
  XState s;
  s.b = s.c = 0.5;
  s.z = 0.5;
  CHECK(concurrence_single_excitation(s) == doctest::Approx(1.0));
  s.z = 0.0;
  CHECK(concurrence_single_excitation(s) == 0.0);

  XState t;
  t.a = 0.2;
  t.b = 0.5;
  t.c = 0.3;
  t.z = cplx(0.2, 0.1);
  CHECK(concurrence_single_excitation(t) == doctest::Approx(0.4472136).epsilon(1e-7));
  CHECK(concurrence_single_excitation(t) == doctest::Approx(concurrence_x(t)));

  XState bad_d = t;
  bad_d.d = 0.01;
  bad_d.a -= 0.01;
  try {
    concurrence_single_excitation(bad_d);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.field() == "d");
  }
  XState bad_w = t;
  bad_w.w = 0.01;
  try {
    concurrence_single_excitation(bad_w);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.field() == "w");
  }
}

TEST_CASE("entropy examples") {
  CHECK(entropy(construct_initial(Werner{1.0})) < 1e-10);
  CHECK(entropy(construct_initial(BellPsi{0.3, 1.0})) < 1e-10);
  CHECK(entropy(construct_initial(Werner{0.0})) == doctest::Approx(kLn4).epsilon(1e-14));
  CHECK(entropy(construct_initial(Werner{0.5})) == doctest::Approx(1.0735428464).epsilon(1e-10));
  CHECK(entropy(to_dense(construct_initial(Werner{0.5}))) == doctest::Approx(1.0735428464).epsilon(1e-10));

  XState neg;
  neg.a = 1.1;
  neg.d = -0.1;
  CHECK_THROWS_AS(entropy(neg), DomainError);

  for (const auto& rho : oracle::gen_states({3, oracle::StateFamily::physical_dense}, 1))
    CHECK(std::abs(entropy(rho)) <= kLn4);
}

TEST_CASE("entropy matches the Jacobi oracle") {
  for (const auto& rho : oracle::gen_states({21, oracle::StateFamily::general_x}, 2000)) {
    double s = 0.0;
    for (double v : oracle::eig_hermitian4(rho))
      if (v > 0.0) s -= v * std::log(v);
    CHECK(std::abs(entropy(extract_x(rho)) - s) < 1e-10);
    CHECK(std::abs(entropy(rho) - s) < 1e-10);
  }
}

TEST_CASE("entropy closed forms") {
  XState psi;
  psi.a = 0.9;
  psi.d = 0.1;
  psi.w = 0.3;
  // (a - d)^2 + 4|w|^2 = 1 makes this outer block pure.
  CHECK(std::abs(entropy_closed_form(psi, BellFamily::psi)) < 1e-12);
  CHECK(std::abs(entropy(psi)) < 1e-12);

  // f = 0.9 gives outer eigenvalues {0.95, 0.05}.
  XState psi2 = psi;
  psi2.w = std::sqrt((0.81 - 0.64) / 4.0);
  CHECK(entropy_closed_form(psi2, BellFamily::psi) == doctest::Approx(0.1985152).epsilon(1e-7));
  CHECK(std::abs(entropy_closed_form(psi2, BellFamily::psi) - entropy(psi2)) < 1e-10);

  CHECK(entropy_closed_form(construct_initial(Werner{1.0}), BellFamily::phi) < 1e-12);

  // Psi family with a populated radiant level: b = c = z = q/2.
  XState mixed;
  mixed.a = 0.3;
  mixed.d = 0.2;
  mixed.w = cplx(0.1, 0.05);
  mixed.b = mixed.c = 0.25;
  mixed.z = 0.25;
  CHECK(std::abs(entropy_closed_form(mixed, BellFamily::psi) - entropy(mixed)) < 1e-10);

  // Phi family: d = w = 0, generic middle block.
  XState phi;
  phi.a = 0.3;
  phi.b = 0.45;
  phi.c = 0.25;
  phi.z = cplx(-0.2, 0.1);
  CHECK(std::abs(entropy_closed_form(phi, BellFamily::phi) - entropy(phi)) < 1e-10);

  CHECK_THROWS_AS(entropy_closed_form(phi, BellFamily::psi), DomainError);
  CHECK_THROWS_AS(entropy_closed_form(psi, BellFamily::phi), DomainError);
}

TEST_CASE("entropy additivity for product states") {
  for (double p : {0.0, 0.1, 0.5, 0.75, 1.0}) {
    const XState s = construct_initial(FactorizedMixed{p});
    CHECK(std::abs(entropy(s) - 2.0 * qubit_entropy(p)) < 1e-10);
  }
}

TEST_CASE("concurrence ignores coherence phases") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (const auto& rho : oracle::gen_states({17, oracle::StateFamily::general_x}, 500)) {
    XState s = extract_x(rho);
    const double c = concurrence_x(s);
    s.w *= std::polar(1.0, phase(rng));
    s.z *= std::polar(1.0, phase(rng));
    CHECK(std::abs(concurrence_x(s) - c) < 1e-14);
    CHECK(std::abs(concurrence_wootters(to_dense(s)) - c) < 1e-9);
  }
}

TEST_CASE("outputs stay in range under small noise") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> noise(-3e-9, 3e-9);
  const std::vector<XState> edges = {construct_initial(Werner{1.0}), construct_initial(Werner{0.0}),
                                     construct_initial(FactorizedMixed{1.0}),
                                     construct_initial(EwlPhi{1.0 / 3.0, 0.5, kPi})};
  for (int i = 0; i < 200; ++i) {
    for (XState s : edges) {
      s.a += noise(rng);
      s.d += noise(rng);
      s.b += noise(rng);
      s.c += noise(rng);
      s.w += cplx(noise(rng), noise(rng));
      s.z += cplx(noise(rng), noise(rng));
      const double c = concurrence_x(s);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      const double e = entropy(s);
      CHECK(e >= 0.0);
      CHECK(e <= kLn4);
      const MeasureSample m = measure(s);
      CHECK(m.concurrence == c);
      CHECK(m.entropy == e);
    }
  }
}
