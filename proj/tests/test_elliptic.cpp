#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "solgeom/elliptic.hpp"
#include "solgeom/errors.hpp"

using namespace solgeom;

TEST_CASE("agm") {
  CHECK(agm(1.0, 1.0) == 1.0);
  for (double s : {0.25, 3.0, 1e5}) {
    CHECK(std::abs(agm(s * 0.7, s * 1.9) - s * agm(0.7, 1.9)) < 1e-14 * s);
  }
  CHECK(agm(2.0, 0.5) == doctest::Approx(agm(0.5, 2.0)).epsilon(1e-15));
  const double k = 0.5;
  CHECK(std::abs(std::numbers::pi / (2 * agm(1.0, std::sqrt(1 - k * k))) - oracle::K(k)) < 1e-12);
  CHECK_THROWS_AS(agm(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(agm(1.0, -1.0), DomainError);
}

TEST_CASE("complete elliptic integrals against quadrature") {
  const EllipticPair zero = complete_elliptic(0.0);
  CHECK(zero.K == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(zero.E == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));

  for (int i = 1; i <= 99; ++i) {
    const double k = i / 100.0;
    const EllipticPair p = complete_elliptic(k);
    CHECK(std::abs(p.K - oracle::K(k)) < 1e-12);
    CHECK(std::abs(p.E - oracle::E(k)) < 1e-12);
    CHECK(p.E < std::numbers::pi / 2);
    CHECK(p.K > std::numbers::pi / 2);
    CHECK(p.E > (1 - k * k) * p.K);
  }

  // the two quadrature forms agree with each other and with the AGM path
  const EllipticPair half = complete_elliptic(0.5);
  CHECK(std::abs(oracle::K_algebraic(0.5) - oracle::K(0.5)) < 1e-12);
  CHECK(std::abs(oracle::E_algebraic(0.5) - oracle::E(0.5)) < 1e-12);
  CHECK(std::abs(half.K - oracle::K_algebraic(0.5)) < 1e-12);
  CHECK(std::abs(half.E - oracle::E_algebraic(0.5)) < 1e-12);

  CHECK(std::abs(complete_elliptic(0.999999).E - 1.0) < 1e-4);
  CHECK_THROWS_AS(complete_elliptic(1.0), DomainError);
  CHECK_THROWS_AS(complete_elliptic(-0.1), DomainError);
}

TEST_CASE("differences are computed without cancellation") {
  for (double k : {1e-6, 1e-4, 1e-2, 0.3}) {
    const EllipticParts p = elliptic_parts(k);
    // K - E ~ pi k^2 / 4 and E - (1-k^2) K ~ pi k^2 / 4 for small k
    const double lead = std::numbers::pi * k * k / 4;
    CHECK(std::abs(p.k_minus_e / lead - 1.0) < k * k + 1e-14);
    CHECK(std::abs(p.e_minus_ck / lead - 1.0) < k * k + 1e-14);
  }
}

TEST_CASE("logarithmic asymptotics of K") {
  for (double k : {0.99, 0.999, 1 - 1e-6, 1 - 1e-9, 1 - 1e-12}) {
    const double K = complete_elliptic(k).K;
    const double kc2 = (1 - k) * (1 + k);
    CHECK(std::abs(K - 0.5 * std::abs(std::log(kc2))) <= 2.0);
  }
}

TEST_CASE("derivatives") {
  const double k = 0.5;
  const double h = 1e-6;
  const EllipticDerivatives d = elliptic_derivatives(k);
  const EllipticPair p = complete_elliptic(k + h), m = complete_elliptic(k - h);
  CHECK(std::abs((p.K - m.K) / (2 * h) / d.dK - 1) < 1e-6);
  CHECK(std::abs((p.E - m.E) / (2 * h) / d.dE - 1) < 1e-6);
  for (int i = 1; i < 100; ++i) {
    const EllipticDerivatives di = elliptic_derivatives(i / 100.0);
    CHECK(di.dK > 0);
    CHECK(di.dE < 0);
  }
  CHECK_THROWS_AS(elliptic_derivatives(0.0), DomainError);
  CHECK_THROWS_AS(elliptic_derivatives(1.0), DomainError);
}

TEST_CASE("auxiliary integral") {
  CHECK(aux_integral(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  for (double k : {0.3, 0.9}) {
    CHECK(std::abs(aux_integral(k) - oracle::aux(k)) < 1e-9);
  }
  CHECK_THROWS_AS(aux_integral(1.0), DomainError);
}
