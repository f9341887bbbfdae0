#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qlo/complex_projection.hpp"
#include "qlo/exceptions.hpp"
#include "qlo/rng.hpp"

using namespace qlo;

namespace {

Matrix<Complex> random_unit_disc_matrix(int r, Rng& rng) {
  Matrix<Complex> a(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const double rho = std::sqrt(rng.uniform01());
      const double phi = rng.uniform(-M_PI, M_PI);
      a(i, j) = Complex(rho * std::cos(phi), rho * std::sin(phi));
    }
  return a;
}

}  // namespace

TEST_CASE("det_polynomial on 1x1 matrices") {
  Matrix<Complex> ai(1, 1);
  ai(0, 0) = Complex(0, 1);
  auto p = det_polynomial(ai);  // p(z) = i z^2 - i
  REQUIRE(p.size() == 3);
  CHECK(std::abs(p[0] - Complex(0, -1)) < 1e-12);
  CHECK(std::abs(p[1]) < 1e-12);
  CHECK(std::abs(p[2] - Complex(0, 1)) < 1e-12);
  CHECK(std::abs(p[0]) == doctest::Approx(1.0));  // |p(0)| = |det A|

  Matrix<Complex> real1(1, 1);
  real1(0, 0) = Complex(0.7, 0);
  auto pr = det_polynomial(real1);  // a (z^2 + 1)
  CHECK(std::abs(pr[0] - Complex(0.7, 0)) < 1e-12);
  CHECK(std::abs(pr[2] - Complex(0.7, 0)) < 1e-12);
}

TEST_CASE("phase identity e^{-ir theta} p(e^{i theta}) / 2^r = det Re(e^{i theta}A)") {
  Rng rng(606);
  for (int r : {1, 2, 3}) {
    auto a = random_unit_disc_matrix(r, rng);
    auto p = det_polynomial(a);
    for (int t = 0; t < 50; ++t) {
      const double theta = rng.uniform(-M_PI, M_PI);
      const Complex z(std::cos(theta), std::sin(theta));
      const Complex rot(std::cos(-r * theta), std::sin(-r * theta));
      const Complex lhs = rot * eval_polynomial(p, z) / std::pow(2.0, r);
      const double rhs = phase_det(a, theta);
      CHECK(std::abs(lhs - Complex(rhs, 0)) < 1e-9);
    }
  }
}

TEST_CASE("phase_det spot values") {
  Matrix<Complex> ai(1, 1);
  ai(0, 0) = Complex(0, 1);
  CHECK(phase_det(ai, M_PI / 2) == doctest::Approx(-1.0));
  CHECK(phase_det(ai, 0.0) == doctest::Approx(0.0));

  auto i2 = Matrix<Complex>::identity(2);
  CHECK(phase_det(i2, M_PI / 3) == doctest::Approx(0.25));  // cos^2 theta
  for (double th : {0.1, 0.9, 2.2})
    CHECK(phase_det(i2, th) == doctest::Approx(std::cos(th) * std::cos(th)));
}

TEST_CASE("expected_abs_det closed forms and bound") {
  Matrix<Complex> ai(1, 1);
  ai(0, 0) = Complex(0, 1);
  auto e = expected_abs_det(ai);  // E|sin| = 2/pi
  CHECK(e.mean == doctest::Approx(2.0 / M_PI).epsilon(1e-8));
  CHECK(e.lower_bound == doctest::Approx(0.5));
  CHECK_FALSE(e.bound_violated);

  auto i2 = expected_abs_det(Matrix<Complex>::identity(2));  // E cos^2 = 1/2
  CHECK(i2.mean == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(i2.lower_bound == doctest::Approx(0.25));
  CHECK_FALSE(i2.bound_violated);

  Matrix<Complex> sing(2, 2, Complex(1, 0));
  auto es = expected_abs_det(sing);
  CHECK(es.lower_bound == doctest::Approx(0.0));
  CHECK_FALSE(es.bound_violated);
}

TEST_CASE("expected_abs_det bound on random matrices") {
  Rng rng(19);
  for (int trial = 0; trial < 60; ++trial) {
    const int r = 1 + trial % 3;
    auto a = random_unit_disc_matrix(r, rng);
    auto e = expected_abs_det(a);
    CHECK_FALSE(e.bound_violated);
    CHECK(e.mean + e.quad_error >= e.lower_bound);
  }
}

TEST_CASE("success_probability") {
  Matrix<Complex> ai(1, 1);
  ai(0, 0) = Complex(0, 1);
  auto s = success_probability(ai, 0.5);  // |sin theta| >= 1/2 on 2/3 of the circle
  CHECK(s.fraction == doctest::Approx(2.0 / 3.0).epsilon(1e-4));

  auto all = success_probability(ai, 0.0);
  CHECK(all.fraction == doctest::Approx(1.0));

  // Markov-style floor: Pr(|det| >= c) >= (E|det| - c) / (r! - c)
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_unit_disc_matrix(2, rng);
    if (std::abs(determinant(a)) < 0.5) continue;
    auto e = expected_abs_det(a);
    const double c = e.lower_bound / 2.0;
    auto sp = success_probability(a, c, 20000);
    const double floor = (e.mean - e.quad_error - c) / (2.0 - c);
    CHECK(sp.fraction + 1e-3 >= floor);
  }
}

TEST_CASE("rank cap enforced") {
  Matrix<Complex> big(9, 9, Complex(0.1, 0));
  CHECK_THROWS_AS(det_polynomial(big), CapExceededError);
  CHECK_THROWS_AS(phase_det(big, 0.3), CapExceededError);
}
