#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlo/poly.hpp"

using namespace qlo;

namespace {

QuadraticPoly<Rational> rat_poly(int n) { return QuadraticPoly<Rational>(n); }

// brute-force census by direct evaluation; the oracle the kernel is checked
// against
PointMass<Rational> census_oracle(const QuadraticPoly<Rational>& f) {
  PointMass<Rational> d;
  d.mode = PointMass<Rational>::Mode::Exact;
  d.n = f.n;
  std::vector<int> signs(f.n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.n); ++mask) {
    for (int i = 0; i < f.n; ++i) signs[i] = (mask >> i) & 1 ? -1 : 1;
    d.add(f.evaluate(signs));
  }
  return d;
}

QuadraticPoly<Rational> random_dyadic_poly(int n, Rng& rng) {
  auto f = rat_poly(n);
  for (auto& c : f.deg2) c = make_rational(rng.range(-4, 4), 4);
  for (auto& c : f.lin) c = make_rational(rng.range(-4, 4), 4);
  f.constant = make_rational(rng.range(-4, 4), 4);
  return f;
}

QuadraticPoly<Rational> sum_square_poly(int n) {
  // (x_1 + ... + x_n)^2
  auto f = rat_poly(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) f.coeff2(i, j) = Rational(i == j ? 1 : 2);
  return f;
}

QuadraticPoly<Rational> pairs_poly(int n) {
  // sum_{i<j} x_i x_j
  auto f = rat_poly(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) f.coeff2(i, j) = Rational(1);
  return f;
}

std::uint64_t binom(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("evaluate on hand-checked inputs") {
  auto f = rat_poly(2);
  f.coeff2(0, 1) = Rational(1);
  CHECK(f.evaluate({1, -1}) == Rational(-1));

  auto g = sum_square_poly(2);
  CHECK(g.evaluate({1, -1}) == Rational(0));
  CHECK(g.evaluate({1, 1}) == Rational(4));

  // f = x1 x2 + x1 over all four sign vectors
  auto h = rat_poly(2);
  h.coeff2(0, 1) = Rational(1);
  h.lin[0] = Rational(1);
  CHECK(h.evaluate({-1, 1}) == Rational(-2));
  CHECK(h.evaluate({1, 1}) == Rational(2));
  CHECK(h.evaluate({1, -1}) == Rational(0));
  CHECK(h.evaluate({-1, -1}) == Rational(0));

  CHECK_THROWS_AS(f.evaluate({1, 1, 1}), DimensionError);
}

TEST_CASE("exact_distribution small cases") {
  auto f = rat_poly(2);
  f.coeff2(0, 1) = Rational(1);
  auto d = exact_distribution(f);
  CHECK(d.total == 4);
  CHECK(d.weights.at(Rational(1)) == 2);
  CHECK(d.weights.at(Rational(-1)) == 2);

  auto d2 = exact_distribution(sum_square_poly(2));
  CHECK(d2.weights.at(Rational(0)) == 2);
  CHECK(d2.weights.at(Rational(4)) == 2);

  auto d3 = exact_distribution(pairs_poly(4));
  CHECK(d3.total == 16);
  CHECK(d3.weights.at(Rational(-2)) == 6);
  CHECK(d3.weights.at(Rational(0)) == 8);
  CHECK(d3.weights.at(Rational(6)) == 2);
  CHECK(d3.weights.size() == 3);
}

TEST_CASE("exact_distribution matches direct-evaluation census") {
  Rng rng(20240601);
  for (int trial = 0; trial < 12; ++trial) {
    int n = rng.range(1, 12);
    auto f = random_dyadic_poly(n, rng);
    auto fast = exact_distribution(f);
    auto slow = census_oracle(f);
    REQUIRE(fast.total == slow.total);
    CHECK(fast.weights == slow.weights);
  }
}

TEST_CASE("parallel enumeration equals serial") {
  Rng rng(7);
  auto f = random_dyadic_poly(15, rng);
  auto serial = exact_distribution(f, {.cap = 28, .workers = 1});
  for (int workers : {2, 3, 8}) {
    auto par = exact_distribution(f, {.cap = 28, .workers = workers});
    CHECK(par.weights == serial.weights);
    CHECK(par.total == serial.total);
  }
}

TEST_CASE("enumeration cap is enforced") {
  auto f = rat_poly(9);
  CHECK_THROWS_AS(exact_distribution(f, {.cap = 8, .workers = 1}), CapExceededError);
}

TEST_CASE("max_point_probability with canonical tie-break") {
  auto d2 = exact_distribution(sum_square_poly(2));
  auto top = max_point_probability(d2);
  CHECK(top.value == Rational(0));  // tie {0,4} -> smaller value
  CHECK(top.probability == make_rational(1, 2));

  // census: values +-2 of the sum both land on 4, so the argmax is 4, not 0
  auto d10 = exact_distribution(sum_square_poly(10));
  auto top10 = max_point_probability(d10);
  CHECK(top10.value == Rational(4));
  CHECK(top10.probability == make_rational(105, 256));
  CHECK(d10.weights.at(Rational(0)) == 252);  // Pr(f=0) = C(10,5)/2^10 = 63/256

  auto constant = rat_poly(3);
  constant.constant = Rational(7);
  auto dc = monte_carlo_distribution(constant, 1000, 1);
  auto topc = max_point_probability(dc);
  CHECK(topc.value == Rational(7));
  CHECK(topc.probability == Rational(1));
}

TEST_CASE("extremal square-of-sum census for even n") {
  // Pr(f=0) = C(n,n/2)/2^n always; for n >= 4 the max sits at value 4 with
  // probability 2*C(n,n/2-1)/2^n (checked against the census oracle)
  for (int n : {2, 4, 6, 8, 10, 12}) {
    auto d = exact_distribution(sum_square_poly(n));
    CHECK(d.weights.at(Rational(0)) == binom(n, n / 2));
    auto top = max_point_probability(d);
    if (n == 2) {
      CHECK(top.value == Rational(0));  // tie with 4, smaller value wins
      CHECK(top.probability == make_rational(1, 2));
    } else {
      CHECK(top.value == Rational(4));
      Rational expect(BigInt(static_cast<unsigned long>(2 * binom(n, n / 2 - 1))),
                      BigInt(1) << n);
      expect.canonicalize();
      CHECK(top.probability == expect);
    }
  }
}

TEST_CASE("small_ball_probability") {
  auto d = exact_distribution(sum_square_poly(2));
  CHECK(small_ball_probability(d, Rational(0), Rational(0)) == make_rational(1, 2));
  CHECK(small_ball_probability(d, Rational(2), Rational(2)) == Rational(1));

  auto d4 = exact_distribution(pairs_poly(4));
  CHECK(small_ball_probability(d4, Rational(0), Rational(2)) == make_rational(14, 16));

  CHECK_THROWS_AS(small_ball_probability(d, Rational(0), Rational(-1)), DimensionError);
}

TEST_CASE("monte carlo distribution") {
  auto f = rat_poly(2);
  f.coeff2(0, 1) = Rational(1);
  auto d = monte_carlo_distribution(f, 100000, 42);
  CHECK(d.total == 100000);
  double p1 = static_cast<double>(d.weights.at(Rational(1))) / 100000.0;
  CHECK(p1 == doctest::Approx(0.5).epsilon(0.02));

  auto constant = rat_poly(5);
  constant.constant = Rational(7);
  auto dc = monte_carlo_distribution(constant, 5000, 3);
  CHECK(dc.weights.size() == 1);
  CHECK(dc.weights.at(Rational(7)) == 5000);

  // against the exact census
  auto d4 = monte_carlo_distribution(pairs_poly(4), 100000, 11);
  double p0 = static_cast<double>(d4.weights.at(Rational(0))) / 100000.0;
  CHECK(p0 == doctest::Approx(0.5).epsilon(0.02));

  // reproducible from seed
  auto again = monte_carlo_distribution(pairs_poly(4), 1000, 11);
  auto again2 = monte_carlo_distribution(pairs_poly(4), 1000, 11);
  CHECK(again.weights == again2.weights);
}

TEST_CASE("weights always sum to the advertised total") {
  Rng rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    auto f = random_dyadic_poly(rng.range(1, 10), rng);
    auto d = exact_distribution(f);
    std::uint64_t s = 0;
    for (auto& [v, c] : d.weights) s += c;
    CHECK(s == d.total);
    CHECK(d.total == (std::uint64_t{1} << f.n));

    auto m = monte_carlo_distribution(f, 777, 5);
    std::uint64_t sm = 0;
    for (auto& [v, c] : m.weights) sm += c;
    CHECK(sm == 777);
  }
}

TEST_CASE("arbitrary-precision fallback path") {
  // huge coefficients force the wide-integer kernel
  auto f = rat_poly(6);
  BigInt big;
  mpz_ui_pow_ui(big.get_mpz_t(), 10, 25);
  f.coeff2(0, 1) = Rational(big);
  f.coeff2(2, 3) = make_rational(1, 3);
  f.lin[4] = make_rational(2, 7);
  auto fast = exact_distribution(f);
  auto slow = census_oracle(f);
  CHECK(fast.weights == slow.weights);
}
