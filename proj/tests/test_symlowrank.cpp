#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlo/planted.hpp"
#include "qlo/symlowrank.hpp"

using namespace qlo;

namespace {

Matrix<Rational> rank1_matrix(int n, Rng& rng) {
  std::vector<int> u(n);
  for (auto& x : u) x = rng.coin() ? 1 : -1;
  Matrix<Rational> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Rational(u[i] * u[j]);
  return a;
}

}  // namespace

TEST_CASE("coefficient_set_closure worked examples") {
  {
    auto c = coefficient_set_closure({Rational(0), Rational(1)}, 1);
    CHECK(c.s_prime == std::vector<Rational>{Rational(0), Rational(1)});
    CHECK(c.tau.empty());  // no q < r
  }
  {
    auto c = coefficient_set_closure({Rational(0), Rational(1)}, 2);
    CHECK(c.sigma == std::vector<Rational>{Rational(0), Rational(1)});
    CHECK(c.s_prime == std::vector<Rational>{Rational(0), Rational(1)});
  }
  {
    auto c = coefficient_set_closure(
        {Rational(0), make_rational(1, 2), Rational(1)}, 2);
    std::vector<Rational> expect{Rational(0), make_rational(1, 4), make_rational(1, 2),
                                 Rational(1), Rational(2)};
    REQUIRE(c.tau.size() == 1);
    CHECK(c.tau[0] == expect);
    CHECK(c.sigma == expect);
    // closure chain: S subset of sigma subset of S'
    for (const auto& x : c.base) CHECK(c.sigma_contains(x));
    for (const auto& x : c.sigma) CHECK(c.s_prime_contains(x));
  }
  // 0 is inserted even when missing
  auto c0 = coefficient_set_closure({Rational(1)}, 2);
  CHECK(c0.base.front() == Rational(0));
  // blow-up guard
  std::vector<Rational> big;
  for (int i = 0; i <= 40; ++i) big.push_back(make_rational(i, 40));
  CHECK_THROWS_AS(coefficient_set_closure(big, 4, 1000), CapExceededError);
}

TEST_CASE("disjoint tuple sweep on hand-checked matrices") {
  Matrix<Rational> zero(6, 6, Rational(0));
  auto none = disjoint_independent_tuples(zero, 2, make_rational(2, 5), 100000);
  CHECK(none.tuples.empty());

  // identity: pairs of unit rows certify only when eps*n < 1
  auto eye = Matrix<Rational>::identity(8);
  auto small_eps = disjoint_independent_tuples(eye, 2, make_rational(1, 10), 100000);
  CHECK(small_eps.tuples.size() == 4);  // matches the exhaustive oracle below
  auto big_eps = disjoint_independent_tuples(eye, 2, make_rational(2, 5), 100000);
  CHECK(big_eps.tuples.empty());  // zeroing one row costs 1 <= 0.4*8

  // exhaustive oracle: count maximal greedy-disjoint certified pairs directly
  {
    std::vector<char> used(8, 0);
    int count = 0;
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) {
        if (used[i] || used[j]) continue;
        VectorList<Rational> pair({eye.row(i), eye.row(j)});
        auto v = check_eps_independence(pair, make_rational(1, 10));
        if (v.kind == IndependenceVerdict<Rational>::Kind::CertifiedIndependent) {
          used[i] = used[j] = 1;
          ++count;
        }
      }
    CHECK(count == 4);
  }

  Matrix<Rational> ones(6, 6, Rational(1));
  auto equal_rows = disjoint_independent_tuples(ones, 2, make_rational(3, 10), 100000);
  CHECK(equal_rows.tuples.empty());  // equal rows are 0-dependent
}

TEST_CASE("build_A_star zeroes exactly the tuple rows") {
  Rng rng(3);
  auto a = rank1_matrix(8, rng);
  TupleCollection<Rational> none;
  none.r = 2;
  auto st = build_A_star(a, none);
  CHECK(st.A_star == a);
  CHECK(st.J1.empty());
  CHECK(st.distance == Rational(0));

  // degenerate policy: at a tiny alpha every unit row of I_8 certifies, the
  // hypothesis fails and the collection itself is the certificate
  auto eye = Matrix<Rational>::identity(8);
  auto all = disjoint_independent_tuples(eye, 1, make_rational(1, 16), 100000);
  CHECK(all.tuples.size() == 8);
  auto zeroed = build_A_star(eye, all);
  CHECK(zeroed.A_star == Matrix<Rational>(8, 8, Rational(0)));
  CHECK(zeroed.distance == Rational(8));  // 2|J|n would allow 128; actual is 8

  PipelineParams<Rational> p = desk_scale_params(1);
  p.r = 1;
  p.tuple_alpha = make_rational(1, 16);
  p.basis_levels = {make_rational(1, 16)};
  auto res = symmetric_low_rank_approx(eye, p);
  CHECK_FALSE(res.success);
  CHECK(res.failure_stage == "hypothesis");
  CHECK(res.trace.tuples.tuples.size() == 8);
}

TEST_CASE("zero_bad_columns worked examples") {
  Rng rng(5);
  auto a = rank1_matrix(6, rng);
  std::vector<std::vector<Rational>> w{a.row(0)};
  auto same = zero_bad_columns(a, a, w, make_rational(1, 5), make_rational(1, 4));
  CHECK(same.J2.empty());
  CHECK(same.A_prime == a);
  CHECK(same.B_prime == a);
  CHECK(same.w_prime_recertified);

  // one column differing by exactly cut*n lands in J2 (the >= rule)
  auto b = a;
  const Rational cut = make_rational(1, 5);
  Rational colmass = cut * Rational(6);  // 6/5
  b(0, 1) += make_rational(3, 5);
  b(1, 1) += make_rational(3, 5);
  auto st = zero_bad_columns(a, b, w, cut, make_rational(1, 4));
  CHECK(st.J2 == std::vector<int>{1});
  for (int i = 0; i < 6; ++i) {
    CHECK(FieldTraits<Rational>::is_zero(st.A_prime(i, 1)));
    CHECK(FieldTraits<Rational>::is_zero(st.A_prime(1, i)));
  }
  CHECK(FieldTraits<Rational>::is_zero(st.w_prime[0][1]));
  (void)colmass;
}

TEST_CASE("select_index_set") {
  // q = 0: the empty-matrix convention
  Matrix<Rational> a(4, 4, Rational(0));
  auto st0 = select_index_set(a, a, {}, make_rational(1, 4), make_rational(1, 2));
  CHECK(st0.found);
  CHECK(st0.I.empty());
  CHECK(st0.det == Rational(1));

  // B' = A', basis e1: any column with entry 1 works, det 1
  Matrix<Rational> eye4 = Matrix<Rational>::identity(4);
  std::vector<std::vector<Rational>> w{eye4.row(0)};
  auto st = select_index_set(eye4, eye4, w, make_rational(1, 4), make_rational(1, 2));
  REQUIRE(st.found);
  CHECK(st.I == std::vector<int>{0});
  CHECK(rat_abs(st.det) == Rational(1));

  // an all-discrepant matrix admits no index set for q >= 2
  Matrix<Rational> zero(4, 4, Rational(0));
  Matrix<Rational> far(4, 4, Rational(1));
  std::vector<std::vector<Rational>> w2{{Rational(1), Rational(0), Rational(0), Rational(0)},
                                        {Rational(0), Rational(1), Rational(0), Rational(0)}};
  auto bad = select_index_set(zero, far, w2, make_rational(1, 2), make_rational(1, 2));
  CHECK_FALSE(bad.found);
  CHECK(bad.best_partial.size() <= 2);
}

TEST_CASE("full pipeline on clean low-rank inputs") {
  Rng rng(7);
  auto a = rank1_matrix(12, rng);
  auto res = symmetric_low_rank_approx(a, desk_scale_params(1));
  REQUIRE(res.success);
  CHECK(res.q == 1);
  CHECK(res.distance == Rational(0));
  CHECK(res.H == a);
  CHECK(rank(res.H) == 1);
  std::string why;
  CHECK_MESSAGE(verify_trace(res.trace, &why), why);

  // all-ones matrix stays itself
  Matrix<Rational> ones(10, 10, Rational(1));
  auto res1 = symmetric_low_rank_approx(ones, desk_scale_params(1));
  REQUIRE(res1.success);
  CHECK(res1.distance == Rational(0));
  CHECK(res1.H == ones);

  // zero matrix: q = 0, H = 0
  Matrix<Rational> zero(9, 9, Rational(0));
  auto res0 = symmetric_low_rank_approx(zero, desk_scale_params(1));
  REQUIRE(res0.success);
  CHECK(res0.q == 0);
  CHECK(res0.distance == Rational(0));
  std::string why0;
  CHECK_MESSAGE(verify_trace(res0.trace, &why0), why0);
}

TEST_CASE("formula-parameter wrapper runs on clean instances") {
  Rng rng(21);
  auto a = rank1_matrix(14, rng);
  auto res = symmetric_close_approx(a, 2, 0.01);
  REQUIRE(res.success);
  CHECK(res.distance == Rational(0));
}

TEST_CASE("planted rank-1 recovery within 10x the corruption mass") {
  for (std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
    auto inst = planted_low_rank(40, 1, 0.02, seed);
    auto res = symmetric_low_rank_approx(inst.A, desk_scale_params(1));
    REQUIRE(res.success);
    CHECK(res.q == 1);
    CHECK(rank(res.H) <= 1);
    CHECK(res.H.is_symmetric());
    CHECK(res.distance <= Rational(10) * inst.corruption_mass);
    std::string why;
    CHECK_MESSAGE(verify_trace(res.trace, &why), why);
  }
}

TEST_CASE("planted rank-2 recovery within 10x the corruption mass") {
  for (std::uint64_t seed : {5ULL, 6ULL}) {
    auto inst = planted_low_rank(30, 2, 0.02, seed);
    auto res = symmetric_low_rank_approx(inst.A, desk_scale_params(2));
    REQUIRE(res.success);
    CHECK(res.q == 2);
    CHECK(rank(res.H) <= 2);
    CHECK(res.H.is_symmetric());
    CHECK(res.distance <= Rational(10) * inst.corruption_mass);
    std::string why;
    CHECK_MESSAGE(verify_trace(res.trace, &why), why);
  }
}

TEST_CASE("set mode: entries certified inside the closure") {
  auto closure = coefficient_set_closure({Rational(-1), Rational(0), Rational(1)}, 2);
  CHECK(closure.s_prime == std::vector<Rational>{Rational(-1), Rational(0), Rational(1)});
  auto inst = planted_low_rank(24, 1, 0.02, 99);
  auto res = symmetric_low_rank_approx(inst.A, desk_scale_params(1), &closure);
  REQUIRE(res.success);
  CHECK(res.set_mode_ok);
  for (int i = 0; i < res.H.rows(); ++i)
    for (int j = 0; j < res.H.cols(); ++j)
      CHECK(closure.s_prime_contains(res.H(i, j)));
  std::string why;
  CHECK_MESSAGE(verify_trace(res.trace, &why), why);
}

TEST_CASE("verify_trace rejects tampering") {
  Rng rng(17);
  auto a = rank1_matrix(10, rng);
  auto res = symmetric_low_rank_approx(a, desk_scale_params(1));
  REQUIRE(res.success);
  auto bent = res.trace;
  bent.H(0, 1) += make_rational(1, 7);
  bent.H(1, 0) += make_rational(1, 7);  // keep it symmetric, break the span/values
  CHECK_FALSE(verify_trace(bent));

  auto bent2 = res.trace;
  bent2.distance += Rational(1);
  CHECK_FALSE(verify_trace(bent2));

  auto bent3 = res.trace;
  if (!bent3.J2.empty()) bent3.J2.clear();
  bent3.J2.push_back(0);
  CHECK_FALSE(verify_trace(bent3));
}

TEST_CASE("pipeline preconditions") {
  Matrix<Rational> not_square(3, 4, Rational(0));
  CHECK_THROWS_AS(symmetric_low_rank_approx(not_square, desk_scale_params(1)),
                  DimensionError);
  Matrix<Rational> asym(3, 3, Rational(0));
  asym(0, 1) = Rational(1);
  CHECK_THROWS_AS(symmetric_low_rank_approx(asym, desk_scale_params(1)), DimensionError);
  Matrix<Rational> big(3, 3, Rational(2));
  CHECK_THROWS_AS(symmetric_low_rank_approx(big, desk_scale_params(1)), DimensionError);
}
