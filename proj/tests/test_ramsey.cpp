#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "qlo/combinatorics.hpp"
#include "qlo/exceptions.hpp"
#include "qlo/ramsey.hpp"

using namespace qlo;

namespace {

// subset-mask DP oracle for hom(G): clique[mask] via lowest-vertex recursion
int homogeneity_oracle(const Graph& g) {
  const int n = g.n();
  auto largest = [&](const Graph& h) {
    std::vector<char> clique(std::size_t{1} << n, 0);
    clique[0] = 1;
    int best = 0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      const int v = __builtin_ctzll(mask);
      const std::uint64_t rest = mask & (mask - 1);
      bool ok = clique[rest];
      if (ok) {
        std::uint64_t r = rest;
        while (r) {
          const int u = __builtin_ctzll(r);
          r &= r - 1;
          if (!h.edge(u, v)) {
            ok = false;
            break;
          }
        }
      }
      clique[mask] = ok;
      if (ok) best = std::max(best, __builtin_popcountll(mask));
    }
    return best;
  };
  return std::max(largest(g), largest(g.complement()));
}

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

}  // namespace

TEST_CASE("homogeneity on small named graphs") {
  CHECK(homogeneity(Graph::complete(4)).homogeneity == 4);
  auto c5 = homogeneity(Graph::cycle(5));
  CHECK(c5.clique == 2);
  CHECK(c5.independent == 2);
  CHECK(c5.homogeneity == 2);
  CHECK(homogeneity(Graph(6)).homogeneity == 6);  // empty graph
}

TEST_CASE("clique search equals the subset DP oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 14 + 2 * trial;  // up to 20
    auto g = Graph::random(n, rng);
    CHECK(homogeneity(g).homogeneity == homogeneity_oracle(g));
  }
}

TEST_CASE("is_c_ramsey") {
  Rng rng(101);
  auto g = Graph::random(32, rng);
  auto hom = homogeneity(g);
  CHECK(is_c_ramsey(g, 4.0) == (hom.homogeneity < 4.0 * std::log2(32.0)));
  CHECK_FALSE(is_c_ramsey(Graph::complete(16), 2.0));
}

TEST_CASE("coupled subset has exactly k vertices") {
  Rng rng(42);
  auto g = Graph::random(9, rng);
  for (int k : {0, 1, 4, 5, 9}) {
    auto sc = sample_coupling(g, k, 7 + k);
    CHECK(static_cast<int>(sc.subset.size()) == k);
    for (std::size_t i = 1; i < sc.subset.size(); ++i)
      CHECK(sc.subset[i - 1] < sc.subset[i]);
  }
  // k=0 and k=n edge cases
  auto none = sample_coupling(g, 0, 1);
  CHECK(none.subset.empty());
  auto all = sample_coupling(g, 9, 1);
  CHECK(static_cast<int>(all.subset.size()) == 9);
}

TEST_CASE("coefficient formula on the worked 4-vertex example") {
  // edges {1,4} and {2,3} in 1-based labels
  Graph g(4);
  g.add_edge(0, 3);
  g.add_edge(1, 2);
  auto inst = coefficient_poly(g, identity_perm(4), 2);
  CHECK(inst.m == 2);
  CHECK(inst.f.coeff2(0, 1) == make_rational(-1, 2));

  auto complete = coefficient_poly(Graph::complete(6), identity_perm(6), 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(FieldTraits<Rational>::is_zero(complete.f.coeff2(i, j)));

  auto empty = coefficient_poly(Graph(6), identity_perm(6), 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(FieldTraits<Rational>::is_zero(empty.f.coeff2(i, j)));
  CHECK(FieldTraits<Rational>::is_zero(empty.f.constant));
}

TEST_CASE("coupling identity holds exhaustively and coefficients are quarters") {
  Rng rng(2025);
  const std::vector<Rational> allowed = {make_rational(-1, 2), make_rational(-1, 4),
                                         Rational(0), make_rational(1, 4),
                                         make_rational(1, 2)};
  for (int trial = 0; trial < 12; ++trial) {
    const int n = rng.range(2, 10);
    const int k = rng.range(0, n);
    auto g = Graph::random(n, rng);
    auto inst = coefficient_poly(g, rng.random_permutation(n), k);
    CHECK(verify_coupling_identity(g, inst, true));
    for (int i = 0; i < inst.m; ++i)
      for (int j = i + 1; j < inst.m; ++j) {
        bool ok = false;
        for (const auto& a : allowed)
          if (inst.f.coeff2(i, j) == a) ok = true;
        CHECK(ok);
      }
  }
}

TEST_CASE("coupling uniformity: exhaustive (pi, xi) enumeration") {
  // every k-subset appears equally often across all n! * 2^m outcomes
  for (int n = 2; n <= 6; ++n) {
    Rng graph_rng(n);
    Graph g = Graph::random(n, graph_rng);  // which graph is irrelevant here
    for (int k = 0; k <= n; ++k) {
      const int m = std::min(k, n - k);
      std::map<std::vector<int>, long> counts;
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      long outcomes = 0;
      do {
        auto inst = coefficient_poly(g, perm, k);
        std::vector<int> xi(m);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
          for (int i = 0; i < m; ++i) xi[i] = (mask >> i) & 1 ? -1 : 1;
          ++counts[coupled_subset(inst, xi)];
          ++outcomes;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      CHECK(static_cast<long>(counts.size()) == combinations_count(n, k));
      const long expected = outcomes / combinations_count(n, k);
      for (const auto& [subset, c] : counts) CHECK(c == expected);
    }
  }
}

TEST_CASE("strong tuples: degenerate and planted cases") {
  auto complete = coefficient_poly(Graph::complete(12), identity_perm(12), 6);
  auto rep_c = count_strong_tuples(complete, 2, 1 << 20, 1);
  CHECK(rep_c.exhaustive);
  CHECK(rep_c.count == 0.0);

  auto empty = coefficient_poly(Graph(12), identity_perm(12), 6);
  CHECK(count_strong_tuples(empty, 2, 1 << 20, 1).count == 0.0);

  // planted double matching: edges (l, r+l) and (2r+l, 3r+l) make the tuple
  // (0..r-1, r..2r-1) strong under the identity permutation
  for (int r : {1, 2, 3}) {
    Graph g(4 * r);
    for (int l = 0; l < r; ++l) {
      g.add_edge(l, r + l);
      g.add_edge(2 * r + l, 3 * r + l);
    }
    auto inst = coefficient_poly(g, identity_perm(4 * r), 2 * r);
    std::vector<int> tuple;
    for (int l = 0; l < 2 * r; ++l) tuple.push_back(l);
    CHECK(is_strong_tuple(inst, tuple));
    auto rep = count_strong_tuples(inst, r, 1 << 22, 3);
    CHECK(rep.exhaustive);
    CHECK(rep.count >= 1.0);
  }
}

TEST_CASE("strong tuple sampling estimates the exhaustive density") {
  Rng rng(606);
  auto g = Graph::random(24, rng);
  auto inst = coefficient_poly(g, rng.random_permutation(24), 12);
  auto exact = count_strong_tuples(inst, 1, 1 << 20, 5);
  REQUIRE(exact.exhaustive);
  auto sampled = count_strong_tuples(inst, 1, 30, 5);  // force sampling: C(12,2)=66>30
  CHECK_FALSE(sampled.exhaustive);
  CHECK(std::fabs(sampled.density - exact.density) <=
        3.0 * std::max(sampled.ci_halfwidth, 0.08));
}

TEST_CASE("count_full_rank_submatrices") {
  Matrix<Rational> eye = Matrix<Rational>::identity(5);
  auto r1 = count_full_rank_submatrices(eye, 1, 1 << 20, 1);
  CHECK(r1.exhaustive);
  CHECK(r1.count == 5.0);

  Matrix<Rational> zero(4, 4, Rational(0));
  CHECK(count_full_rank_submatrices(zero, 2, 1 << 20, 1).count == 0.0);

  Rng rng(9);
  Matrix<Rational> m(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) m(i, j) = Rational(rng.coin() ? 1 : -1);
  auto fast = count_full_rank_submatrices(m, 2, 1 << 20, 1);
  // brute force oracle
  long oracle = 0;
  for_each_combination(8, 2, [&](const std::vector<int>& rows) {
    for_each_combination(8, 2, [&](const std::vector<int>& cols) {
      if (!FieldTraits<Rational>::is_zero(determinant(m.submatrix(rows, cols))))
        ++oracle;
    });
  });
  CHECK(fast.exhaustive);
  CHECK(fast.count == static_cast<double>(oracle));
}

TEST_CASE("rank_after_edits and the edit-attack implication") {
  auto eye = Matrix<Rational>::identity(6);
  CHECK(rank_after_edits(eye, {}) == 6);
  std::vector<MatrixEdit> kill_row{{2, 2, Rational(0)}};
  CHECK(rank_after_edits(eye, kill_row) == 5);

  // a matrix with many full-rank r x r submatrices keeps rank >= r under a
  // few random edits
  Rng rng(77);
  Matrix<Rational> m(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) m(i, j) = Rational(rng.coin() ? 1 : -1);
  const int r = 2;
  auto full = count_full_rank_submatrices(m, r, 1 << 20, 1);
  const double total = full.samples;
  REQUIRE(full.count / total > 0.5);  // plenty of invertible 2x2s
  for (int attack = 0; attack < 20; ++attack) {
    std::vector<MatrixEdit> edits;
    for (int e = 0; e < 6; ++e)  // 6 edits < delta m^2 for delta ~ 0.1
      edits.push_back({static_cast<int>(rng.below(8)), static_cast<int>(rng.below(8)),
                       make_rational(rng.range(-4, 4), 4)});
    CHECK(rank_after_edits(m, edits) >= r);
  }
}

TEST_CASE("count_induced_copies") {
  auto k3 = Graph::complete(3);
  auto k2 = Graph::complete(2);
  auto c = count_induced_copies(k3, k2, 1 << 20, 1);
  CHECK(c.exhaustive);
  CHECK(c.count == 6.0);

  CHECK(count_induced_copies(Graph(5), k2, 1 << 20, 1).count == 0.0);

  // C5 vs path on 3 vertices against a hand enumeration oracle
  auto c5 = Graph::cycle(5);
  auto p3 = Graph::path(3);
  long oracle = 0;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c2 = 0; c2 < 5; ++c2) {
        if (a == b || b == c2 || a == c2) continue;
        if (c5.edge(a, b) && c5.edge(b, c2) && !c5.edge(a, c2)) ++oracle;
      }
  auto got = count_induced_copies(c5, p3, 1 << 20, 1);
  CHECK(got.exhaustive);
  CHECK(got.count == static_cast<double>(oracle));
}

TEST_CASE("edge statistic distribution") {
  auto dk3 = edge_statistic_distribution(Graph::complete(3), 2, DistributionMode::Exact);
  CHECK(dk3.weights.size() == 1);
  CHECK(dk3.weights.at(Rational(1)) == 3);

  auto dp3 = edge_statistic_distribution(Graph::path(3), 2, DistributionMode::Exact);
  CHECK(dp3.total == 3);
  CHECK(dp3.weights.at(Rational(1)) == 2);
  CHECK(dp3.weights.at(Rational(0)) == 1);

  // exact subset enumeration vs coupling-based MC on a seeded G(16, 1/2)
  Rng rng(1616);
  auto g = Graph::random(16, rng);
  auto exact = edge_statistic_distribution(g, 8, DistributionMode::Exact);
  CHECK(exact.total == 12870);  // C(16,8)

  std::uint64_t samples = 200000;
  PointMass<Rational> viacoupling;
  viacoupling.mode = PointMass<Rational>::Mode::MonteCarlo;
  {
    Rng sampler(99);
    for (std::uint64_t t = 0; t < samples; ++t)
      viacoupling.add(Rational(g.edges_inside(sample_coupled_subset(16, 8, sampler))));
  }
  // compare Pr(X = mode of exact) within 3 sigma
  auto top = max_point_probability(exact);
  const double p_exact = rat_to_double(top.probability);
  const auto it = viacoupling.weights.find(top.value);
  REQUIRE(it != viacoupling.weights.end());
  const double p_mc = static_cast<double>(it->second) / static_cast<double>(samples);
  const double sigma = std::sqrt(p_exact * (1 - p_exact) / static_cast<double>(samples));
  CHECK(std::fabs(p_mc - p_exact) <= 3.0 * sigma + 1e-9);

  // direct subset MC agrees too
  auto direct = edge_statistic_distribution(g, 8, DistributionMode::MonteCarlo, samples, 5);
  const double p_direct =
      static_cast<double>(direct.weights.at(top.value)) / static_cast<double>(samples);
  CHECK(std::fabs(p_direct - p_exact) <= 3.0 * sigma + 1e-9);

  CHECK(distribution_variance(dk3) == doctest::Approx(0.0));
}

TEST_CASE("edge statistic caps and errors") {
  CHECK_THROWS_AS(edge_statistic_distribution(Graph(40), 20, DistributionMode::Exact),
                  CapExceededError);
  CHECK_THROWS_AS(edge_statistic_distribution(Graph(5), 9, DistributionMode::Exact),
                  DimensionError);
}
