#include "qlo/ramsey.hpp"

#include <algorithm>
#include <cmath>

#include "qlo/exceptions.hpp"
#include "qlo/combinatorics.hpp"

namespace qlo {

namespace {

double binom_double(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

std::uint64_t binom_u64_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (r > cap) return cap + 1;
  }
  return r;
}

}  // namespace

std::vector<int> coupled_subset(const CouplingInstance& inst, const std::vector<int>& xi) {
  if (static_cast<int>(xi.size()) != inst.m)
    throw DimensionError("coupled_subset: sign vector length mismatch");
  std::vector<int> u;
  u.reserve(inst.k);
  for (int i = 0; i < inst.m; ++i)
    u.push_back(xi[i] == 1 ? inst.pi[i] : inst.pi[i + inst.m]);
  for (int i = 2 * inst.m; i < inst.m + inst.k; ++i) u.push_back(inst.pi[i]);
  std::sort(u.begin(), u.end());
  return u;
}

CouplingInstance coefficient_poly(const Graph& g, const std::vector<int>& pi, int k) {
  const int n = g.n();
  if (static_cast<int>(pi.size()) != n)
    throw DimensionError("coefficient_poly: permutation length mismatch");
  if (k < 0 || k > n) throw DimensionError("coefficient_poly: k out of range");
  CouplingInstance inst;
  inst.pi = pi;
  inst.n = n;
  inst.k = k;
  inst.m = std::min(k, n - k);
  const int m = inst.m;
  inst.f = QuadraticPoly<Rational>(m);

  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const int q = g.e(pi[i], pi[j]) - g.e(pi[i], pi[j + m]) - g.e(pi[i + m], pi[j]) +
                    g.e(pi[i + m], pi[j + m]);
      inst.f.coeff2(i, j) = make_rational(q, 4);
    }

  // fit the linear part and constant against m+1 exact edge counts
  auto edges_at = [&](const std::vector<int>& xi) {
    return Rational(static_cast<long>(g.edges_inside(coupled_subset(inst, xi))));
  };
  auto deg2_at = [&](const std::vector<int>& xi) {
    Rational acc(0);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (xi[i] * xi[j] > 0)
          acc += inst.f.coeff2(i, j);
        else
          acc -= inst.f.coeff2(i, j);
    return acc;
  };
  std::vector<int> ones(m, 1);
  const Rational g_ones = edges_at(ones) - deg2_at(ones);
  Rational lin_sum(0);
  for (int t = 0; t < m; ++t) {
    std::vector<int> flipped = ones;
    flipped[t] = -1;
    const Rational g_t = edges_at(flipped) - deg2_at(flipped);
    inst.f.lin[t] = (g_ones - g_t) / Rational(2);
    lin_sum += inst.f.lin[t];
  }
  inst.f.constant = g_ones - lin_sum;

  if (!verify_coupling_identity(g, inst, m <= 10, 100, 0x5eedULL))
    throw InvariantError("coefficient_poly: e(U) != f(xi) on a checked sign vector");
  return inst;
}

SampledCoupling sample_coupling(const Graph& g, int k, std::uint64_t seed) {
  Rng rng(seed);
  SampledCoupling out;
  out.instance = coefficient_poly(g, rng.random_permutation(g.n()), k);
  out.xi.resize(out.instance.m);
  for (auto& s : out.xi) s = rng.coin() ? 1 : -1;
  out.subset = coupled_subset(out.instance, out.xi);
  return out;
}

std::vector<int> sample_coupled_subset(int n, int k, Rng& rng) {
  const int m = std::min(k, n - k);
  auto pi = rng.random_permutation(n);
  std::vector<int> u;
  u.reserve(k);
  for (int i = 0; i < m; ++i) u.push_back(rng.coin() ? pi[i] : pi[i + m]);
  for (int i = 2 * m; i < m + k; ++i) u.push_back(pi[i]);
  std::sort(u.begin(), u.end());
  return u;
}

bool verify_coupling_identity(const Graph& g, const CouplingInstance& inst,
                              bool exhaustive, int samples, std::uint64_t seed) {
  const int m = inst.m;
  auto check = [&](const std::vector<int>& xi) {
    const long e_u = g.edges_inside(coupled_subset(inst, xi));
    return inst.f.evaluate(xi) == Rational(e_u);
  };
  if (exhaustive) {
    std::vector<int> xi(m);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      for (int i = 0; i < m; ++i) xi[i] = (mask >> i) & 1 ? -1 : 1;
      if (!check(xi)) return false;
    }
    return true;
  }
  Rng rng(seed);
  std::vector<int> xi(m);
  for (int t = 0; t < samples; ++t) {
    for (auto& s : xi) s = rng.coin() ? 1 : -1;
    if (!check(xi)) return false;
  }
  return true;
}

bool is_strong_tuple(const CouplingInstance& inst, const std::vector<int>& tuple) {
  const int r = static_cast<int>(tuple.size()) / 2;
  if (static_cast<int>(tuple.size()) != 2 * r || r == 0) return false;
  for (std::size_t t = 1; t < tuple.size(); ++t)
    if (tuple[t - 1] >= tuple[t]) return false;
  static const Rational half = make_rational(1, 2);
  for (int l = 0; l < r; ++l)
    for (int q = 0; q < r; ++q) {
      const Rational& a = inst.f.coeff2(tuple[l], tuple[r + q]);
      if (l == q ? !(a == half) : !FieldTraits<Rational>::is_zero(a)) return false;
    }
  return true;
}

StrongTupleReport count_strong_tuples(const CouplingInstance& inst, int r,
                                      std::uint64_t budget, std::uint64_t seed) {
  if (r < 1) throw DimensionError("count_strong_tuples: r >= 1 required");
  StrongTupleReport rep;
  rep.r = r;
  const int m = inst.m;
  const double candidates = binom_double(m, 2 * r);
  if (2 * r > m) {
    rep.exhaustive = true;
    return rep;
  }
  if (binom_u64_capped(m, 2 * r, budget) <= budget) {
    rep.exhaustive = true;
    std::uint64_t count = 0, seen = 0;
    for_each_combination(m, 2 * r, [&](const std::vector<int>& subset) {
      ++seen;
      if (is_strong_tuple(inst, subset)) ++count;
    });
    rep.count = static_cast<double>(count);
    rep.samples = seen;
    rep.density = candidates > 0 ? rep.count / candidates : 0.0;
    return rep;
  }
  rep.exhaustive = false;
  Rng rng(seed);
  std::uint64_t hits = 0;
  const std::uint64_t draws = budget;
  for (std::uint64_t t = 0; t < draws; ++t) {
    auto subset = rng.sample_without_replacement(m, 2 * r);
    if (is_strong_tuple(inst, subset)) ++hits;
  }
  rep.samples = draws;
  rep.density = static_cast<double>(hits) / static_cast<double>(draws);
  rep.count = rep.density * candidates;
  rep.ci_halfwidth = 1.96 * std::sqrt(rep.density * (1.0 - rep.density) /
                                      static_cast<double>(draws));
  return rep;
}

CountEstimate count_full_rank_submatrices(const Matrix<Rational>& m, int r,
                                          std::uint64_t budget, std::uint64_t seed) {
  CountEstimate est;
  const int nr = m.rows(), nc = m.cols();
  if (r > nr || r > nc) return est;
  const double total = binom_double(nr, r) * binom_double(nc, r);
  const std::uint64_t rows_cap = binom_u64_capped(nr, r, budget);
  const std::uint64_t cols_cap = binom_u64_capped(nc, r, budget);
  if (rows_cap <= budget && cols_cap <= budget && rows_cap * cols_cap <= budget) {
    est.exhaustive = true;
    std::uint64_t count = 0, seen = 0;
    for_each_combination(nr, r, [&](const std::vector<int>& rows) {
      for_each_combination(nc, r, [&](const std::vector<int>& cols) {
        ++seen;
        if (!FieldTraits<Rational>::is_zero(determinant(m.submatrix(rows, cols))))
          ++count;
      });
    });
    est.count = static_cast<double>(count);
    est.samples = seen;
    est.density = total > 0 ? est.count / total : 0.0;
    return est;
  }
  est.exhaustive = false;
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < budget; ++t) {
    auto rows = rng.sample_without_replacement(nr, r);
    auto cols = rng.sample_without_replacement(nc, r);
    if (!FieldTraits<Rational>::is_zero(determinant(m.submatrix(rows, cols)))) ++hits;
  }
  est.samples = budget;
  est.density = static_cast<double>(hits) / static_cast<double>(budget);
  est.count = est.density * total;
  est.ci_halfwidth =
      1.96 * std::sqrt(est.density * (1.0 - est.density) / static_cast<double>(budget));
  return est;
}

int rank_after_edits(Matrix<Rational> m, const std::vector<MatrixEdit>& edits) {
  for (const auto& [i, j, value] : edits) m(i, j) = value;
  return rank(m);
}

CountEstimate count_induced_copies(const Graph& g, const Graph& h, std::uint64_t budget,
                                   std::uint64_t seed) {
  const int n = g.n(), hn = h.n();
  if (hn > 6) throw CapExceededError("count_induced_copies: |V(H)| <= 6 required");
  CountEstimate est;
  if (hn > n) return est;
  double ordered_total = 1.0;  // falling factorial (n)_h
  for (int i = 0; i < hn; ++i) ordered_total *= static_cast<double>(n - i);

  auto induced = [&](const std::vector<int>& seq) {
    for (int s = 0; s < hn; ++s)
      for (int t = s + 1; t < hn; ++t)
        if (g.edge(seq[s], seq[t]) != h.edge(s, t)) return false;
    return true;
  };

  double n_pow_h = 1.0;
  for (int i = 0; i < hn; ++i) n_pow_h *= static_cast<double>(n);
  if (n_pow_h <= static_cast<double>(budget)) {
    est.exhaustive = true;
    std::vector<int> seq(hn, 0);
    std::uint64_t count = 0, seen = 0;
    for (;;) {
      bool distinct = true;
      for (int s = 0; s < hn && distinct; ++s)
        for (int t = s + 1; t < hn; ++t)
          if (seq[s] == seq[t]) {
            distinct = false;
            break;
          }
      if (distinct) {
        ++seen;
        if (induced(seq)) ++count;
      }
      int d = hn - 1;
      while (d >= 0 && seq[d] == n - 1) --d;
      if (d < 0) break;
      ++seq[d];
      for (int d2 = d + 1; d2 < hn; ++d2) seq[d2] = 0;
    }
    est.count = static_cast<double>(count);
    est.samples = seen;
    est.density = ordered_total > 0 ? est.count / ordered_total : 0.0;
    return est;
  }
  est.exhaustive = false;
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < budget; ++t) {
    auto subset = rng.sample_without_replacement(n, hn);
    rng.shuffle(subset);
    if (induced(subset)) ++hits;
  }
  est.samples = budget;
  est.density = static_cast<double>(hits) / static_cast<double>(budget);
  est.count = est.density * ordered_total;
  est.ci_halfwidth =
      1.96 * std::sqrt(est.density * (1.0 - est.density) / static_cast<double>(budget));
  return est;
}

PointMass<Rational> edge_statistic_distribution(const Graph& g, int k,
                                                DistributionMode mode,
                                                std::uint64_t samples,
                                                std::uint64_t seed) {
  const int n = g.n();
  if (k < 0 || k > n) throw DimensionError("edge_statistic_distribution: bad k");
  PointMass<Rational> d;
  d.n = n;
  if (mode == DistributionMode::Exact) {
    d.mode = PointMass<Rational>::Mode::Exact;
    if (binom_u64_capped(n, k, kSubsetEnumerationCap) > kSubsetEnumerationCap)
      throw CapExceededError("edge_statistic_distribution: C(n,k) over cap");
    std::vector<std::uint64_t> mask(g.words(), 0);
    for_each_combination(n, k, [&](const std::vector<int>& subset) {
      std::fill(mask.begin(), mask.end(), 0);
      for (int v : subset) mask[v / 64] |= std::uint64_t{1} << (v % 64);
      d.add(Rational(g.edges_inside(mask)));
    });
    return d;
  }
  if (samples == 0) throw DimensionError("edge_statistic_distribution: need samples");
  d.mode = PointMass<Rational>::Mode::MonteCarlo;
  Rng rng(seed);
  std::vector<std::uint64_t> mask(g.words(), 0);
  for (std::uint64_t t = 0; t < samples; ++t) {
    auto subset = rng.sample_without_replacement(n, k);
    std::fill(mask.begin(), mask.end(), 0);
    for (int v : subset) mask[v / 64] |= std::uint64_t{1} << (v % 64);
    d.add(Rational(g.edges_inside(mask)));
  }
  return d;
}

double distribution_variance(const PointMass<Rational>& d) {
  if (d.total == 0) return 0.0;
  double mean = 0.0, sq = 0.0;
  const double inv = 1.0 / static_cast<double>(d.total);
  for (const auto& [v, c] : d.weights) {
    const double x = rat_to_double(v);
    const double w = static_cast<double>(c) * inv;
    mean += w * x;
    sq += w * x * x;
  }
  return sq - mean * mean;
}

}  // namespace qlo
