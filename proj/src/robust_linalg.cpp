#include "qlo/robust_linalg.hpp"

#include <cmath>

#include "qlo/exceptions.hpp"

namespace qlo {

std::vector<std::vector<double>> sphere_net(int dim, double eps) {
  if (dim < 1) throw DimensionError("sphere_net: dim must be >= 1");
  if (dim == 1) return {{1.0}, {-1.0}};
  // grid the cube surface with step h = eps/sqrt(dim-1), then normalise;
  // covering radius <= 2 * (sqrt(dim-1) h / 2) = eps
  const double h = eps / std::sqrt(static_cast<double>(dim - 1));
  const int steps = static_cast<int>(std::ceil(2.0 / h));
  std::vector<std::vector<double>> net;
  std::vector<int> idx(dim - 1, 0);
  for (int axis = 0; axis < dim; ++axis) {
    for (int sign = -1; sign <= 1; sign += 2) {
      std::fill(idx.begin(), idx.end(), 0);
      for (;;) {
        std::vector<double> p(dim);
        p[axis] = static_cast<double>(sign);
        int t = 0;
        for (int d = 0; d < dim; ++d) {
          if (d == axis) continue;
          p[d] = -1.0 + 2.0 * static_cast<double>(idx[t]) / static_cast<double>(steps);
          ++t;
        }
        double norm = 0.0;
        for (double x : p) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : p) x /= norm;
        net.push_back(std::move(p));
        int d = dim - 2;
        while (d >= 0 && idx[d] == steps) --d;
        if (d < 0) break;
        ++idx[d];
        for (int d2 = d + 1; d2 < dim - 1; ++d2) idx[d2] = 0;
      }
    }
  }
  return net;
}

NonDegeneracyVerdict check_non_degenerate(const Matrix<double>& m, double delta,
                                          double delta_refute, int r_cap,
                                          double net_eps) {
  const int r = m.rows(), n = m.cols();
  if (r > r_cap)
    throw CapExceededError("check_non_degenerate: r exceeds the net-feasible cap");
  if (delta <= 0.0) throw DimensionError("check_non_degenerate: delta must be positive");
  if (delta_refute <= 0.0) delta_refute = delta;

  const double eps = net_eps > 0.0 ? net_eps : delta / (2.0 * static_cast<double>(r));
  auto net = sphere_net(r, eps);

  NonDegeneracyVerdict v;
  v.net_spacing = eps;
  v.net_size = static_cast<long>(net.size());

  // 1e-9 slack on both comparisons so binary rounding of delta*n cannot flip
  // a verdict
  const double slack = 1e-9;
  for (const auto& e : net) {
    long count_cert = 0, count_refute = 0;
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int i = 0; i < r; ++i) dot += m(i, j) * e[i];
      const double a = std::fabs(dot);
      if (a >= delta - slack) ++count_cert;
      if (a >= delta_refute - slack) ++count_refute;
    }
    if (static_cast<double>(count_refute) + slack < delta_refute * n) {
      v.kind = NonDegeneracyVerdict::Kind::Refuted;
      v.witness_direction = e;
      v.witness_columns = count_refute;
      v.refuted_level = delta_refute;
      return v;
    }
    if (static_cast<double>(count_cert) + slack < delta * n) {
      // e fails the delta count, so it directly falsifies delta-non-degeneracy
      v.kind = NonDegeneracyVerdict::Kind::Refuted;
      v.witness_direction = e;
      v.witness_columns = count_cert;
      v.refuted_level = delta;
      return v;
    }
  }
  v.kind = NonDegeneracyVerdict::Kind::Certified;
  v.certified_level = delta / 3.0;
  return v;
}

PhaseNonDegeneracy check_non_degenerate_phase_sampled(const Matrix<Complex>& m,
                                                      double delta, int samples,
                                                      std::uint64_t seed) {
  Rng rng(seed);
  PhaseNonDegeneracy out;
  out.samples = samples;
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    const double theta = rng.uniform(-M_PI, M_PI);
    const Complex phase(std::cos(theta), std::sin(theta));
    Matrix<double> proj(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) proj(i, j) = (phase * m(i, j)).real();
    auto verdict = check_non_degenerate(proj, delta);
    if (verdict.kind == NonDegeneracyVerdict::Kind::Certified) {
      ++hits;
      out.best = verdict;
    } else if (hits == 0) {
      out.best = verdict;
    }
  }
  out.success_fraction = samples > 0 ? static_cast<double>(hits) / samples : 0.0;
  return out;
}

namespace {

template <class F>
F scaled_field_value(double x) {
  if constexpr (std::is_same_v<F, Rational>) {
    // keep attack deltas exactly representable
    return make_rational(static_cast<long>(std::lround(x * 4096.0)), 4096);
  } else {
    return FieldTraits<F>::from_double(x);
  }
}

template <class F>
bool is_dependent(const std::vector<std::vector<F>>& vecs) {
  Matrix<F> m(static_cast<int>(vecs.size()), static_cast<int>(vecs.front().size()));
  for (std::size_t i = 0; i < vecs.size(); ++i) m.set_row(static_cast<int>(i), vecs[i]);
  return rank(m) < static_cast<int>(vecs.size());
}

}  // namespace

template <class F>
bool random_attack_breaks(const VectorList<F>& input, const Mag<F>& eps, int attempts,
                          std::uint64_t seed) {
  const int q = input.count(), n = input.n;
  if (q == 0) return false;
  Rng rng(seed);
  const Mag<F> budget = eps * Mag<F>(n);

  for (int t = 0; t < attempts; ++t) {
    std::vector<std::vector<F>> work = input.vecs;
    const int kind = static_cast<int>(rng.below(4));
    if (kind == 0) {
      // spread the budget over random entries with random rational weights
      const int touches = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(3 * q)));
      std::vector<std::pair<int, int>> spots(touches);
      std::vector<long> weights(touches);
      long wsum = 0;
      for (auto& w : weights) {
        w = 1 + static_cast<long>(rng.below(100));
        wsum += w;
      }
      for (auto& s : spots)
        s = {static_cast<int>(rng.below(q)), static_cast<int>(rng.below(n))};
      for (int s = 0; s < touches; ++s) {
        Mag<F> delta = budget * Mag<F>(weights[s]) / Mag<F>(wsum);
        F signed_delta = (rng.coin() ? F{1} : F{-1}) * F(delta);
        work[spots[s].first][spots[s].second] += signed_delta;
      }
    } else if (kind == 1) {
      int row = static_cast<int>(rng.below(q));
      if (budget < vec_l1(input.vecs[row])) continue;
      for (auto& x : work[row]) x = F{};
    } else if (kind == 2) {
      auto order = rng.random_permutation(n);
      Mag<F> spent{};
      for (int j : order) {
        Mag<F> col_cost{};
        for (int i = 0; i < q; ++i) col_cost += FieldTraits<F>::abs(work[i][j]);
        if (budget < spent + col_cost) continue;
        spent += col_cost;
        for (int i = 0; i < q; ++i) work[i][j] = F{};
      }
    } else {
      if (q < 2) continue;
      int a = static_cast<int>(rng.below(q));
      int b = static_cast<int>(rng.below(q));
      if (a == b) continue;
      const double lam = rng.uniform(-1.0, 1.0);
      F lambda = scaled_field_value<F>(lam);
      // align the cheapest coordinates of row b onto lambda * row a
      std::vector<std::pair<Mag<F>, int>> costs;
      for (int j = 0; j < n; ++j)
        costs.push_back({FieldTraits<F>::abs(work[b][j] - lambda * work[a][j]), j});
      std::sort(costs.begin(), costs.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      Mag<F> spent{};
      for (const auto& [c, j] : costs) {
        if (budget < spent + c) break;
        spent += c;
        work[b][j] = lambda * work[a][j];
      }
    }
    // legality, then the break test
    Mag<F> cost{};
    for (int i = 0; i < q; ++i) cost += vec_l1_distance(input.vecs[i], work[i]);
    if (budget < cost) continue;
    if (is_dependent(work)) return true;
  }
  return false;
}

template bool random_attack_breaks<Rational>(const VectorList<Rational>&, const Rational&,
                                             int, std::uint64_t);
template bool random_attack_breaks<double>(const VectorList<double>&, const double&, int,
                                           std::uint64_t);
template bool random_attack_breaks<Complex>(const VectorList<Complex>&, const double&, int,
                                            std::uint64_t);

template <class F>
LeastL1Result least_l1_image(const Matrix<F>& b, int samples, std::uint64_t seed) {
  const int q = b.rows();
  if (q != b.cols()) throw DimensionError("least_l1_image: square matrix required");
  LeastL1Result res;
  double fact = 1.0;
  for (int i = 2; i <= q; ++i) fact *= i;
  res.lower_bound = mag_to_double(FieldTraits<F>::abs(determinant(b))) / fact;
  Rng rng(seed);
  res.sampled_min = -1.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> e = rng.unit_vector(q);
    double l1 = 0.0;
    if constexpr (std::is_same_v<F, Complex>) {
      std::vector<double> im = rng.unit_vector(q);
      double norm2 = 0.0;
      std::vector<Complex> ec(q);
      for (int i = 0; i < q; ++i) {
        ec[i] = Complex(e[i], im[i]);
        norm2 += std::norm(ec[i]);
      }
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& z : ec) z *= inv;
      for (int i = 0; i < q; ++i) {
        Complex acc{};
        for (int j = 0; j < q; ++j) acc += b(i, j) * ec[j];
        l1 += std::abs(acc);
      }
    } else {
      for (int i = 0; i < q; ++i) {
        double acc = 0.0;
        for (int j = 0; j < q; ++j) acc += FieldTraits<F>::to_double(b(i, j)) * e[j];
        l1 += std::fabs(acc);
      }
    }
    if (res.sampled_min < 0.0 || l1 < res.sampled_min) res.sampled_min = l1;
  }
  if (res.sampled_min < 0.0) res.sampled_min = res.lower_bound;
  res.violated = res.sampled_min < res.lower_bound - 1e-9;
  return res;
}

template LeastL1Result least_l1_image<Rational>(const Matrix<Rational>&, int, std::uint64_t);
template LeastL1Result least_l1_image<double>(const Matrix<double>&, int, std::uint64_t);
template LeastL1Result least_l1_image<Complex>(const Matrix<Complex>&, int, std::uint64_t);

}  // namespace qlo
