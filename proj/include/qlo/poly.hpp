#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "qlo/exceptions.hpp"
#include "qlo/field.hpp"
#include "qlo/matrix.hpp"
#include "qlo/parallel.hpp"
#include "qlo/rng.hpp"

namespace qlo {

inline constexpr int kDefaultEnumerationCap = 28;

// Quadratic polynomial in n variables restricted to {-1,+1}^n inputs:
//   f(x) = sum_{i<=j} a_{ij} x_i x_j + sum_i a_i x_i + a_0.
// Indices are 0-based; the a_{ii} coefficient multiplies x_i^2.
template <class F>
struct QuadraticPoly {
  int n = 0;
  std::vector<F> deg2;  // upper triangle, packed row by row
  std::vector<F> lin;
  F constant{};

  explicit QuadraticPoly(int vars = 0)
      : n(vars),
        deg2(static_cast<std::size_t>(vars) * (vars + 1) / 2, F{}),
        lin(vars, F{}) {}

  std::size_t tri_index(int i, int j) const {
    // requires i <= j
    return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i - 1) / 2 +
           (j - i);
  }
  F& coeff2(int i, int j) { return deg2[tri_index(std::min(i, j), std::max(i, j))]; }
  const F& coeff2(int i, int j) const {
    return deg2[tri_index(std::min(i, j), std::max(i, j))];
  }

  // symmetric coefficient view: M_ij = M_ji = a_{ij} for i<j, M_ii = a_{ii}
  F sym(int i, int j) const { return coeff2(i, j); }
  Matrix<F> sym_matrix() const {
    Matrix<F> m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = sym(i, j);
    return m;
  }
  // quadratic-form view: f's degree-2 part equals (1/2) x^T H x
  Matrix<F> quad_form_matrix() const {
    Matrix<F> h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h(i, j) = (i == j) ? F{2} * coeff2(i, i) : sym(i, j);
    return h;
  }

  Mag<F> coeff_linf() const {
    Mag<F> m = FieldTraits<F>::abs(constant);
    for (const auto& c : deg2) {
      auto a = FieldTraits<F>::abs(c);
      if (m < a) m = a;
    }
    for (const auto& c : lin) {
      auto a = FieldTraits<F>::abs(c);
      if (m < a) m = a;
    }
    return m;
  }

  F evaluate(const std::vector<int>& signs) const {
    if (static_cast<int>(signs.size()) != n)
      throw DimensionError("evaluate: sign vector length mismatch");
    F acc = constant;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      if (signs[i] > 0)
        acc += lin[i];
      else
        acc -= lin[i];
      for (int j = i; j < n; ++j, ++idx) {
        if (FieldTraits<F>::is_zero(deg2[idx])) continue;
        if (signs[i] * signs[j] > 0)
          acc += deg2[idx];
        else
          acc -= deg2[idx];
      }
    }
    return acc;
  }
};

inline QuadraticPoly<double> to_double_poly(const QuadraticPoly<Rational>& f) {
  QuadraticPoly<double> g(f.n);
  for (std::size_t k = 0; k < f.deg2.size(); ++k) g.deg2[k] = rat_to_double(f.deg2[k]);
  for (int i = 0; i < f.n; ++i) g.lin[i] = rat_to_double(f.lin[i]);
  g.constant = rat_to_double(f.constant);
  return g;
}

// Value distribution of f(xi): either the full census over all 2^n sign
// vectors or a seeded Monte-Carlo sample. Weights always sum to `total`.
template <class K>
struct PointMass {
  enum class Mode { Exact, MonteCarlo };
  Mode mode = Mode::Exact;
  std::map<K, std::uint64_t, CanonicalLess<K>> weights;
  std::uint64_t total = 0;
  int n = 0;  // variable count for sign enumerations, 0 otherwise

  void add(const K& value, std::uint64_t count = 1) {
    weights[value] += count;
    total += count;
  }
};

template <class K>
struct PointProbability {
  K value{};
  std::uint64_t count = 0;
  Rational probability;  // count / total, exact
};

template <class K>
PointProbability<K> max_point_probability(const PointMass<K>& d) {
  if (d.weights.empty() || d.total == 0)
    throw DimensionError("max_point_probability: empty distribution");
  PointProbability<K> best;
  bool first = true;
  for (const auto& [value, count] : d.weights) {
    if (first || count > best.count) {  // map order breaks ties toward the
      best.value = value;               // canonically smallest value
      best.count = count;
      first = false;
    }
  }
  best.probability = Rational(static_cast<long>(best.count), 1);
  best.probability /= Rational(BigInt(static_cast<unsigned long>(d.total)));
  best.probability.canonicalize();
  return best;
}

// Pr(|X - x| <= s)
template <class K>
Rational small_ball_probability(const PointMass<K>& d, const K& x, const Mag<K>& radius) {
  if (radius < Mag<K>{}) throw DimensionError("small_ball_probability: negative radius");
  if (d.total == 0) throw DimensionError("small_ball_probability: empty distribution");
  std::uint64_t inside = 0;
  for (const auto& [value, count] : d.weights)
    if (!(radius < FieldTraits<K>::abs(value - x))) inside += count;
  Rational p(BigInt(static_cast<unsigned long>(inside)));
  p /= Rational(BigInt(static_cast<unsigned long>(d.total)));
  p.canonicalize();
  return p;
}

struct EnumerationOptions {
  int cap = kDefaultEnumerationCap;
  int workers = 1;
};

namespace detail {

// Integer-scaled form: all coefficients multiplied by the lcm of their
// denominators, diagonal and constant folded together (x_i^2 = 1).
struct ScaledPoly {
  int n = 0;
  BigInt scale;                        // f_scaled = scale * f, integral
  std::vector<BigInt> offdiag;         // symmetric, zero diagonal, row-major n*n
  std::vector<BigInt> lin;
  BigInt constant;                     // scale * (a_0 + sum_i a_ii)
  BigInt value_bound;                  // |f_scaled| never exceeds this
};

ScaledPoly scale_poly(const QuadraticPoly<Rational>& f);

// Gray-code census of one subcube: the top `fixed_bits` signs are pinned to
// the bits of `chunk`, the rest are enumerated with single-flip updates.
template <class Int, class Emit>
void enumerate_subcube(const ScaledPoly& sp, const std::vector<Int>& offdiag,
                       const std::vector<Int>& lin, Int constant, int fixed_bits,
                       std::uint64_t chunk, Emit&& emit) {
  const int n = sp.n;
  const int free_bits = n - fixed_bits;
  std::vector<int> sign(n, 1);
  for (int t = 0; t < fixed_bits; ++t)
    sign[free_bits + t] = (chunk >> t) & 1 ? -1 : 1;

  std::vector<Int> s(lin);  // s_k = lin_k + sum_j offdiag_kj * sign_j
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j)
      if (sign[j] < 0)
        s[k] -= offdiag[static_cast<std::size_t>(k) * n + j];
      else
        s[k] += offdiag[static_cast<std::size_t>(k) * n + j];
  }
  // sum_k sign_k * s_k counts the linear part once and each m_ij twice
  Int value = constant;
  Int twice_quad{};
  for (int k = 0; k < n; ++k) {
    Int quad = s[k] - lin[k];
    if (sign[k] < 0) {
      value -= lin[k];
      twice_quad -= quad;
    } else {
      value += lin[k];
      twice_quad += quad;
    }
  }
  value += twice_quad / 2;
  emit(value);
  const std::uint64_t steps = free_bits >= 64 ? 0 : (1ULL << free_bits);
  for (std::uint64_t step = 1; step < steps; ++step) {
    const int k = __builtin_ctzll(step);
    // flip sign k: value -= 2*sign_k*s_k, then refresh the partial sums
    if (sign[k] > 0)
      value -= 2 * s[k];
    else
      value += 2 * s[k];
    const std::size_t row = static_cast<std::size_t>(k) * n;
    if (sign[k] > 0) {
      for (int j = 0; j < n; ++j) s[j] -= 2 * offdiag[row + j];
    } else {
      for (int j = 0; j < n; ++j) s[j] += 2 * offdiag[row + j];
    }
    sign[k] = -sign[k];
    emit(value);
  }
}

}  // namespace detail

// Exact census of f over all 2^n sign vectors. Requires the rational
// backend; scaled int64 arithmetic when it provably cannot overflow,
// arbitrary-precision integers otherwise. Deterministic at any worker count.
PointMass<Rational> exact_distribution(const QuadraticPoly<Rational>& f,
                                       const EnumerationOptions& opt = {});

PointMass<Rational> monte_carlo_distribution(const QuadraticPoly<Rational>& f,
                                             std::uint64_t samples, std::uint64_t seed);
PointMass<double> monte_carlo_distribution(const QuadraticPoly<double>& f,
                                           std::uint64_t samples, std::uint64_t seed);
PointMass<Complex> monte_carlo_distribution(const QuadraticPoly<Complex>& f,
                                            std::uint64_t samples, std::uint64_t seed);

}  // namespace qlo
