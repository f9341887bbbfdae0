#pragma once

#include <utility>
#include <vector>

#include "qlo/poly.hpp"
#include "qlo/quadrature.hpp"

namespace qlo {

// Calibrated Esseen multiplier: largest observed ratio of a true small-ball
// probability to the raw (s + 1/eps) * integral bound over the seeded
// calibration corpus (500 dyadic quadratics, n in [4,12], queries
// (s,eps) in {1,2}x{1/2,1}), rounded up to one decimal. A configuration
// value, not a literature constant.
inline constexpr double kEsseenCalibratedC = 1.2;

struct Partition {
  std::vector<int> I, J;  // disjoint, I u J = {0,...,n-1}

  Partition(std::vector<int> i_set, std::vector<int> j_set, int n);
  static Partition random_half(int n, Rng& rng);
};

// f(xi_I, xi_J) - f(xi_I, xi'_J) as a linear form in xi_I for one fixed
// outcome of (xi_J, xi'_J)
struct DecoupledLinearForm {
  std::vector<int> indices;     // the set I
  std::vector<double> coeffs;   // A_l = sum_{j in J} a_{lj} (xi_j - xi'_j)
  double constant = 0.0;        // the xi_I-free part
};

DecoupledLinearForm decoupled_form(const QuadraticPoly<double>& f, const Partition& p,
                                   const std::vector<int>& xi_j,
                                   const std::vector<int>& xi_j_prime);

// product over I of |cos(2 pi t A_l)|: the conditional magnitude of the
// decoupled characteristic function
double cosine_product_bound(const DecoupledLinearForm& form, double t);

// Weighted-atom view of f(xi)'s distribution for characteristic-function
// queries. Exact construction enumerates all 2^n sign vectors; the MC
// construction keeps one common sample set for every t in a sweep.
class CharFnEvaluator {
 public:
  static CharFnEvaluator exact(const QuadraticPoly<Rational>& f,
                               const EnumerationOptions& opt = {});
  static CharFnEvaluator exact(const QuadraticPoly<double>& f,
                               int cap = kDefaultEnumerationCap);
  static CharFnEvaluator monte_carlo(const QuadraticPoly<double>& f,
                                     std::uint64_t samples, std::uint64_t seed);

  // |E e^{2 pi i t f(xi)}|, always in [0,1]
  double magnitude(double t) const;

 private:
  std::vector<std::pair<double, double>> atoms_;  // (value, probability)
};

inline double char_magnitude(const QuadraticPoly<Rational>& f, double t,
                             const EnumerationOptions& opt = {}) {
  return CharFnEvaluator::exact(f, opt).magnitude(t);
}
inline double char_magnitude(const QuadraticPoly<double>& f, double t,
                             int cap = kDefaultEnumerationCap) {
  return CharFnEvaluator::exact(f, cap).magnitude(t);
}

enum class DecouplingMode { Exact, MonteCarlo };

struct DecouplingReport {
  double lhs_sq = 0.0;   // |E e^{2 pi i t f}|^2
  double rhs = 0.0;      // E over (xi_J, xi'_J) of the cosine product
  double tol = 1e-12;
  bool holds = false;    // lhs_sq <= rhs + tol
  DecouplingMode mode = DecouplingMode::Exact;
};

struct DecouplingOptions {
  int cap = kDefaultEnumerationCap;       // exact mode: |I| + 2|J| <= cap
  std::uint64_t mc_samples = 100000;
  std::uint64_t seed = 0;
  double tol = 1e-12;
};

DecouplingReport decoupling_check(const QuadraticPoly<double>& f, const Partition& p,
                                  double t, DecouplingMode mode,
                                  const DecouplingOptions& opt = {});
inline DecouplingReport decoupling_check(const QuadraticPoly<Rational>& f,
                                         const Partition& p, double t,
                                         DecouplingMode mode,
                                         const DecouplingOptions& opt = {}) {
  return decoupling_check(to_double_poly(f), p, t, mode, opt);
}

struct EsseenResult {
  double bound = 0.0;      // c_impl * (s + 1/eps) * integral
  double integral = 0.0;   // int_{-eps}^{eps} |phi(t)| dt
  double quad_error = 0.0;
  bool converged = false;
  double s = 0.0, eps_freq = 0.0, c_impl = kEsseenCalibratedC;
};

EsseenResult esseen_bound(const CharFnEvaluator& phi, double s, double eps_freq,
                          double c_impl = kEsseenCalibratedC);

// Largest probability/raw-bound ratio over the seeded calibration corpus;
// kEsseenCalibratedC is this, rounded up to one decimal.
double esseen_worst_ratio(std::uint64_t seed_lo, std::uint64_t seed_hi);

}  // namespace qlo
