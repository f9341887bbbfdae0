#include "qlo/complex_projection.hpp"

#include <cmath>

#include "qlo/exceptions.hpp"

namespace qlo {

namespace {

void require_small_rank(const Matrix<Complex>& a) {
  if (a.rows() != a.cols()) throw DimensionError("phase projection: square matrix required");
  if (a.rows() > kPhaseRankCap)
    throw CapExceededError("phase projection: r exceeds cap 8");
}

Matrix<Complex> conjugated(const Matrix<Complex>& a) {
  Matrix<Complex> c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = std::conj(a(i, j));
  return c;
}

}  // namespace

std::vector<Complex> det_polynomial(const Matrix<Complex>& a) {
  require_small_rank(a);
  const int r = a.rows();
  const int terms = 2 * r + 1;
  const Matrix<Complex> abar = conjugated(a);
  std::vector<Complex> values(terms);
  for (int k = 0; k < terms; ++k) {
    const double ang = 2.0 * M_PI * k / terms;
    const Complex z(std::cos(ang), std::sin(ang));
    Matrix<Complex> m(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) m(i, j) = z * z * a(i, j) + abar(i, j);
    values[k] = determinant(m);
  }
  std::vector<Complex> coeffs(terms);
  for (int j = 0; j < terms; ++j) {
    Complex acc{};
    for (int k = 0; k < terms; ++k) {
      const double ang = -2.0 * M_PI * j * k / terms;
      acc += values[k] * Complex(std::cos(ang), std::sin(ang));
    }
    coeffs[j] = acc / static_cast<double>(terms);
  }
  const double p0 = std::abs(coeffs[0]);
  const double det_a = std::abs(determinant(a));
  if (std::fabs(p0 - det_a) > 1e-6 * std::max(1.0, det_a))
    throw InvariantError("det_polynomial: |p(0)| != |det A|");
  return coeffs;
}

Complex eval_polynomial(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double phase_det(const Matrix<Complex>& a, double theta) {
  require_small_rank(a);
  const Complex phase(std::cos(theta), std::sin(theta));
  Matrix<double> re(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) re(i, j) = (phase * a(i, j)).real();
  return determinant(re);
}

ExpectedAbsDet expected_abs_det(const Matrix<Complex>& a, double abs_tol) {
  require_small_rank(a);
  const int r = a.rows();
  ExpectedAbsDet out;
  out.lower_bound = std::abs(determinant(a)) * std::pow(2.0, -r);
  auto q = doubling_simpson([&](double th) { return std::fabs(phase_det(a, th)); },
                            -M_PI, M_PI, abs_tol * 2.0 * M_PI);
  out.mean = q.value / (2.0 * M_PI);
  out.quad_error = q.error_estimate / (2.0 * M_PI);
  out.converged = q.converged;
  out.bound_violated = out.mean + out.quad_error < out.lower_bound;
  return out;
}

SuccessProbability success_probability(const Matrix<Complex>& a, double c,
                                       long grid_points) {
  require_small_rank(a);
  SuccessProbability out;
  out.threshold = c;
  out.grid_points = grid_points;
  out.grid_resolution = 2.0 * M_PI / static_cast<double>(grid_points);
  long hits = 0;
  for (long g = 0; g < grid_points; ++g) {
    const double theta = -M_PI + out.grid_resolution * (static_cast<double>(g) + 0.5);
    if (std::fabs(phase_det(a, theta)) >= c) ++hits;
  }
  out.fraction = static_cast<double>(hits) / static_cast<double>(grid_points);
  return out;
}

}  // namespace qlo
