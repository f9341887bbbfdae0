#pragma once

#include <vector>

#include "qlo/matrix.hpp"
#include "qlo/quadrature.hpp"

namespace qlo {

inline constexpr int kPhaseRankCap = 8;

// Coefficients (ascending) of p(z) = det(z^2 A + conj(A)), degree <= 2r,
// recovered by evaluation at the (2r+1)-st roots of unity and an inverse DFT.
// Checks |p(0)| = |det A| on the way out.
std::vector<Complex> det_polynomial(const Matrix<Complex>& a);

// det of the entrywise real part of e^{i theta} A
double phase_det(const Matrix<Complex>& a, double theta);

// evaluate a coefficient list at z
Complex eval_polynomial(const std::vector<Complex>& coeffs, Complex z);

struct ExpectedAbsDet {
  double mean = 0.0;         // E_theta |det Re(e^{i theta} A)|
  double quad_error = 0.0;
  bool converged = false;
  double lower_bound = 0.0;  // 2^{-r} |det A|
  bool bound_violated = false;  // mean + error < lower_bound; must never fire
};

ExpectedAbsDet expected_abs_det(const Matrix<Complex>& a, double abs_tol = 1e-10);

struct SuccessProbability {
  double fraction = 0.0;       // measure of {theta : |det Re(e^{i theta}A)| >= c}
  double threshold = 0.0;
  long grid_points = 0;
  double grid_resolution = 0.0;
};

SuccessProbability success_probability(const Matrix<Complex>& a, double c,
                                       long grid_points = 100000);

}  // namespace qlo
