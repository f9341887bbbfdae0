#pragma once

#include <functional>

namespace qlo {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  long evaluations = 0;
};

// Adaptive Simpson with absolute tolerance; error estimate is the usual
// Richardson |S2-S1|/15 accumulated over accepted intervals.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol = 1e-9, int max_depth = 30);

// Composite Simpson with panel doubling until two successive refinements agree
// to `abs_tol`. Suited to |.|-kinked integrands where adaptivity stalls.
QuadResult doubling_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol = 1e-10, int min_panels_log2 = 4,
                            int max_panels_log2 = 22);

}  // namespace qlo
