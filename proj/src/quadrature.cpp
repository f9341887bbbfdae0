#include "qlo/quadrature.hpp"

#include <cmath>

namespace qlo {

namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  double abs_tol;
  int max_depth;
  long evals = 0;
  double error = 0.0;
  bool converged = true;
};

double simpson_rule(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm), frm = (*st.f)(rm);
  st.evals += 2;
  const double left = simpson_rule(fa, flm, fm, m - a);
  const double right = simpson_rule(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth >= st.max_depth) {
    st.converged = false;
    st.error += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (std::fabs(delta) <= 15.0 * tol) {
    st.error += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return recurse(st, a, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
         recurse(st, m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol, int max_depth) {
  QuadResult r;
  if (a == b) {
    r.converged = true;
    return r;
  }
  SimpsonState st{&f, abs_tol, max_depth};
  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  st.evals = 3;
  const double whole = simpson_rule(fa, fm, fb, b - a);
  r.value = recurse(st, a, b, fa, fm, fb, whole, abs_tol, 0);
  r.error_estimate = st.error;
  r.converged = st.converged;
  r.evaluations = st.evals;
  return r;
}

QuadResult doubling_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol, int min_panels_log2, int max_panels_log2) {
  QuadResult r;
  if (a == b) {
    r.converged = true;
    return r;
  }
  auto composite = [&](long n_panels) {
    const double h = (b - a) / static_cast<double>(n_panels);
    double odd = 0.0, even = 0.0;
    for (long i = 1; i < n_panels; ++i) {
      const double fx = f(a + h * static_cast<double>(i));
      if (i % 2)
        odd += fx;
      else
        even += fx;
    }
    r.evaluations += n_panels + 1;
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
  };
  double prev = composite(1L << min_panels_log2);
  for (int k = min_panels_log2 + 1; k <= max_panels_log2; ++k) {
    const double cur = composite(1L << k);
    const double diff = std::fabs(cur - prev);
    if (diff <= abs_tol) {
      r.value = cur;
      r.error_estimate = diff;
      r.converged = true;
      return r;
    }
    prev = cur;
  }
  r.value = prev;
  r.error_estimate = abs_tol * 16;  // failed to stabilise
  r.converged = false;
  return r;
}

}  // namespace qlo
