#include "qlo/charfn.hpp"

#include <algorithm>
#include <cmath>

#include "qlo/exceptions.hpp"

namespace qlo {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Partition::Partition(std::vector<int> i_set, std::vector<int> j_set, int n)
    : I(std::move(i_set)), J(std::move(j_set)) {
  std::vector<char> seen(n, 0);
  for (int v : I) {
    if (v < 0 || v >= n || seen[v]) throw DimensionError("Partition: bad I index");
    seen[v] = 1;
  }
  for (int v : J) {
    if (v < 0 || v >= n || seen[v]) throw DimensionError("Partition: J overlaps I");
    seen[v] = 1;
  }
  if (static_cast<int>(I.size() + J.size()) != n)
    throw DimensionError("Partition: I u J must cover all indices");
}

Partition Partition::random_half(int n, Rng& rng) {
  std::vector<int> I, J;
  for (int v = 0; v < n; ++v) (rng.coin() ? J : I).push_back(v);
  return Partition(std::move(I), std::move(J), n);
}

DecoupledLinearForm decoupled_form(const QuadraticPoly<double>& f, const Partition& p,
                                   const std::vector<int>& xi_j,
                                   const std::vector<int>& xi_j_prime) {
  if (xi_j.size() != p.J.size() || xi_j_prime.size() != p.J.size())
    throw DimensionError("decoupled_form: outcome length mismatch");
  DecoupledLinearForm form;
  form.indices = p.I;
  form.coeffs.resize(p.I.size(), 0.0);
  for (std::size_t a = 0; a < p.I.size(); ++a) {
    const int l = p.I[a];
    double acc = 0.0;
    for (std::size_t b = 0; b < p.J.size(); ++b) {
      const int j = p.J[b];
      acc += f.sym(l, j) * static_cast<double>(xi_j[b] - xi_j_prime[b]);
    }
    form.coeffs[a] = acc;
  }
  // xi_I-free part: quadratic inside J plus linear on J (squares cancel)
  double c = 0.0;
  for (std::size_t b = 0; b < p.J.size(); ++b) {
    const int j = p.J[b];
    c += f.lin[j] * static_cast<double>(xi_j[b] - xi_j_prime[b]);
    for (std::size_t b2 = b + 1; b2 < p.J.size(); ++b2) {
      const int j2 = p.J[b2];
      c += f.sym(j, j2) *
           static_cast<double>(xi_j[b] * xi_j[b2] - xi_j_prime[b] * xi_j_prime[b2]);
    }
  }
  form.constant = c;
  return form;
}

double cosine_product_bound(const DecoupledLinearForm& form, double t) {
  double prod = 1.0;
  for (double a : form.coeffs) prod *= std::fabs(std::cos(kTwoPi * t * a));
  return prod;
}

CharFnEvaluator CharFnEvaluator::exact(const QuadraticPoly<Rational>& f,
                                       const EnumerationOptions& opt) {
  auto d = exact_distribution(f, opt);
  CharFnEvaluator ev;
  ev.atoms_.reserve(d.weights.size());
  const double inv = 1.0 / static_cast<double>(d.total);
  for (const auto& [v, c] : d.weights)
    ev.atoms_.emplace_back(rat_to_double(v), static_cast<double>(c) * inv);
  return ev;
}

CharFnEvaluator CharFnEvaluator::exact(const QuadraticPoly<double>& f, int cap) {
  if (f.n > cap) throw CapExceededError("char_magnitude: enumeration cap exceeded");
  // collapse identical doubles; for structured polynomials this shrinks the
  // atom list by orders of magnitude
  std::map<double, std::uint64_t> hist;
  std::vector<int> signs(f.n);
  const std::uint64_t total = std::uint64_t{1} << f.n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < f.n; ++i) signs[i] = (mask >> i) & 1 ? -1 : 1;
    ++hist[f.evaluate(signs)];
  }
  CharFnEvaluator ev;
  ev.atoms_.reserve(hist.size());
  const double inv = 1.0 / static_cast<double>(total);
  for (const auto& [v, c] : hist) ev.atoms_.emplace_back(v, static_cast<double>(c) * inv);
  return ev;
}

CharFnEvaluator CharFnEvaluator::monte_carlo(const QuadraticPoly<double>& f,
                                             std::uint64_t samples, std::uint64_t seed) {
  auto d = monte_carlo_distribution(f, samples, seed);
  CharFnEvaluator ev;
  ev.atoms_.reserve(d.weights.size());
  const double inv = 1.0 / static_cast<double>(d.total);
  for (const auto& [v, c] : d.weights)
    ev.atoms_.emplace_back(v, static_cast<double>(c) * inv);
  return ev;
}

double CharFnEvaluator::magnitude(double t) const {
  double re = 0.0, im = 0.0;
  for (const auto& [v, w] : atoms_) {
    const double phase = kTwoPi * t * v;
    re += w * std::cos(phase);
    im += w * std::sin(phase);
  }
  double m = std::sqrt(re * re + im * im);
  return m > 1.0 ? 1.0 : m;
}

DecouplingReport decoupling_check(const QuadraticPoly<double>& f, const Partition& p,
                                  double t, DecouplingMode mode,
                                  const DecouplingOptions& opt) {
  DecouplingReport rep;
  rep.mode = mode;
  rep.tol = opt.tol;

  const int nj = static_cast<int>(p.J.size());
  const int ni = static_cast<int>(p.I.size());

  if (mode == DecouplingMode::Exact) {
    if (ni + 2 * nj > opt.cap)
      throw CapExceededError("decoupling_check: |I| + 2|J| exceeds cap");
    rep.lhs_sq = [&] {
      double m = CharFnEvaluator::exact(f, opt.cap).magnitude(t);
      return m * m;
    }();
    // Gray-code walk over the 2|J| outcome bits with incremental A_l updates
    const int dims = 2 * nj;
    std::vector<double> coef(static_cast<std::size_t>(ni) * dims);
    for (int a = 0; a < ni; ++a)
      for (int b = 0; b < nj; ++b) {
        const double v = f.sym(p.I[a], p.J[b]);
        coef[static_cast<std::size_t>(a) * dims + b] = v;
        coef[static_cast<std::size_t>(a) * dims + nj + b] = -v;
      }
    std::vector<int> y(dims, 1);
    std::vector<double> A(ni, 0.0);  // all-ones start: xi_J = xi'_J -> A_l = 0
    double sum = 0.0;
    auto product = [&] {
      double prod = 1.0;
      for (int a = 0; a < ni; ++a) prod *= std::fabs(std::cos(kTwoPi * t * A[a]));
      return prod;
    };
    sum += product();
    const std::uint64_t steps = std::uint64_t{1} << dims;
    for (std::uint64_t step = 1; step < steps; ++step) {
      const int d = __builtin_ctzll(step);
      const double flip = -2.0 * static_cast<double>(y[d]);
      for (int a = 0; a < ni; ++a) A[a] += flip * coef[static_cast<std::size_t>(a) * dims + d];
      y[d] = -y[d];
      sum += product();
    }
    rep.rhs = sum / static_cast<double>(steps);
  } else {
    rep.lhs_sq = [&] {
      double m = CharFnEvaluator::monte_carlo(f, opt.mc_samples, opt.seed).magnitude(t);
      return m * m;
    }();
    Rng rng(opt.seed + 0x9e3779b9ULL);
    std::vector<int> xi(nj), xi_prime(nj);
    double sum = 0.0;
    for (std::uint64_t s = 0; s < opt.mc_samples; ++s) {
      for (int b = 0; b < nj; ++b) xi[b] = rng.coin() ? 1 : -1;
      for (int b = 0; b < nj; ++b) xi_prime[b] = rng.coin() ? 1 : -1;
      sum += cosine_product_bound(decoupled_form(f, p, xi, xi_prime), t);
    }
    rep.rhs = sum / static_cast<double>(opt.mc_samples);
  }
  rep.holds = rep.lhs_sq <= rep.rhs + rep.tol;
  return rep;
}

EsseenResult esseen_bound(const CharFnEvaluator& phi, double s, double eps_freq,
                          double c_impl) {
  if (!(s > 0.0) || !(eps_freq > 0.0))
    throw DimensionError("esseen_bound: s and eps_freq must be positive");
  EsseenResult res;
  res.s = s;
  res.eps_freq = eps_freq;
  res.c_impl = c_impl;
  auto q = adaptive_simpson([&](double t) { return phi.magnitude(t); }, -eps_freq,
                            eps_freq, 1e-9, 30);
  res.integral = q.value;
  res.quad_error = q.error_estimate;
  res.converged = q.converged;
  res.bound = c_impl * (s + 1.0 / eps_freq) * q.value;
  return res;
}

double esseen_worst_ratio(std::uint64_t seed_lo, std::uint64_t seed_hi) {
  double worst = 0.0;
  for (std::uint64_t seed = seed_lo; seed < seed_hi; ++seed) {
    Rng rng(seed);
    const int n = rng.range(4, 12);
    QuadraticPoly<Rational> f(n);
    for (auto& c : f.deg2) c = make_rational(rng.range(-4, 4), 4);
    for (auto& c : f.lin) c = make_rational(rng.range(-4, 4), 4);
    f.constant = make_rational(rng.range(-4, 4), 4);

    const auto dist = exact_distribution(f);
    const auto phi = CharFnEvaluator::exact(f);
    const Rational x = max_point_probability(dist).value;
    for (double s : {1.0, 2.0}) {
      for (double eps : {0.5, 1.0}) {
        const Rational truth =
            small_ball_probability(dist, x, FieldTraits<Rational>::from_double(s));
        const auto raw = esseen_bound(phi, s, eps, 1.0);
        if (raw.bound <= 0.0) continue;
        const double ratio = rat_to_double(truth) / raw.bound;
        if (ratio > worst) worst = ratio;
      }
    }
  }
  return worst;
}

}  // namespace qlo
