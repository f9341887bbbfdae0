#include "qlo/poly.hpp"

#include <cstdio>

namespace qlo {

std::string format_double(double x) {
  // shortest representation that round-trips exactly
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    double back = std::strtod(buf, nullptr);
    if (back == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

ScaledPoly scale_poly(const QuadraticPoly<Rational>& f) {
  const int n = f.n;
  ScaledPoly sp;
  sp.n = n;
  sp.scale = 1;
  auto fold = [&](const Rational& q) {
    mpz_lcm(sp.scale.get_mpz_t(), sp.scale.get_mpz_t(), q.get_den().get_mpz_t());
  };
  for (const auto& c : f.deg2) fold(c);
  for (const auto& c : f.lin) fold(c);
  fold(f.constant);

  auto scaled = [&](const Rational& q) -> BigInt {
    Rational r = q * Rational(sp.scale);
    r.canonicalize();
    return r.get_num();
  };
  sp.offdiag.assign(static_cast<std::size_t>(n) * n, BigInt(0));
  sp.lin.resize(n);
  sp.constant = scaled(f.constant);
  for (int i = 0; i < n; ++i) {
    sp.lin[i] = scaled(f.lin[i]);
    sp.constant += scaled(f.coeff2(i, i));  // x_i^2 = 1
    for (int j = i + 1; j < n; ++j) {
      BigInt m = scaled(f.coeff2(i, j));
      sp.offdiag[static_cast<std::size_t>(i) * n + j] = m;
      sp.offdiag[static_cast<std::size_t>(j) * n + i] = m;
    }
  }
  sp.value_bound = abs(sp.constant);
  for (const auto& z : sp.lin) sp.value_bound += abs(z);
  for (const auto& z : sp.offdiag) sp.value_bound += abs(z);  // counts pairs twice; safe
  return sp;
}

}  // namespace detail

namespace {

// int64 mirrors of the scaled coefficients, used when the value bound proves
// overflow impossible
struct Int64Poly {
  std::vector<std::int64_t> offdiag, lin;
  std::int64_t constant;
};

Int64Poly narrow(const detail::ScaledPoly& sp) {
  Int64Poly p;
  p.offdiag.resize(sp.offdiag.size());
  for (std::size_t k = 0; k < sp.offdiag.size(); ++k) p.offdiag[k] = to_int64(sp.offdiag[k]);
  p.lin.resize(sp.lin.size());
  for (std::size_t k = 0; k < sp.lin.size(); ++k) p.lin[k] = to_int64(sp.lin[k]);
  p.constant = to_int64(sp.constant);
  return p;
}

int chunk_bits(int n) { return n >= 14 ? 8 : 0; }

}  // namespace

PointMass<Rational> exact_distribution(const QuadraticPoly<Rational>& f,
                                       const EnumerationOptions& opt) {
  if (f.n > opt.cap)
    throw CapExceededError("exact_distribution: n=" + std::to_string(f.n) +
                           " exceeds enumeration cap " + std::to_string(opt.cap));
  const detail::ScaledPoly sp = detail::scale_poly(f);
  const int fixed = chunk_bits(f.n);
  const std::int64_t chunks = std::int64_t{1} << fixed;

  const bool narrow_ok = mpz_sizeinbase(sp.value_bound.get_mpz_t(), 2) <= 61;

  PointMass<Rational> out;
  out.mode = PointMass<Rational>::Mode::Exact;
  out.n = f.n;

  if (narrow_ok) {
    const Int64Poly ip = narrow(sp);
    using Hist = std::unordered_map<std::int64_t, std::uint64_t>;
    auto results = run_chunks<Hist>(chunks, opt.workers, [&](std::int64_t chunk) {
      Hist h;
      detail::enumerate_subcube<std::int64_t>(
          sp, ip.offdiag, ip.lin, ip.constant, fixed,
          static_cast<std::uint64_t>(chunk), [&](std::int64_t v) { ++h[v]; });
      return h;
    });
    std::map<std::int64_t, std::uint64_t> merged;
    for (const auto& h : results)
      for (const auto& [v, c] : h) merged[v] += c;
    for (const auto& [v, c] : merged) {
      Rational key(BigInt(static_cast<long>(v)), sp.scale);
      key.canonicalize();
      out.weights.emplace(std::move(key), c);
    }
  } else {
    using Hist = std::map<BigInt, std::uint64_t>;
    auto results = run_chunks<Hist>(chunks, opt.workers, [&](std::int64_t chunk) {
      Hist h;
      detail::enumerate_subcube<BigInt>(sp, sp.offdiag, sp.lin, sp.constant, fixed,
                                        static_cast<std::uint64_t>(chunk),
                                        [&](const BigInt& v) { ++h[v]; });
      return h;
    });
    std::map<BigInt, std::uint64_t> merged;
    for (const auto& h : results)
      for (const auto& [v, c] : h) merged[v] += c;
    for (const auto& [v, c] : merged) {
      Rational key(v, sp.scale);
      key.canonicalize();
      out.weights.emplace(std::move(key), c);
    }
  }
  out.total = std::uint64_t{1} << f.n;
  return out;
}

namespace {

template <class F, class K>
PointMass<K> mc_impl(const QuadraticPoly<F>& f, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw DimensionError("monte_carlo_distribution: need samples >= 1");
  Rng rng(seed);
  PointMass<K> out;
  out.mode = PointMass<K>::Mode::MonteCarlo;
  out.n = f.n;
  std::vector<int> signs(f.n);
  for (std::uint64_t t = 0; t < samples; ++t) {
    std::uint64_t bits = 0;
    for (int i = 0; i < f.n; ++i) {
      if (i % 64 == 0) bits = rng.next();
      signs[i] = (bits >> (i % 64)) & 1 ? -1 : 1;
    }
    out.add(f.evaluate(signs));
  }
  return out;
}

}  // namespace

PointMass<Rational> monte_carlo_distribution(const QuadraticPoly<Rational>& f,
                                             std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw DimensionError("monte_carlo_distribution: need samples >= 1");
  // evaluate through the scaled integer form; mpq arithmetic per sample would
  // dominate the run otherwise
  const detail::ScaledPoly sp = detail::scale_poly(f);
  if (mpz_sizeinbase(sp.value_bound.get_mpz_t(), 2) > 61)
    return mc_impl<Rational, Rational>(f, samples, seed);
  const Int64Poly ip = narrow(sp);
  const int n = f.n;
  Rng rng(seed);
  PointMass<Rational> out;
  out.mode = PointMass<Rational>::Mode::MonteCarlo;
  out.n = n;
  std::map<std::int64_t, std::uint64_t> hist;
  std::vector<int> signs(n);
  for (std::uint64_t t = 0; t < samples; ++t) {
    std::uint64_t bits = 0;
    for (int i = 0; i < n; ++i) {
      if (i % 64 == 0) bits = rng.next();
      signs[i] = (bits >> (i % 64)) & 1 ? -1 : 1;
    }
    std::int64_t v = ip.constant;
    for (int i = 0; i < n; ++i) {
      std::int64_t si = ip.lin[i];
      const std::size_t row = static_cast<std::size_t>(i) * n;
      for (int j = i + 1; j < n; ++j)
        si += signs[j] > 0 ? ip.offdiag[row + j] : -ip.offdiag[row + j];
      v += signs[i] > 0 ? si : -si;
    }
    ++hist[v];
  }
  for (const auto& [v, c] : hist) {
    Rational key(BigInt(static_cast<long>(v)), sp.scale);
    key.canonicalize();
    out.weights.emplace(std::move(key), c);
  }
  out.total = samples;
  return out;
}

PointMass<double> monte_carlo_distribution(const QuadraticPoly<double>& f,
                                           std::uint64_t samples, std::uint64_t seed) {
  return mc_impl<double, double>(f, samples, seed);
}

PointMass<Complex> monte_carlo_distribution(const QuadraticPoly<Complex>& f,
                                            std::uint64_t samples, std::uint64_t seed) {
  return mc_impl<Complex, Complex>(f, samples, seed);
}

}  // namespace qlo
