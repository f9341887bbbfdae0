#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qlo {

// Exact field element: arbitrary-precision numerator/denominator, always
// canonicalized. All witness and pipeline arithmetic runs on this type.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline double rat_to_double(const Rational& q) { return q.get_d(); }

inline std::string rat_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p", "p/q", and decimal strings like "-0.25" or "1e-3".
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s.find_first_of(".eE") == std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0)
      throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
  }
  // decimal / scientific form: parse mantissa and exponent exactly
  std::string t = s;
  long exp10 = 0;
  auto epos = t.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(t.substr(epos + 1));
    t = t.substr(0, epos);
  }
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long>(t.size() - dot - 1);
    t.erase(dot, 1);
  }
  if (t.empty() || t == "-" || t == "+")
    throw std::invalid_argument("bad rational literal: " + s);
  BigInt mant;
  if (mant.set_str(t, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  Rational q(mant);
  BigInt pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0)
    q *= Rational(pow10);
  else
    q /= Rational(pow10);
  q.canonicalize();
  return q;
}

inline bool fits_int64(const BigInt& z) {
  return z.fits_slong_p() ||
         (mpz_sizeinbase(z.get_mpz_t(), 2) <= 62);
}

inline std::int64_t to_int64(const BigInt& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("bigint out of int64 range");
  return static_cast<std::int64_t>(z.get_si());
}

}  // namespace qlo
