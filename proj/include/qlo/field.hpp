#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

#include "qlo/rational.hpp"

namespace qlo {

using Complex = std::complex<double>;

// The three coefficient fields. Magnitude is the ordered type used for
// norms, pivoting and thresholds: exact for Rational, double otherwise.
template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  using Magnitude = Rational;
  static constexpr bool exact = true;
  static const char* name() { return "rational"; }
  static Magnitude abs(const Rational& x) { return rat_abs(x); }
  static double to_double(const Rational& x) { return rat_to_double(x); }
  static Rational from_double(double x) {
    Rational q(x);
    q.canonicalize();
    return q;
  }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static bool canonical_less(const Rational& a, const Rational& b) { return a < b; }
  static std::string to_string(const Rational& x) { return rat_to_string(x); }
};

template <>
struct FieldTraits<double> {
  using Magnitude = double;
  static constexpr bool exact = false;
  static const char* name() { return "real"; }
  static double abs(double x) { return std::fabs(x); }
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static bool is_zero(double x) { return x == 0.0; }
  static bool canonical_less(double a, double b) { return a < b; }
  static std::string to_string(double x);
};

template <>
struct FieldTraits<Complex> {
  using Magnitude = double;
  static constexpr bool exact = false;
  static const char* name() { return "complex"; }
  static double abs(const Complex& x) { return std::abs(x); }
  static double to_double(const Complex& x) { return x.real(); }
  static Complex from_double(double x) { return Complex(x, 0.0); }
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
  // lexicographic on (re, im): the tie-break order for sup queries
  static bool canonical_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  }
  static std::string to_string(const Complex& x);
};

template <class F>
struct CanonicalLess {
  bool operator()(const F& a, const F& b) const {
    return FieldTraits<F>::canonical_less(a, b);
  }
};

template <class F>
using Mag = typename FieldTraits<F>::Magnitude;

inline double mag_to_double(const Rational& m) { return rat_to_double(m); }
inline double mag_to_double(double m) { return m; }

std::string format_double(double x);  // shortest round-trip-exact form

inline std::string FieldTraits<double>::to_string(double x) { return format_double(x); }
inline std::string FieldTraits<Complex>::to_string(const Complex& x) {
  return format_double(x.real()) + (x.imag() < 0 ? "-" : "+") +
         format_double(std::fabs(x.imag())) + "i";
}

}  // namespace qlo
