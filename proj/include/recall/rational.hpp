#pragma once

// Exact rational scalar used for payoffs, chance weights, polynomial
// coefficients and all reduction constants. Iterative solvers convert to
// double at evaluation boundaries.

#include <gmpxx.h>

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace recall {

using Rat = mpq_class;

inline double to_double(const Rat& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

// Round-trip-exact decimal form of a double (shortest %.17g is enough).
inline std::string double_to_string(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

// Conversion helper so evaluation code can be templated on the scalar.
template <class T>
inline T scalar_cast(const Rat& q);

template <>
inline Rat scalar_cast<Rat>(const Rat& q) {
  return q;
}
template <>
inline double scalar_cast<double>(const Rat& q) {
  return q.get_d();
}

// Parses "p/q", integers, plain decimals ("0.5", "-3.25") and scientific
// notation ("1e-3", "2.5e4") into an exact rational.
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpz_class num(s.substr(0, slash));
    mpz_class den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    Rat q(num, den);
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    neg = (s[pos] == '-');
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits += c;
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw std::invalid_argument("bad rational literal: " + s);
  long exp10 = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    exp10 = std::stol(s.substr(pos + 1));
    pos = s.size();
  }
  if (pos != s.size()) throw std::invalid_argument("bad rational literal: " + s);
  mpz_class mant(digits.empty() ? "0" : digits);
  if (neg) mant = -mant;
  long net = exp10 - frac_digits;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
  Rat q = net >= 0 ? Rat(mant * pow10) : Rat(mant, pow10);
  q.canonicalize();
  return q;
}

// Canonical serialization: "p" for integers, "p/q" otherwise.
inline std::string rat_to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

}  // namespace recall
