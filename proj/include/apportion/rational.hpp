#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace apportion {

// Exact arithmetic used for all probabilities and quotas. The hardest named
// counterexamples need ~100-digit integers, so the backend is GMP.
using BigInt = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

// Variable-precision float for the conditional Poisson solver. Precision is
// set per solve via BigFloat::default_precision (thread-local in boost).
using BigFloat = boost::multiprecision::mpfr_float;

inline int bits_to_decimal_digits(unsigned precision_bits) {
  // digits10 ~ bits * log10(2), rounded up with a small margin
  return static_cast<int>(precision_bits * 0.30103) + 2;
}

inline BigInt rat_floor(const Rat& x) {
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

inline BigInt rat_ceil(const Rat& x) { return -rat_floor(-x); }

inline bool is_integer(const Rat& x) {
  return boost::multiprecision::denominator(x) == 1;
}

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// Parses an exact decimal string ("0.07", "-3", "1/3", "2.5e-3") to a
// rational. Decimal digits are taken literally, never through binary floats.
inline Rat parse_rational(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty numeric string");
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    BigInt num(std::string(s.substr(0, slash)));
    BigInt den(std::string(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  }
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false, seen_digit = false;
  long exponent = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.') {
      if (seen_point) throw std::invalid_argument("malformed decimal");
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      exponent = std::stol(std::string(s.substr(i + 1)));
      break;
    } else {
      throw std::invalid_argument("malformed numeric string: " + std::string(s));
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed numeric string: " + std::string(s));
  // strip leading zeros; the GMP string constructor reads them as octal
  std::size_t nz = digits.find_first_not_of('0');
  digits = nz == std::string::npos ? "0" : digits.substr(nz);
  BigInt num(digits);
  if (negative) num = -num;
  long shift = exponent - frac_digits;
  BigInt pow10 = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
  return shift >= 0 ? Rat(num * pow10, 1) : Rat(num, pow10);
}

// Exact conversion: every finite binary float is a rational.
inline Rat rational_from_float(const BigFloat& x) {
  if (x == 0) return Rat(0);
  mpz_t z;
  mpz_init(z);
  mpfr_exp_t e = mpfr_get_z_2exp(z, x.backend().data());
  BigInt mant(z);
  mpz_clear(z);
  BigInt pow2 = BigInt(1) << static_cast<unsigned>(e < 0 ? -e : e);
  return e >= 0 ? Rat(mant * pow2, 1) : Rat(mant, pow2);
}

inline BigFloat float_from_rational(const Rat& x) {
  BigFloat num(boost::multiprecision::numerator(x));
  BigFloat den(boost::multiprecision::denominator(x));
  return num / den;
}

// "num/den" in lowest terms; integers render without the denominator.
inline std::string rat_to_string(const Rat& x) {
  if (is_integer(x)) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" +
         boost::multiprecision::denominator(x).str();
}

}  // namespace apportion
