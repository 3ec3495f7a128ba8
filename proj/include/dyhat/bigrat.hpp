#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dyhat {

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator (GMP canonicalizes after every operation).
using BigRat = mpq_class;
using BigInt = mpz_class;

inline BigRat make_rat(long num, long den = 1) {
  if (den == 0) throw std::domain_error("make_rat: zero denominator");
  BigRat r(num, den);
  r.canonicalize();
  return r;
}

/// "p/q" or "p" for integers.
inline std::string to_string(const BigRat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

BigRat parse_rat(const std::string& text);

/// Generalized binomial coefficient binom(top, k) for integer top (possibly
/// negative) and k >= 0.
BigRat binomial(long top, long k);

BigRat factorial(long n);

}  // namespace dyhat
