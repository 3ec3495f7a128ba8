#pragma once

#include <map>
#include <ostream>
#include <string>

#include "dyhat/scalar_poly.hpp"

namespace dyhat {

/// Reduced quotient of two ScalarPoly. The denominator's grlex-leading
/// coefficient is 1, so equal functions have identical representations.
class RatFun {
 public:
  RatFun() : num_(0), den_(1) {}
  RatFun(const ScalarPoly& p) : num_(p), den_(ScalarPoly(p.vars(), 1)) {}  // NOLINT
  RatFun(const BigRat& c) : num_(c), den_(1) {}                           // NOLINT
  RatFun(long c) : num_(c), den_(1) {}                                    // NOLINT
  RatFun(const ScalarPoly& num, const ScalarPoly& den);

  static RatFun variable(const std::string& name, const VarList& vars = {kHbar}) {
    return RatFun(ScalarPoly::variable(name, vars));
  }

  const ScalarPoly& num() const { return num_; }
  const ScalarPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  BigRat constant_value() const { return num_.constant_value() / den_.constant_value(); }
  /// Numerator as a polynomial; throws unless the denominator is constant.
  ScalarPoly as_poly() const;

  RatFun operator-() const;
  RatFun& operator+=(const RatFun& o);
  RatFun& operator-=(const RatFun& o);
  RatFun& operator*=(const RatFun& o);
  RatFun& operator/=(const RatFun& o);
  friend RatFun operator+(RatFun a, const RatFun& b) { return a += b; }
  friend RatFun operator-(RatFun a, const RatFun& b) { return a -= b; }
  friend RatFun operator*(RatFun a, const RatFun& b) { return a *= b; }
  friend RatFun operator/(RatFun a, const RatFun& b) { return a /= b; }
  friend bool operator==(const RatFun& a, const RatFun& b);
  friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

  RatFun pow(int n) const;
  RatFun substitute(const std::map<std::string, BigRat>& values) const;
  RatFun compose(const std::string& var, const RatFun& value) const;
  /// Throws std::domain_error if the denominator vanishes at the point.
  BigRat evaluate(const std::map<std::string, BigRat>& values) const;

  std::string str() const;

 private:
  void reduce();
  ScalarPoly num_, den_;
};

std::ostream& operator<<(std::ostream& os, const RatFun& r);

/// Parses "num" or "(num)/(den)" style text where both sides are polynomials;
/// nested quotients are handled by the full expression grammar.
RatFun parse_ratfun(const std::string& text, const VarList& vars = {kHbar});

}  // namespace dyhat
