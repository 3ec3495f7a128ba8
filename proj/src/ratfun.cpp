#include "dyhat/ratfun.hpp"

#include <stdexcept>

#include "expr_parser.hpp"

namespace dyhat {

RatFun::RatFun(const ScalarPoly& num, const ScalarPoly& den) : num_(num), den_(den) {
  if (den_.is_zero()) throw std::domain_error("RatFun: zero denominator");
  reduce();
}

void RatFun::reduce() {
  if (num_.is_zero()) {
    num_ = ScalarPoly(num_.vars());
    den_ = ScalarPoly(num_.vars(), 1);
    return;
  }
  if (!den_.is_constant()) {
    ScalarPoly g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = num_.divide_exact(g);
      den_ = den_.divide_exact(g);
    }
  }
  BigRat lc = den_.leading().coef;
  if (lc != 1) {
    BigRat inv = 1 / lc;
    num_ *= inv;
    den_ *= inv;
  }
}

ScalarPoly RatFun::as_poly() const {
  if (!den_.is_constant()) throw std::domain_error("RatFun is not a polynomial: " + str());
  return num_ * BigRat(1 / den_.constant_value());
}

RatFun RatFun::operator-() const {
  RatFun r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFun& RatFun::operator+=(const RatFun& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
  } else if (den_.is_constant() && o.den_.is_constant()) {
    num_ = num_ * o.den_.constant_value() + o.num_ * den_.constant_value();
    den_ *= o.den_.constant_value();
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
  }
  reduce();
  return *this;
}

RatFun& RatFun::operator-=(const RatFun& o) { return *this += -o; }

RatFun& RatFun::operator*=(const RatFun& o) {
  if (is_zero() || o.is_zero()) return *this = RatFun();
  if (den_.is_constant() && o.den_.is_constant()) {
    num_ *= o.num_;
    den_ *= o.den_;
    reduce();
    return *this;
  }
  // cross-cancel before multiplying to keep gcds small
  ScalarPoly g1 = poly_gcd(num_, o.den_);
  ScalarPoly g2 = poly_gcd(o.num_, den_);
  num_ = num_.divide_exact(g1) * o.num_.divide_exact(g2);
  den_ = den_.divide_exact(g2) * o.den_.divide_exact(g1);
  BigRat lc = den_.leading().coef;
  if (lc != 1) {
    num_ *= BigRat(1 / lc);
    den_ *= BigRat(1 / lc);
  }
  return *this;
}

RatFun& RatFun::operator/=(const RatFun& o) {
  if (o.is_zero()) throw std::domain_error("RatFun: division by zero");
  return *this *= RatFun(o.den_, o.num_);
}

bool operator==(const RatFun& a, const RatFun& b) {
  // both sides reduced, so cross-multiplication is only needed when variable
  // lists differ in order
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
}

RatFun RatFun::pow(int n) const {
  if (n < 0) return RatFun(1) / pow(-n);
  return RatFun(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)));
}

RatFun RatFun::substitute(const std::map<std::string, BigRat>& values) const {
  ScalarPoly d = den_.substitute(values);
  if (d.is_zero()) throw std::domain_error("RatFun::substitute: denominator vanishes");
  return RatFun(num_.substitute(values), d);
}

RatFun RatFun::compose(const std::string& var, const RatFun& value) const {
  auto horner = [&](const ScalarPoly& p) {
    auto cs = p.coefficients_in(var);
    RatFun acc;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * value + RatFun(*it);
    return acc;
  };
  return horner(num_) / horner(den_);
}

BigRat RatFun::evaluate(const std::map<std::string, BigRat>& values) const {
  BigRat d = den_.evaluate(values);
  if (d == 0) throw std::domain_error("RatFun::evaluate: pole at evaluation point");
  return num_.evaluate(values) / d;
}

std::string RatFun::str() const {
  if (den_.is_constant() && den_.constant_value() == 1) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

std::ostream& operator<<(std::ostream& os, const RatFun& r) { return os << r.str(); }

RatFun parse_ratfun(const std::string& text, const VarList& vars) {
  return ExprParser<RatFun>(
             text, [&](const BigRat& c) { return RatFun(ScalarPoly(vars, c)); },
             [&](const std::string& name) { return RatFun::variable(name, vars); },
             [](const RatFun& a, const RatFun& b) { return a / b; })
      .parse();
}

}  // namespace dyhat
