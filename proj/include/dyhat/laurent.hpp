#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyhat/ratfun.hpp"
#include "dyhat/scalar_poly.hpp"

namespace dyhat {

using Complex = std::complex<double>;

/// Where a series is expanded. For two variables, "|u| > |v|" is AtInfinity
/// in u with coefficients polynomial in v, and "|v| > |u|" is AtInfinity in v.
enum class Region { AtInfinity, AtZero };

inline const char* region_name(Region r) { return r == Region::AtInfinity ? "infinity" : "zero"; }

template <typename C>
struct CoeffTraits;

template <>
struct CoeffTraits<ScalarPoly> {
  static ScalarPoly zero() { return ScalarPoly(); }
  static ScalarPoly from_rat(const BigRat& r) { return ScalarPoly(r); }
  static bool is_zero(const ScalarPoly& c) { return c.is_zero(); }
  static bool is_unit(const ScalarPoly& c) { return c.is_constant() && !c.is_zero(); }
  static ScalarPoly inverse(const ScalarPoly& c) { return ScalarPoly(c.vars(), BigRat(1 / c.constant_value())); }
  static ScalarPoly exp(const ScalarPoly& c) {
    if (!c.is_zero()) throw std::domain_error("series_exp: nonzero constant term in exact mode");
    return ScalarPoly(c.vars(), 1);
  }
  static constexpr bool numeric = false;
};

template <>
struct CoeffTraits<RatFun> {
  static RatFun zero() { return RatFun(); }
  static RatFun from_rat(const BigRat& r) { return RatFun(r); }
  static bool is_zero(const RatFun& c) { return c.is_zero(); }
  static bool is_unit(const RatFun& c) { return !c.is_zero(); }
  static RatFun inverse(const RatFun& c) { return RatFun(1) / c; }
  static RatFun exp(const RatFun& c) {
    if (!c.is_zero()) throw std::domain_error("series_exp: nonzero constant term in exact mode");
    return RatFun(1);
  }
  static constexpr bool numeric = false;
};

template <>
struct CoeffTraits<BigRat> {
  static BigRat zero() { return 0; }
  static BigRat from_rat(const BigRat& r) { return r; }
  static bool is_zero(const BigRat& c) { return c == 0; }
  static bool is_unit(const BigRat& c) { return c != 0; }
  static BigRat inverse(const BigRat& c) { return 1 / c; }
  static BigRat exp(const BigRat& c) {
    if (c != 0) throw std::domain_error("series_exp: nonzero constant term in exact mode");
    return 1;
  }
  static constexpr bool numeric = false;
};

template <>
struct CoeffTraits<Complex> {
  static Complex zero() { return 0.0; }
  static Complex from_rat(const BigRat& r) { return r.get_d(); }
  static bool is_zero(const Complex& c) { return c == 0.0; }
  static bool is_unit(const Complex& c) { return c != 0.0; }
  static Complex inverse(const Complex& c) { return 1.0 / c; }
  static Complex exp(const Complex& c) { return std::exp(c); }
  static constexpr bool numeric = true;
};

/// Laurent series in one variable with an explicit reliable window
/// [min_power, max_power]. Outside the window a coefficient is either known
/// to vanish or unknown:
///   exact series (Laurent polynomials): zero on both sides;
///   AtInfinity: zero above max_power, unknown below min_power;
///   AtZero:     zero below min_power, unknown above max_power.
/// Reading an unknown coefficient throws.
template <typename C>
class TruncatedLaurent {
 public:
  using Traits = CoeffTraits<C>;

  TruncatedLaurent() = default;
  TruncatedLaurent(std::string var, Region region, int lo, int hi, bool exact)
      : var_(std::move(var)), region_(region), lo_(lo), hi_(hi), exact_(exact) {
    if (hi_ < lo_ - 1) hi_ = lo_ - 1;
    c_.assign(static_cast<size_t>(hi_ - lo_ + 1), Traits::zero());
  }

  static TruncatedLaurent polynomial(const std::string& var, const std::map<int, C>& coeffs) {
    if (coeffs.empty()) return TruncatedLaurent(var, Region::AtInfinity, 0, -1, true);
    TruncatedLaurent s(var, Region::AtInfinity, coeffs.begin()->first, coeffs.rbegin()->first, true);
    for (const auto& [p, c] : coeffs) s.c_[p - s.lo_] = c;
    s.trim();
    return s;
  }
  static TruncatedLaurent constant(const std::string& var, const C& c) { return polynomial(var, {{0, c}}); }
  static TruncatedLaurent monomial(const std::string& var, int power, const C& c) {
    return polynomial(var, {{power, c}});
  }

  const std::string& var() const { return var_; }
  Region region() const { return region_; }
  int min_power() const { return lo_; }
  int max_power() const { return hi_; }
  bool exact() const { return exact_; }
  bool empty_window() const { return hi_ < lo_; }

  bool in_window(int p) const { return p >= lo_ && p <= hi_; }
  bool known(int p) const {
    if (in_window(p) || exact_) return true;
    return region_ == Region::AtInfinity ? p > hi_ : p < lo_;
  }
  bool is_zero() const {
    if (!exact_) return false;
    for (const auto& c : c_)
      if (!Traits::is_zero(c)) return false;
    return true;
  }

  C coefficient(int p) const {
    if (in_window(p)) return c_[static_cast<size_t>(p - lo_)];
    if (known(p)) return Traits::zero();
    throw std::out_of_range("TruncatedLaurent: power " + std::to_string(p) + " of " + var_ +
                            " outside reliable window [" + std::to_string(lo_) + "," + std::to_string(hi_) + "]");
  }
  C operator[](int p) const { return coefficient(p); }
  void set(int p, C value) {
    if (!in_window(p)) throw std::out_of_range("TruncatedLaurent::set outside window");
    c_[static_cast<size_t>(p - lo_)] = std::move(value);
  }
  C& ref(int p) { return c_.at(static_cast<size_t>(p - lo_)); }

  /// Forget everything outside [lo, hi] (intersection with the current window).
  TruncatedLaurent narrowed(int lo, int hi) const {
    int nlo = std::max(lo, lo_), nhi = std::min(hi, hi_);
    bool lost_low = nlo > lo_ && has_nonzero(lo_, nlo - 1);
    bool lost_high = nhi < hi_ && has_nonzero(nhi + 1, hi_);
    Region reg = region_;
    bool ex = exact_;
    if (ex) {
      if (lost_low && lost_high) throw std::domain_error("narrowed: cannot cut an exact series on both sides");
      if (lost_low) {
        ex = false;
        reg = Region::AtInfinity;
      } else if (lost_high) {
        ex = false;
        reg = Region::AtZero;
      }
    } else if ((reg == Region::AtInfinity && lost_high) || (reg == Region::AtZero && lost_low)) {
      throw std::domain_error("narrowed: would cut the known-zero side");
    }
    TruncatedLaurent out(var_, reg, nlo, nhi, ex);
    for (int p = nlo; p <= nhi; ++p) out.c_[p - nlo] = c_[p - lo_];
    return out;
  }

  template <typename D>
  TruncatedLaurent<D> map(const std::function<D(const C&)>& f) const {
    TruncatedLaurent<D> out(var_, region_, lo_, hi_, exact_);
    for (int p = lo_; p <= hi_; ++p) out.set(p, f(c_[p - lo_]));
    return out;
  }

  TruncatedLaurent operator-() const {
    TruncatedLaurent r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }

  friend TruncatedLaurent operator+(const TruncatedLaurent& a, const TruncatedLaurent& b) { return add(a, b, 1); }
  friend TruncatedLaurent operator-(const TruncatedLaurent& a, const TruncatedLaurent& b) { return add(a, b, -1); }
  friend TruncatedLaurent operator*(const TruncatedLaurent& a, const TruncatedLaurent& b) { return mul(a, b); }
  friend TruncatedLaurent operator*(const TruncatedLaurent& a, const C& s) {
    TruncatedLaurent r = a;
    for (auto& c : r.c_) c = c * s;
    return r;
  }
  friend TruncatedLaurent operator*(const C& s, const TruncatedLaurent& a) { return a * s; }

  /// Multiplicative inverse. The divisor's leading reliable coefficient (top
  /// power at infinity, bottom power at zero) must be a unit. `limit` bounds
  /// the computed tail: lowest power at infinity, highest power at zero.
  /// `where` picks the expansion for exact input and is ignored otherwise.
  TruncatedLaurent inverse(int limit, Region where = Region::AtInfinity) const {
    Region reg = exact_ ? where : region_;
    if (reg == Region::AtZero) return reflect().inverse(-limit, Region::AtInfinity).reflect();
    TruncatedLaurent b = *this;
    b.trim();
    if (b.empty_window()) throw std::domain_error("inverse of zero series");
    const C& lead = b.c_.back();
    if (!Traits::is_unit(lead)) throw std::domain_error("inverse: leading coefficient is not a unit");
    C inv = Traits::inverse(lead);
    int top = -b.hi_;
    if (b.exact_ && b.lo_ == b.hi_) return TruncatedLaurent::monomial(var_, top, inv);
    int lo = limit;
    if (!b.exact_) lo = std::max(lo, top - (b.hi_ - b.lo_));
    TruncatedLaurent r(var_, Region::AtInfinity, lo, top, false);
    // r_{top-j} = -inv * sum_{i=1..j} b_{hi-i} r_{top-j+i}
    for (int j = 0; j <= top - lo; ++j) {
      if (j == 0) {
        r.c_[top - lo] = inv;
        continue;
      }
      C acc = Traits::zero();
      for (int i = 1; i <= j; ++i) {
        int bp = b.hi_ - i;
        if (bp < b.lo_) break;
        acc = acc + b.c_[bp - b.lo_] * r.c_[top - j + i - lo];
      }
      r.c_[top - j - lo] = -(inv * acc);
    }
    return r;
  }

  /// Quotient; the divisor must be a monomial or an inexact series so that
  /// the window of the result is determined by the data.
  friend TruncatedLaurent operator/(const TruncatedLaurent& a, const TruncatedLaurent& b) {
    if (b.exact_) {
      TruncatedLaurent t = b;
      t.trim();
      if (t.lo_ != t.hi_) throw std::domain_error("division by an exact non-monomial needs an explicit limit");
      return a * t.inverse(0);
    }
    const int unbounded = b.region_ == Region::AtInfinity ? -1000000000 : 1000000000;
    return a * b.inverse(unbounded);
  }

  /// Swap u -> 1/u: powers negate, regions swap.
  TruncatedLaurent reflect() const {
    Region r = region_ == Region::AtInfinity ? Region::AtZero : Region::AtInfinity;
    TruncatedLaurent out(var_, r, -hi_, -lo_, exact_);
    for (int p = lo_; p <= hi_; ++p) out.c_[-p - out.lo_] = c_[p - lo_];
    return out;
  }

  /// Drop known-zero coefficients at the edges of the window.
  void trim() {
    if (exact_ || region_ == Region::AtInfinity)
      while (hi_ >= lo_ && Traits::is_zero(c_.back())) {
        c_.pop_back();
        --hi_;
      }
    if (exact_ || region_ == Region::AtZero)
      while (hi_ >= lo_ && Traits::is_zero(c_.front())) {
        c_.erase(c_.begin());
        ++lo_;
      }
    if (exact_ && hi_ < lo_) {
      lo_ = 0;
      hi_ = -1;
    }
  }

 private:
  bool has_nonzero(int a, int b) const {
    for (int p = a; p <= b; ++p)
      if (!Traits::is_zero(c_[p - lo_])) return true;
    return false;
  }

  static Region combined_region(const TruncatedLaurent& a, const TruncatedLaurent& b) {
    if (a.var_ != b.var_ && !(a.is_zero() || b.is_zero()))
      throw std::invalid_argument("TruncatedLaurent: variable mismatch " + a.var_ + " vs " + b.var_);
    if (a.exact_) return b.region_;
    if (b.exact_) return a.region_;
    if (a.region_ != b.region_) throw std::invalid_argument("TruncatedLaurent: region mismatch");
    return a.region_;
  }

  static TruncatedLaurent add(const TruncatedLaurent& a, const TruncatedLaurent& b, int sign) {
    Region reg = combined_region(a, b);
    const std::string& var = a.var_.empty() ? b.var_ : a.var_;
    bool ex = a.exact_ && b.exact_;
    int lo, hi;
    if (ex) {
      if (a.empty_window()) return sign > 0 ? b : -b;
      if (b.empty_window()) return a;
      lo = std::min(a.lo_, b.lo_);
      hi = std::max(a.hi_, b.hi_);
    } else if (reg == Region::AtInfinity) {
      lo = std::max(a.exact_ ? -1000000000 : a.lo_, b.exact_ ? -1000000000 : b.lo_);
      hi = std::max(a.empty_window() ? lo - 1 : a.hi_, b.empty_window() ? lo - 1 : b.hi_);
    } else {
      hi = std::min(a.exact_ ? 1000000000 : a.hi_, b.exact_ ? 1000000000 : b.hi_);
      lo = std::min(a.empty_window() ? hi + 1 : a.lo_, b.empty_window() ? hi + 1 : b.lo_);
    }
    TruncatedLaurent r(var, reg, lo, hi, ex);
    for (int p = r.lo_; p <= r.hi_; ++p) {
      C x = a.in_window(p) ? a.c_[p - a.lo_] : Traits::zero();
      if (b.in_window(p)) x = sign > 0 ? C(x + b.c_[p - b.lo_]) : C(x - b.c_[p - b.lo_]);
      r.c_[p - r.lo_] = std::move(x);
    }
    r.trim();
    return r;
  }

  static TruncatedLaurent mul(const TruncatedLaurent& a, const TruncatedLaurent& b) {
    Region reg = combined_region(a, b);
    const std::string& var = a.var_.empty() ? b.var_ : a.var_;
    if (a.is_zero() || b.is_zero()) return TruncatedLaurent(var, Region::AtInfinity, 0, -1, true);
    bool ex = a.exact_ && b.exact_;
    int lo, hi;
    if (ex || reg == Region::AtInfinity) {
      hi = a.hi_ + b.hi_;
      lo = a.lo_ + b.lo_;
      if (!ex) {
        if (!a.exact_) lo = std::max(lo, a.lo_ + b.hi_);
        if (!b.exact_) lo = std::max(lo, b.lo_ + a.hi_);
      }
    } else {
      lo = a.lo_ + b.lo_;
      hi = a.hi_ + b.hi_;
      if (!a.exact_) hi = std::min(hi, a.hi_ + b.lo_);
      if (!b.exact_) hi = std::min(hi, b.hi_ + a.lo_);
    }
    TruncatedLaurent r(var, reg, lo, hi, ex);
    for (int i = a.lo_; i <= a.hi_; ++i) {
      const C& x = a.c_[i - a.lo_];
      if (Traits::is_zero(x)) continue;
      int jlo = std::max(b.lo_, lo - i), jhi = std::min(b.hi_, hi - i);
      for (int j = jlo; j <= jhi; ++j) {
        const C& y = b.c_[j - b.lo_];
        if (Traits::is_zero(y)) continue;
        C& t = r.c_[i + j - lo];
        t = t + x * y;
      }
    }
    r.trim();
    return r;
  }

  std::string var_ = "u";
  Region region_ = Region::AtInfinity;
  int lo_ = 0, hi_ = -1;
  bool exact_ = true;
  std::vector<C> c_;

  template <typename D>
  friend class TruncatedLaurent;
};

/// exp of a series whose non-constant part lies strictly on the convergent
/// side (negative powers at infinity, positive at zero). In exact mode the
/// constant term must vanish. `limit` as for inverse().
template <typename C>
TruncatedLaurent<C> series_exp(const TruncatedLaurent<C>& s, int limit) {
  using T = CoeffTraits<C>;
  if (s.region() == Region::AtZero && !s.exact()) return series_exp(s.reflect(), -limit).reflect();
  if (s.exact() && s.min_power() > 0) return series_exp(s.reflect(), -limit).reflect();
  if (s.exact() && s.empty_window()) return TruncatedLaurent<C>::constant(s.var(), T::from_rat(1));
  if (s.max_power() > 0) throw std::domain_error("series_exp: positive powers in an expansion at infinity");
  C c0 = s.known(0) ? s.coefficient(0) : T::zero();
  C e0 = T::exp(c0);
  TruncatedLaurent<C> rest = s;
  if (rest.in_window(0)) rest.set(0, T::zero());
  rest.trim();
  int lo = limit;
  if (!rest.exact()) lo = std::max(lo, rest.min_power());
  auto cut = [&](const TruncatedLaurent<C>& x) {
    return x.empty_window() || x.min_power() >= lo ? x : x.narrowed(lo, x.max_power());
  };
  if (lo > 0) throw std::domain_error("series_exp: limit above constant term");
  TruncatedLaurent<C> sum(s.var(), Region::AtInfinity, lo, 0, false);
  sum.set(0, T::from_rat(1));
  TruncatedLaurent<C> term = TruncatedLaurent<C>::constant(s.var(), T::from_rat(1));
  for (int k = 1; k <= -lo; ++k) {
    term = cut(term * rest) * T::from_rat(BigRat(1, k));
    if (term.is_zero() || term.empty_window()) break;
    sum = sum + term;
  }
  sum = sum.narrowed(lo, 0);
  return sum * e0;
}

/// u -> u + gamma. At infinity the window is preserved: the coefficient of
/// u^p needs exactly the coefficients of u^n, n >= p. Exact input with
/// negative powers produces an infinite tail, cut at `limit`. Series at zero
/// can only be shifted when they are polynomials.
template <typename C>
TruncatedLaurent<C> series_shift(const TruncatedLaurent<C>& s, const C& gamma, int limit) {
  using T = CoeffTraits<C>;
  if (s.exact() && s.empty_window()) return s;
  if (s.region() == Region::AtZero && !(s.exact() && s.min_power() >= 0))
    throw std::domain_error("series_shift: series at zero must be a polynomial");
  bool poly = s.exact() && s.min_power() >= 0;
  int lo = poly ? 0 : (s.exact() ? limit : s.min_power());
  int hi = s.max_power();
  TruncatedLaurent<C> out(s.var(), poly ? Region::AtInfinity : s.region(), lo, hi, poly);
  std::vector<C> gpow{T::from_rat(1)};
  for (int p = lo; p <= hi; ++p) {
    C acc = T::zero();
    for (int n = std::max(p, s.min_power()); n <= hi; ++n) {
      const C a = s.coefficient(n);
      if (T::is_zero(a)) continue;
      int j = n - p;
      while (static_cast<int>(gpow.size()) <= j) gpow.push_back(gpow.back() * gamma);
      acc = acc + a * T::from_rat(binomial(n, j)) * gpow[j];
    }
    out.set(p, acc);
  }
  out.trim();
  return out;
}

/// Expansion of a rational function in `var` (other variables stay in the
/// RatFun coefficients). `limit` is the lowest power kept at infinity or the
/// highest power kept at zero.
TruncatedLaurent<RatFun> laurent_expand(const RatFun& r, const std::string& var, Region region, int limit);

/// Same, with coefficients required to be polynomials.
TruncatedLaurent<ScalarPoly> laurent_expand_poly(const RatFun& r, const std::string& var, Region region, int limit);

/// One row of a bivariate comparison table.
struct BivariateEntry {
  int u_power, v_power;
  RatFun value;
  bool trusted;
};

/// Coefficientwise difference expand(|u|>|v|) - expand(|v|>|u|) of r over the
/// box [ulo,uhi] x [vlo,vhi]. An entry is trusted when both expansions know it.
std::vector<BivariateEntry> region_difference(const RatFun& r, const std::string& u, const std::string& v,
                                              int ulo, int uhi, int vlo, int vhi);

/// The truncated formal delta: 1 on u^n v^m with n + m = -1.
inline BigRat delta_coefficient(int n, int m) { return n + m == -1 ? BigRat(1) : BigRat(0); }

}  // namespace dyhat
