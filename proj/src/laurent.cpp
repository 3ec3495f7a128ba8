#include "dyhat/laurent.hpp"

namespace dyhat {

namespace {

TruncatedLaurent<RatFun> poly_in(const ScalarPoly& p, const std::string& var) {
  std::map<int, RatFun> cs;
  auto coeffs = p.coefficients_in(var);
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (!coeffs[i].is_zero()) cs.emplace(static_cast<int>(i), RatFun(coeffs[i]));
  return TruncatedLaurent<RatFun>::polynomial(var, cs);
}

}  // namespace

TruncatedLaurent<RatFun> laurent_expand(const RatFun& r, const std::string& var, Region region, int limit) {
  auto num = poly_in(r.num(), var);
  auto den = poly_in(r.den(), var);
  if (den.min_power() == den.max_power()) {
    // monomial denominator: the result is a Laurent polynomial
    return num * den.inverse(0);
  }
  auto inv = den.inverse(region == Region::AtInfinity ? limit - num.max_power() : limit - num.min_power(), region);
  auto out = num * inv;
  return region == Region::AtInfinity ? out.narrowed(limit, out.max_power()) : out.narrowed(out.min_power(), limit);
}

TruncatedLaurent<ScalarPoly> laurent_expand_poly(const RatFun& r, const std::string& var, Region region,
                                                 int limit) {
  auto s = laurent_expand(r, var, region, limit);
  return s.map<ScalarPoly>([&](const RatFun& c) {
    if (!c.is_polynomial())
      throw std::domain_error("laurent_expand: coefficient " + c.str() + " is not a polynomial");
    return c.as_poly();
  });
}

std::vector<BivariateEntry> region_difference(const RatFun& r, const std::string& u, const std::string& v,
                                              int ulo, int uhi, int vlo, int vhi) {
  // |u| > |v|: series at infinity in u, coefficients Laurent polynomials in v
  auto su = laurent_expand(r, u, Region::AtInfinity, ulo);
  auto sv = laurent_expand(r, v, Region::AtInfinity, vlo);
  auto coeff_in = [](const RatFun& c, const std::string& var, int power, bool& ok) -> RatFun {
    // c is a rational function whose denominator is a monomial in var at most
    auto t = laurent_expand(c, var, Region::AtInfinity, power);
    ok = ok && t.known(power);
    return t.known(power) ? t.coefficient(power) : RatFun();
  };
  std::vector<BivariateEntry> out;
  for (int n = ulo; n <= uhi; ++n)
    for (int m = vlo; m <= vhi; ++m) {
      bool ok = su.known(n) && sv.known(m);
      RatFun a, b;
      if (ok) {
        a = coeff_in(su.coefficient(n), v, m, ok);
        b = coeff_in(sv.coefficient(m), u, n, ok);
      }
      out.push_back({n, m, ok ? a - b : RatFun(), ok});
    }
  return out;
}

}  // namespace dyhat
