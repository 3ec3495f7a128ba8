#include "dyhat/pairing.hpp"

#include <sstream>
#include <stdexcept>

#include "dyhat/laurent.hpp"

namespace dyhat {

namespace {

const VarList& vars_uv() {
  static const VarList v{kHbar, "u", "v"};
  return v;
}
RatFun var(const std::string& name) { return RatFun::variable(name, vars_uv()); }
RatFun hbar_q() { return var(kHbar); }

RatFun hbar_pow(int n) {
  const RatFun h = hbar_q();
  return n >= 0 ? h.pow(n) : RatFun(1) / h.pow(-n);
}

int rank(Gen g) { return g == Gen::F ? 0 : g == Gen::H ? 1 : 2; }

// <H_i, Hm_j>: coefficient of u^{-i} v^j in <h+(u), h-(v)>, read off the table.
RatFun gen_h(const PairingTable& t, int i, int j) {
  if (i == 0) return RatFun(j == 0 ? 1 : 0);
  if (i - 1 > t.modes || j > t.modes) throw std::out_of_range("pairing: h index outside the table");
  return -(hbar_q() * hbar_q()) * t.hh[i - 1][j];
}

}  // namespace

PairingTable pairing_table(int modes) {
  if (modes < 0) throw std::invalid_argument("pairing_table: modes must be >= 0");
  PairingTable t;
  t.modes = modes;
  const RatFun inv = RatFun(1) / hbar_q();
  auto square = [&] { return std::vector<std::vector<RatFun>>(modes + 1, std::vector<RatFun>(modes + 1)); };
  t.ef = square();
  t.fe = square();
  t.hh = square();
  for (int k = 0; k <= modes; ++k)
    for (int l = 0; l <= modes; ++l) {
      if (k == l) t.ef[k][l] = t.fe[k][l] = -inv;
      if (l <= k) t.hh[k][l] = RatFun(BigRat(-2) * binomial(k, l)) * hbar_pow(k - l - 1);
    }
  t.cd = inv;
  return t;
}

Residual verify_pairing_resummation(int modes) {
  Residual r;
  r.id = "pairing-table";
  const PairingTable t = pairing_table(modes);
  const RatFun u = var("u"), v = var("v"), h = hbar_q();
  // v^l of the u^{-k-1} coefficient, both expansions exact here
  auto coeff = [&](const RatFun& f, int upow, int vpow) {
    auto su = laurent_expand(f, "u", Region::AtInfinity, upow);
    auto sv = laurent_expand(su.coefficient(upow), "v", Region::AtZero, vpow);
    return sv.coefficient(vpow);
  };
  auto check = [&](const RatFun& want, const RatFun& got, const std::string& where) {
    RatFun d = want - got;
    r.record_exact(d.is_zero(), where, d.str());
  };
  const RatFun ef = RatFun(1) / (h * (u - v));
  const RatFun hh = (u - v + h) / (u - v - h);
  for (int k = 0; k <= modes; ++k)
    for (int l = 0; l <= modes; ++l) {
      // e+(u) = sum e_k u^{-k-1}, f-(v) = -sum f_{-l-1} v^l
      const RatFun c = coeff(ef, -k - 1, l);
      std::ostringstream a, b;
      a << "<e_" << k << ",f_" << -l - 1 << ">";
      b << "<f_" << k << ",e_" << -l - 1 << ">";
      check(c, -t.ef[k][l], a.str());
      check(c, -t.fe[k][l], b.str());
    }
  for (int i = 0; i <= modes + 1; ++i)
    for (int j = 0; j <= modes; ++j) {
      std::ostringstream os;
      os << "<H_" << i << ",Hm_" << j << ">";
      check(coeff(hh, -i, j), gen_h(t, i, j), os.str());
    }
  r.finish();
  return r;
}

std::string mode_name(const ModeRef& m) { return std::string(gen_name(m.g)) + "_" + std::to_string(m.k); }

RatFun pair_modes(const PairingTable& t, const ModeRef& a, const ModeRef& b) {
  if (a.k < 0 || b.k >= 0) throw std::invalid_argument("pair_modes: expects a positive and a negative mode");
  const int l = -b.k - 1;
  if (a.k > t.modes || l > t.modes) throw std::out_of_range("pair_modes: mode outside the table");
  if (a.g == Gen::E && b.g == Gen::F) return t.ef[a.k][l];
  if (a.g == Gen::F && b.g == Gen::E) return t.fe[a.k][l];
  if (a.g == Gen::H && b.g == Gen::H) return t.hh[a.k][l];
  return RatFun(0);
}

std::vector<CoproductTerm> low_coproduct(const ModeRef& a) {
  const RatFun h = hbar_q();
  std::vector<CoproductTerm> out;
  out.push_back({RatFun(1), false, true, a, a});
  out.push_back({RatFun(1), true, false, a, a});
  if (a.k == 0) return out;
  if (a.k != 1) throw std::invalid_argument("low_coproduct: only degrees 0 and 1");
  switch (a.g) {
    case Gen::E: out.push_back({h, false, false, {Gen::H, 0}, {Gen::E, 0}}); break;
    case Gen::F: out.push_back({h, false, false, {Gen::F, 0}, {Gen::H, 0}}); break;
    case Gen::H:
      out.push_back({h, false, false, {Gen::H, 0}, {Gen::H, 0}});
      out.push_back({RatFun(-2) * h, false, false, {Gen::F, 0}, {Gen::E, 0}});
      break;
  }
  return out;
}

bool pair_with_product(const PairingTable& t, const ModeRef& a, const ModeRef& b1, const ModeRef& b2, RatFun& out) {
  if (rank(b1.g) <= rank(b2.g)) {
    // F-H-E ordered: a single generator meets one factor, the other pairs with
    // the unit (counit zero); e with f f and f with e e vanish by weight.
    if (a.g != Gen::H || b1.g != Gen::H || b2.g != Gen::H) {
      out = RatFun(0);
      return true;
    }
    // h_k = H_{k+1}/hbar, h_{-p-1} = (delta_{p0} - Hm_p)/hbar, and
    // <H_i, Hm_p Hm_q> = sum_{i1+i2=i} <H_i1, Hm_p><H_i2, Hm_q>.
    const int i = a.k + 1, p = -b1.k - 1, q = -b2.k - 1;
    RatFun s;
    if (p == 0) s = s - gen_h(t, i, q);
    if (q == 0) s = s - gen_h(t, i, p);
    for (int i1 = 0; i1 <= i; ++i1) s = s + gen_h(t, i1, p) * gen_h(t, i - i1, q);
    out = s * hbar_pow(-3);
    return true;
  }
  if (b1.g == Gen::E && b2.g == Gen::F) {
    RatFun ordered;
    pair_with_product(t, a, b2, b1, ordered);
    out = ordered + pair_modes(t, a, {Gen::H, b1.k + b2.k});
    return true;
  }
  return false;
}

Residual verify_hopf_pairing(const CoproductRule& delta) {
  Residual r;
  r.id = "hopf-pairing";
  const PairingTable t = pairing_table(3);  // the e f reorder reaches h_{-4}
  std::vector<ModeRef> as, bs;
  for (int k : {0, 1})
    for (Gen g : {Gen::E, Gen::F, Gen::H}) as.push_back({g, k});
  for (int k : {-1, -2})
    for (Gen g : {Gen::E, Gen::F, Gen::H}) bs.push_back({g, k});
  for (const auto& a : as) {
    const auto terms = delta(a);
    for (const auto& b1 : bs)
      for (const auto& b2 : bs) {
        RatFun lhs;
        if (!pair_with_product(t, a, b1, b2, lhs)) {
          ++r.flagged;
          continue;
        }
        RatFun rhs;
        for (const auto& term : terms) {
          if (term.left_unit || term.right_unit) continue;  // counit of a mode is zero
          rhs = rhs + term.c * pair_modes(t, term.left, b1) * pair_modes(t, term.right, b2);
        }
        RatFun d = lhs - rhs;
        r.record_exact(d.is_zero(), "<" + mode_name(a) + "," + mode_name(b1) + " " + mode_name(b2) + ">", d.str());
      }
  }
  RatFun d = t.cd - RatFun(1) / hbar_q();
  r.record_exact(d.is_zero(), "<c,d>", d.str());
  r.finish();
  return r;
}

Residual pairing_spotcheck(int modes) {
  Residual r = verify_pairing_resummation(modes);
  r.id = "pairing";
  r.merge(verify_hopf_pairing());
  return r;
}

}  // namespace dyhat
