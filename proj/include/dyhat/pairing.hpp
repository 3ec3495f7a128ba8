#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dyhat/eval_rmatrix.hpp"

namespace dyhat {

/// Mode-pairing values between the two halves of the double, as rational
/// functions of hbar. Indices k, l run over [0, modes]:
///   ef(k, l) = <e_k, f_{-l-1}> = -delta_{kl}/hbar
///   fe(k, l) = <f_k, e_{-l-1}> = -delta_{kl}/hbar
///   hh(k, l) = <h_k, h_{-l-1}> = -2 C(k, l) hbar^{k-l-1}
///   cd       = <c, d> = 1/hbar
/// The sign comes from f-(v) = -sum_{k<0} f_k v^{-k-1} (and likewise for e-, h-).
struct PairingTable {
  int modes = 0;
  std::vector<std::vector<RatFun>> ef, fe, hh;
  RatFun cd;
};

PairingTable pairing_table(int modes);

/// Re-expands <e+(u), f-(v)> = <f+(u), e-(v)> = 1/(hbar(u-v)) and
/// <h+(u), h-(v)> = (u-v+hbar)/(u-v-hbar) in |u| > |v| and compares every
/// coefficient in the window with the resummed table.
Residual verify_pairing_resummation(int modes);

/// A single mode x_k of the positive (k >= 0) or negative (k < 0) half.
struct ModeRef {
  Gen g;
  int k;
};
std::string mode_name(const ModeRef& m);

/// <a, b> for single modes a (k >= 0) and b (k < 0) from the table.
RatFun pair_modes(const PairingTable& t, const ModeRef& a, const ModeRef& b);

/// One term c * x (x) y of a coproduct; an empty slot is the unit.
struct CoproductTerm {
  RatFun c;
  bool left_unit, right_unit;
  ModeRef left, right;
};
/// Degree <= 1 coproducts: x_0 primitive and
///   D(e_1) = e_1 (x) 1 + 1 (x) e_1 + hbar h_0 (x) e_0
///   D(f_1) = f_1 (x) 1 + 1 (x) f_1 + hbar f_0 (x) h_0
///   D(h_1) = h_1 (x) 1 + 1 (x) h_1 + hbar h_0 (x) h_0 - 2 hbar f_0 (x) e_0
std::vector<CoproductTerm> low_coproduct(const ModeRef& a);

/// <a, b1 b2> evaluated inside the double: products in F-H-E order factorize,
/// <h+, h- h-> is the product of two pairings (H is a bicharacter pair), and
/// e_p f_q is reordered with [e_p, f_q] = h_{p+q}. Returns false when the
/// ordering of b1 b2 is not reachable this way.
bool pair_with_product(const PairingTable& t, const ModeRef& a, const ModeRef& b1, const ModeRef& b2, RatFun& out);

/// <a, b1 b2> = <D(a), b1 (x) b2> for a in {e,f,h}_{0,1}, b1, b2 among the
/// modes with index -1, -2, plus <c, d> = 1/hbar.
using CoproductRule = std::function<std::vector<CoproductTerm>(const ModeRef&)>;
Residual verify_hopf_pairing(const CoproductRule& delta = low_coproduct);

/// Both of the above and the table check, under the id "pairing".
Residual pairing_spotcheck(int modes);

}  // namespace dyhat
