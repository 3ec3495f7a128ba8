#include <gtest/gtest.h>

#include "dyhat/pairing.hpp"

using namespace dyhat;

namespace {

const VarList kVars{kHbar, "x", "y"};
RatFun V(const char* s) { return RatFun::variable(s, kVars); }
RatFun h() { return V(kHbar.c_str()); }

RatFun pair_product(const ModeRef& a, const ModeRef& b1, const ModeRef& b2) {
  RatFun out;
  EXPECT_TRUE(pair_with_product(pairing_table(3), a, b1, b2, out));
  return out;
}

}  // namespace

TEST(PairingTable, Values) {
  auto t = pairing_table(3);
  EXPECT_EQ(t.ef[0][0], RatFun(-1) / h());
  EXPECT_EQ(t.fe[2][2], RatFun(-1) / h());
  EXPECT_TRUE(t.ef[1][0].is_zero());
  EXPECT_EQ(t.hh[0][0], RatFun(-2) / h());
  EXPECT_EQ(t.hh[1][0], RatFun(-2));
  EXPECT_EQ(t.hh[3][1], RatFun(-6) * h());
  EXPECT_TRUE(t.hh[0][1].is_zero());
  EXPECT_EQ(t.cd, RatFun(1) / h());
  EXPECT_THROW(pairing_table(-1), std::invalid_argument);
}

TEST(PairingTable, ResumsToGeneratingFunctions) {
  for (int m : {0, 2, 5}) {
    auto r = verify_pairing_resummation(m);
    EXPECT_EQ(r.status, Status::Pass) << (r.failures.empty() ? r.note : r.failures.front());
    EXPECT_EQ(r.trusted, 2 * (m + 1) * (m + 1) + (m + 2) * (m + 1));
  }
}

TEST(PairingTable, ModePairing) {
  auto t = pairing_table(2);
  EXPECT_EQ(pair_modes(t, {Gen::E, 1}, {Gen::F, -2}), RatFun(-1) / h());
  EXPECT_TRUE(pair_modes(t, {Gen::E, 1}, {Gen::E, -2}).is_zero());
  EXPECT_TRUE(pair_modes(t, {Gen::E, 1}, {Gen::F, -1}).is_zero());
  EXPECT_THROW(pair_modes(t, {Gen::E, -1}, {Gen::F, -1}), std::invalid_argument);
  EXPECT_THROW(pair_modes(t, {Gen::E, 3}, {Gen::F, -1}), std::out_of_range);
}

// Values worked out by hand from the generating functions.
TEST(HopfPairing, ProductExamples) {
  EXPECT_EQ(pair_product({Gen::H, 1}, {Gen::H, -1}, {Gen::H, -1}), RatFun(4) / h());
  EXPECT_TRUE(pair_product({Gen::H, 0}, {Gen::H, -1}, {Gen::H, -1}).is_zero());
  EXPECT_EQ(pair_product({Gen::H, 1}, {Gen::E, -1}, {Gen::F, -1}), RatFun(-2) / h());
  EXPECT_TRUE(pair_product({Gen::E, 1}, {Gen::F, -1}, {Gen::H, -1}).is_zero());
  RatFun out;
  EXPECT_FALSE(pair_with_product(pairing_table(3), {Gen::E, 1}, {Gen::H, -1}, {Gen::F, -1}, out));
}

TEST(HopfPairing, AxiomHoldsForLowCoproducts) {
  auto r = verify_hopf_pairing();
  EXPECT_EQ(r.status, Status::Pass) << (r.failures.empty() ? r.note : r.failures.front());
  EXPECT_EQ(r.trusted, 6 * 28 + 1);
  EXPECT_EQ(r.flagged, 6 * 8);
}

TEST(HopfPairing, DetectsWrongCoproducts) {
  // tensor factors of the e_1 correction swapped
  auto swapped = [](const ModeRef& a) {
    auto t = low_coproduct(a);
    if (a.g == Gen::E && a.k == 1) std::swap(t.back().left, t.back().right);
    return t;
  };
  EXPECT_EQ(verify_hopf_pairing(swapped).status, Status::Fail);
  // sign of the f_0 (x) e_0 term in D(h_1)
  auto sign = [](const ModeRef& a) {
    auto t = low_coproduct(a);
    if (a.g == Gen::H && a.k == 1) t.back().c = -t.back().c;
    return t;
  };
  EXPECT_EQ(verify_hopf_pairing(sign).status, Status::Fail);
}

// The degree <= 1 coproducts agree with the current coproduct on W_x (x) W_y.
TEST(HopfPairing, LowCoproductMatchesEvaluationImage) {
  const RatFun x = V("x"), y = V("y");
  const MatrixQ one = MatrixQ::identity(2);
  for (int k : {0, 1})
    for (Gen g : {Gen::E, Gen::F, Gen::H}) {
      MatrixQ sum(4);
      for (const auto& t : low_coproduct({g, k})) {
        MatrixQ l = t.left_unit ? one : eval_generator(t.left.g, t.left.k, x);
        MatrixQ r = t.right_unit ? one : eval_generator(t.right.g, t.right.k, y);
        sum = sum + t.c * kron(l, r);
      }
      EXPECT_TRUE((sum - coproduct_mode(g, k, x, y)).is_zero()) << gen_name(g) << k;
    }
}

TEST(HopfPairing, Spotcheck) {
  auto r = pairing_spotcheck(3);
  EXPECT_EQ(r.id, "pairing");
  EXPECT_EQ(r.status, Status::Pass);
}
