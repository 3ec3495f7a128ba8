#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "dyhat/eval_rmatrix.hpp"

using namespace dyhat;

namespace {

const VarList kVars{kHbar, "u", "x", "y", "z"};
RatFun V(const char* s) { return RatFun::variable(s, kVars); }
RatFun Q(const char* s) { return parse_ratfun(s, kVars); }

MatrixQ unit(Gen g) { return eval_generator(g, 0, V("x")); }

const double kPi = std::acos(-1.0);

}  // namespace

TEST(EvalRep, GeneratorExamples) {
  const RatFun x = V("x");
  MatrixQ e0 = eval_generator(Gen::E, 0, x);
  EXPECT_EQ(e0(0, 1), RatFun(1));
  EXPECT_TRUE(e0(0, 0).is_zero() && e0(1, 0).is_zero() && e0(1, 1).is_zero());
  MatrixQ h2 = eval_generator(Gen::H, 2, x);
  EXPECT_EQ(h2(0, 0), x * x);
  EXPECT_EQ(h2(1, 1), -(x * x));
  MatrixQ fm1 = eval_generator(Gen::F, -1, x);
  EXPECT_EQ(fm1(1, 0), RatFun(1) / x);
}

TEST(EvalRep, DefiningModeRelations) {
  auto r = verify_defining_modes_eval(-4, 4);
  EXPECT_EQ(r.status, Status::Pass) << (r.failures.empty() ? r.note : r.failures.front());
  EXPECT_GT(r.trusted, 400);
  // [e_k, f_l] = x^{k+l} H directly
  const RatFun x = V("x");
  for (int k = -2; k <= 2; ++k)
    for (int l = -2; l <= 2; ++l) {
      MatrixQ e = eval_generator(Gen::E, k, x), f = eval_generator(Gen::F, l, x);
      EXPECT_EQ(e * f - f * e, x.pow(k + l) * unit(Gen::H));
    }
}

// A deliberately wrong representation is caught.
TEST(EvalRep, ModeRelationsDetectWrongImages) {
  const RatFun x = V("x");
  auto r = check_mode_relations(
      [&](Gen g, int k) { return g == Gen::H ? x.pow(k + 1) * unit(g) : x.pow(k) * unit(g); }, -1, 1, "bad");
  EXPECT_EQ(r.status, Status::Fail);
}

TEST(RMatrix, RbarExamples) {
  const RatFun u = V("u"), h = V(kHbar.c_str());
  MatrixQ at0 = rbar(RatFun(0) * u);
  EXPECT_EQ(at0, flip4<RatFun>());
  MatrixQ ath = rbar(h);
  EXPECT_EQ(ath(1, 1), RatFun(make_rat(1, 2)));
  EXPECT_EQ(ath(1, 2), RatFun(make_rat(1, 2)));
  MatrixQ m = rbar(u);
  EXPECT_EQ(m(1, 1) + m(1, 2), RatFun(1));
  EXPECT_EQ(m(2, 1) + m(2, 2), RatFun(1));
  // unitarity Rbar(u) Rbar(-u) = 1
  EXPECT_EQ(rbar(u) * rbar(-u), MatrixQ::identity(4));
  EXPECT_THROW(rbar(Complex(-1.0, 0.0), 1.0), std::domain_error);
  EXPECT_THROW(rbar(-h), std::domain_error);
}

TEST(Gamma, LogGammaMatchesStd) {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.3, 30.0, 170.2, -0.3, -2.7})
    EXPECT_NEAR(log_gamma(Complex(x, 0)).real(), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x)))) << x;
  // Gamma(z + 1) = z Gamma(z) off the real axis
  for (Complex z : {Complex(0.3, 1.2), Complex(-2.4, 0.7), Complex(5.0, -3.0)}) {
    Complex d = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
    Complex e = std::exp(d);
    EXPECT_NEAR(e.real(), 1.0, 1e-12);
    EXPECT_NEAR(e.imag(), 0.0, 1e-12);
  }
}

TEST(Gamma, RhoAnchorsAndAsymptotics) {
  EXPECT_NEAR(rho(-1, 1.0, 1.0).real(), 2.0 / kPi, 1e-12);
  EXPECT_NEAR(rho(-1, 1.5, 1.5).real(), 2.0 / kPi, 1e-12);
  EXPECT_NEAR(rho(-1, 1.0, 1.0).imag(), 0.0, 1e-15);
  // exponent flip: rho+(u) = 1/rho-(-u)
  for (double u : {0.3, 1.7, -0.4}) {
    Complex a = rho(1, u, 1.0), b = rho(-1, -u, 1.0);
    EXPECT_NEAR(std::abs(a * b - 1.0), 0.0, 1e-12) << u;
  }
  // rho-(u) -> 1 + O(1/u): the deviation halves when u doubles
  double d1 = std::abs(rho(-1, 1000.0, 1.0) - 1.0), d2 = std::abs(rho(-1, 2000.0, 1.0) - 1.0);
  EXPECT_LT(d1, 1e-3);
  EXPECT_NEAR(d1 / d2, 2.0, 0.01);
  EXPECT_THROW(rho(-1, 0.0, 1.0), std::domain_error);
  EXPECT_THROW(rho(-1, -2.0 + 1e-10, 1.0), std::domain_error);
  EXPECT_THROW(rho(1, 1.0, 1.0), std::domain_error);  // Gamma(1/2 - 1/2)
}

TEST(Ybe, SymbolicResidualsVanish) {
  for (YbeKind k : {YbeKind::PurePlus, YbeKind::PureMinus, YbeKind::Mixed}) {
    auto r = check_ybe(k);
    EXPECT_EQ(r.status, Status::Pass) << ybe_name(k) << " " << (r.failures.empty() ? "" : r.failures.front());
    EXPECT_EQ(r.trusted, 64);
  }
}

TEST(Ybe, RandomRationalPoints) {
  for (YbeKind k : {YbeKind::PurePlus, YbeKind::PureMinus, YbeKind::Mixed}) {
    auto r = check_ybe_random(k, 100, 20240601);
    EXPECT_EQ(r.status, Status::Pass) << ybe_name(k);
    EXPECT_EQ(r.trusted, 100);
  }
}

// (u + 2 hbar P)/(u + 2 hbar) with the wrong pairing of slots does not solve
// the equation once the spectral parameters are mismatched.
TEST(Ybe, WrongMatrixFails) {
  const RatFun x = V("x"), y = V("y"), z = V("z");
  auto bad = [](const RatFun& u) { return rbar(RatFun(2) * u); };
  MatrixQ R = embed3(bad(x - y), 0, 1), L1 = embed3(rbar(x - z), 0, 2), L2 = embed3(rbar(y - z), 1, 2);
  EXPECT_FALSE((R * L1 * L2 - L2 * L1 * R).is_zero());
}

TEST(Coproduct, CurrentExamples) {
  const RatFun u = V("u"), x = V("x"), y = V("y");
  const MatrixQ one = MatrixQ::identity(2);
  EXPECT_EQ(coproduct_pair(Gen::E, u, x, y),
            kron(eval_current(Gen::E, u, x), one) + kron(eval_current(Gen::H, u, x), eval_current(Gen::E, u, y)));
  // D h(u) differs from h (x) h only by the (+-) -> (-+) entry
  MatrixQ dh = coproduct_pair(Gen::H, u, x, y);
  MatrixQ hh = kron(eval_current(Gen::H, u, x), eval_current(Gen::H, u, y));
  MatrixQ d = dh - hh;
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j)
      if (i != 2 || j != 1) EXPECT_TRUE(d(i, j).is_zero()) << i << j;
  EXPECT_FALSE(d(2, 1).is_zero());
}

TEST(Coproduct, LowModesMatchClosedForms) {
  const RatFun x = V("x"), y = V("y"), h = V(kHbar.c_str());
  const MatrixQ one = MatrixQ::identity(2);
  auto ex = [&](Gen g, int k) { return eval_generator(g, k, x); };
  auto ey = [&](Gen g, int k) { return eval_generator(g, k, y); };
  for (Gen g : {Gen::E, Gen::F, Gen::H})
    EXPECT_EQ(coproduct_mode(g, 0, x, y), kron(ex(g, 0), one) + kron(one, ey(g, 0))) << gen_name(g);
  EXPECT_EQ(coproduct_mode(Gen::E, 1, x, y),
            kron(ex(Gen::E, 1), one) + kron(one, ey(Gen::E, 1)) + h * kron(ex(Gen::H, 0), ey(Gen::E, 0)));
  EXPECT_EQ(coproduct_mode(Gen::F, 1, x, y),
            kron(ex(Gen::F, 1), one) + kron(one, ey(Gen::F, 1)) + h * kron(ex(Gen::F, 0), ey(Gen::H, 0)));
  EXPECT_EQ(coproduct_mode(Gen::H, 1, x, y), kron(ex(Gen::H, 1), one) + kron(one, ey(Gen::H, 1)) +
                                                 h * kron(ex(Gen::H, 0), ey(Gen::H, 0)) -
                                                 RatFun(2) * h * kron(ex(Gen::F, 0), ey(Gen::E, 0)));
}

TEST(Coproduct, HomomorphismAndIntertwiner) {
  auto t0 = std::chrono::steady_clock::now();
  auto r = verify_coproduct_hom_and_intertwine(-2, 2);
  EXPECT_EQ(r.status, Status::Pass) << (r.failures.empty() ? r.note : r.failures.front());
  EXPECT_GT(r.trusted, 100);
  std::cout << "coproduct check: "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
}

TEST(Coproduct, WrongOrientationDoesNotIntertwine) {
  const RatFun x = V("x"), y = V("y");
  MatrixQ a = coproduct_mode(Gen::E, 1, x, y);
  MatrixQ op = flip4<RatFun>() * coproduct_mode(Gen::E, 1, y, x) * flip4<RatFun>();
  MatrixQ R = rbar(y - x);
  EXPECT_FALSE((R * a - op * R).is_zero());
}

TEST(UniversalR, ResidueSeriesMatchesClosedForm) {
  const Complex x = 0.2, y = -1.7;
  for (int s : {1, -1})
    for (int t : {1, -1})
      for (double shift : {1.0, 5.0}) {
        Complex a = r0_exponent(s, t, x, y, shift, 1.0, ResidueConvention::InfinityZero);
        Complex b = r0_exponent_series(s, t, x, y, shift, 1.0, 400);
        EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12) << s << t << shift;
      }
}

TEST(UniversalR, GaussFactorsAreUnipotent) {
  auto r = reconstruct_universal_R(0.0, -0.7, 10, 1.0);
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.r_plus(i, i), Complex(1.0));
    EXPECT_EQ(r.r_minus(i, i), Complex(1.0));
    for (size_t j = 0; j < i; ++j) EXPECT_EQ(r.r_plus(i, j), Complex(0.0));
    for (size_t j = i + 1; j < 4; ++j) EXPECT_EQ(r.r_minus(i, j), Complex(0.0));
  }
}

// The literal product converges to (1/rho-(t)) Rbar(t), t = x - y, with O(1/N)
// error; Richardson extrapolation removes the leading terms.
TEST(UniversalR, ReconstructionLimit) {
  for (double t : {0.7, 1.3, 2.6}) {
    const Complex x = 0.0, y = -t;
    MatrixC target = (1.0 / rho(-1, t, 1.0)) * rbar(Complex(t), 1.0);
    double e1 = max_abs_diff(reconstruct_universal_R(x, y, 2500, 1.0).full, target);
    double e2 = max_abs_diff(reconstruct_universal_R(x, y, 5000, 1.0).full, target);
    double e4 = max_abs_diff(reconstruct_universal_R(x, y, 10000, 1.0).full, target);
    EXPECT_LT(e4, 1e-3) << t;
    EXPECT_NEAR(e1 / e2, 2.0, 0.05) << t;
    EXPECT_NEAR(e2 / e4, 2.0, 0.05) << t;
    double er = max_abs_diff(reconstruct_universal_R_richardson(x, y, 10000, 1.0).full, target);
    EXPECT_LT(er, 1e-8) << t;
    // the rho- scaled matrix is not the limit
    MatrixC scaled = rho(-1, t, 1.0) * rbar(Complex(t), 1.0);
    EXPECT_GT(max_abs_diff(reconstruct_universal_R_richardson(x, y, 10000, 1.0).full, scaled), 0.1) << t;
  }
}

TEST(UniversalR, ReversedConventionInvertsDiagonal) {
  auto a = reconstruct_universal_R(0.0, -1.3, 50, 1.0, ResidueConvention::InfinityZero);
  auto b = reconstruct_universal_R(0.0, -1.3, 50, 1.0, ResidueConvention::ZeroInfinity);
  for (size_t d = 0; d < 4; ++d) EXPECT_NEAR(std::abs(a.r_zero(d, d) * b.r_zero(d, d) - 1.0), 0.0, 1e-13);
}
