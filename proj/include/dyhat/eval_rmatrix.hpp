#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "dyhat/laurent.hpp"
#include "dyhat/matrix.hpp"
#include "dyhat/ratfun.hpp"
#include "dyhat/residual.hpp"

namespace dyhat {

using MatrixQ = Matrix<RatFun>;
using MatrixC = Matrix<Complex>;

enum class Gen { E, F, H };
const char* gen_name(Gen g);

/// Mode images on W_x in the basis (w+, w-):
///   e_k w- = x^k w+,  f_k w+ = x^k w-,  h_k w+- = +-x^k w+-.
MatrixQ eval_generator(Gen g, int k, const RatFun& x);

/// Checks of the defining mode relations for a family of images a(g, k),
/// all k, l in [lo, hi]:
///   [h_k, h_l] = 0, [e_k, f_l] = h_{k+l}, [h_0, e_l] = 2 e_l, [h_0, f_l] = -2 f_l,
///   [h_{k+1}, e_l] - [h_k, e_{l+1}] = hbar {h_k, e_l}       (and the f, ee, ff analogues).
using ModeImage = std::function<MatrixQ(Gen, int)>;
Residual check_mode_relations(const ModeImage& image, int lo, int hi, const std::string& id);

/// The mode relations on W_x with symbolic x.
Residual verify_defining_modes_eval(int lo, int hi);

/// (u + hbar P)/(u + hbar); u may contain any variables.
MatrixQ rbar(const RatFun& u);
/// Numeric version; throws std::domain_error at the pole u = -hbar.
MatrixC rbar(Complex u, double hbar);

/// log Gamma on the principal branch (Lanczos approximation with reflection).
Complex log_gamma(Complex z);

/// rho^eps(u) = (Gamma(-eps t) Gamma(1 - eps t) / Gamma(1/2 - eps t)^2)^eps, t = u/(2 hbar).
/// Throws std::domain_error within pole_eps of a pole of any Gamma factor.
Complex rho(int eps, Complex u, double hbar, double pole_eps = 1e-8);

/// Yang-Baxter checks. Every R- or L-slot is realized in evaluation modules:
///   R-(x-y) and L-(x) ~ Rbar, R+ and L+ ~ the inverse of the flipped Rbar,
/// scalar factors dropped since they cancel between the two sides.
enum class YbeKind { PurePlus, PureMinus, Mixed };
const char* ybe_name(YbeKind k);
/// Symbolic residual in x, y, z (8x8 rational matrix).
MatrixQ ybe_residual(YbeKind kind);
Residual check_ybe(YbeKind kind);
/// The same identity recomputed in exact rationals at random points.
Residual check_ybe_random(YbeKind kind, int trials, uint64_t seed);

/// Generating functions on W_x at central charge 0 (the same rational
/// function serves both half-currents; the region decides the modes):
///   e(u) = E/(u-x), f(u) = F/(u-x), h(u) = 1 + hbar H/(u-x).
MatrixQ eval_current(Gen g, const RatFun& u, const RatFun& x);

/// The coproduct of a current on W_x (x) W_y, where E^2 = F^2 = 0 leaves
/// only the first terms of the sums:
///   D e(u) = e(u) (x) 1 + h(u) (x) e(u)
///   D f(u) = 1 (x) f(u) + f(u) (x) h(u)
///   D h(u) = h(u) (x) h(u) - 2 hbar^2 f(u+hbar) h(u) (x) h(u) e(u+hbar)
MatrixQ coproduct_pair(Gen g, const RatFun& u, const RatFun& x, const RatFun& y);

/// Image of a mode under the coproduct: coefficients of the expansion at
/// infinity (k >= 0) or at zero (k < 0).
MatrixQ coproduct_mode(Gen g, int k, const RatFun& x, const RatFun& y);

/// Homomorphism (mode relations for the coproduct images) and
/// Rbar(x-y) D(a) = D^op(a) Rbar(x-y) for all modes with k in [lo, hi].
Residual verify_coproduct_hom_and_intertwine(int lo, int hi);

// ---------------------------------------------------------------------------
// Universal R-matrix in W_x (x) W_y.

/// How Res_{u=v} A(u) (x) B(v) pairs coefficients.
///   InfinityZero: sum_k [u^{-k-1}] A at infinity * [v^k] B at zero.
///   ZeroInfinity: sum_k [u^k] A at zero * [v^{-k-1}] B at infinity.
enum class ResidueConvention { InfinityZero, ZeroInfinity };

/// Laurent coefficients of the Cartan logarithms k = (1/hbar) ln h on a
/// weight vector (sign +1 for w+, -1 for w-).
///   dk+(u)/du on W_x at infinity: [u^{-k-1}] = ((x - s hbar)^k - x^k)/hbar
///   k-(v + shift) on W_y at zero: [v^k]
Complex dkplus_coeff_inf(int sign, Complex x, double hbar, int k);
Complex kminus_coeff_zero(int sign, Complex y, Complex shift, double hbar, int k);

/// hbar * Res of dk+ (x) k-(v + shift) on w_sigma (x) w_tau, in closed form.
Complex r0_exponent(int sigma, int tau, Complex x, Complex y, Complex shift, double hbar, ResidueConvention conv);
/// The same from the first `terms` coefficient products (InfinityZero only;
/// converges when |x| + hbar < |y - shift| - hbar).
Complex r0_exponent_series(int sigma, int tau, Complex x, Complex y, Complex shift, double hbar, int terms);

struct UniversalRImage {
  MatrixC r_plus, r_zero, r_minus, full;
};

/// R+ R0 R- with the R0 product truncated at n <= n_max, R+- resummed
/// (expansion region |y| > |x|).
UniversalRImage reconstruct_universal_R(Complex x, Complex y, long n_max, double hbar,
                                        ResidueConvention conv = ResidueConvention::InfinityZero);
/// Three-level Richardson extrapolation of the log of R0 over n_max/4,
/// n_max/2, n_max, cancelling the 1/N and 1/N^2 terms.
UniversalRImage reconstruct_universal_R_richardson(Complex x, Complex y, long n_max, double hbar,
                                                   ResidueConvention conv = ResidueConvention::InfinityZero);

double max_abs_diff(const MatrixC& a, const MatrixC& b);

}  // namespace dyhat
