#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dyhat/eval_rmatrix.hpp"
#include "dyhat/fock.hpp"
#include "dyhat/yangian_rep.hpp"

namespace dyhat {

/// prefactor * exp(sum_n c_n a_{-n}/n) exp(sum_n d_n a_n/n) e^{shift alpha/2} exp(p * log_weight)
/// with geometric coefficients
///   c_n = sum_i alpha_i beta_i^n,  d_n = sum_j gamma_j delta_j^{-n}.
struct GeometricVertex {
  std::string name;
  std::vector<std::pair<Complex, Complex>> creation;      // (alpha, beta)
  std::vector<std::pair<Complex, Complex>> annihilation;  // (gamma, delta)
  int shift = 0;
  Complex log_weight = 0.0;
  Complex prefactor = 1.0;

  Complex c(int n) const;
  Complex d(int n) const;
};

/// a b = scalar * :a b:. The contraction
///   exp(sum_n d^a_n c^b_n / n) = prod_{i,j} (1 - beta_i/delta_j)^{-gamma_j alpha_i}
/// is taken in closed form, i.e. analytically continued beyond |beta| < |delta|,
/// and a's zero mode contributes exp(shift_b * log_weight_a).
struct NormalProduct {
  Complex scalar;
  GeometricVertex op;
};
NormalProduct normal_product(const GeometricVertex& a, const GeometricVertex& b);

/// The level-one currents at a numeric point:
///   e(u):  c = (u-hbar)^n + u^n,  d = -u^{-n},  shift 2, weight u^p
///   f(u):  c = -(u+hbar)^n - u^n, d = u^{-n},   shift -2, weight u^{-p}
///   h+(u): d = (u-hbar)^{-n} - u^{-n}, weight (u/(u-hbar))^p
///   h-(u): c = (u-hbar)^n - (u+hbar)^n
GeometricVertex numeric_current(Family f, Complex u, double hbar);

/// A numeric operator from one truncated sector to another: column j holds
/// (row, value) pairs in the output basis, rows ascending. Rows flagged in
/// `untrusted` may be affected by truncation.
struct NumericOp {
  std::shared_ptr<const FockBasis> in, out;
  int shift = 0;
  std::vector<std::vector<std::pair<int, Complex>>> cols;
  std::vector<std::vector<int>> untrusted;

  Complex entry(int row, int col) const;
  bool trusted(int row, int col) const;
};

/// Matrix of a vertex operator. Every stored entry is exact: creation only
/// raises energy and the annihilation part is a finite polynomial. Columns
/// whose output weight leaves the window are left empty.
NumericOp vertex_matrix(const GeometricVertex& v, std::shared_ptr<const FockBasis> in,
                        std::shared_ptr<const FockBasis> out);

/// Phi-(z) with the annihilation product truncated at k <= N:
///   exp(sum a_{-n}/n (z+hbar)^n) e^{alpha/2} (2 hbar)^{p/2} (G(1/2 - z/2hbar)/G(-z/2hbar))^p
///   * prod_{k=0}^{N} exp(-sum a_n/n [(z - 2k hbar)^{-n} - (z - hbar - 2k hbar)^{-n}])
/// normalized so that <1| Phi- |0> = 1.
struct IntertwinerOp {
  Complex z;
  double hbar = 1.0;
  long N = 0;
  GeometricVertex spec;
};

/// Throws std::invalid_argument for N < 0 or hbar = 0 and std::domain_error
/// within pole_eps of a zero of some delta or a pole/zero of the Gamma ratio.
IntertwinerOp build_phi_minus(Complex z, double hbar, long N, double pole_eps = 1e-8);

/// Phi+ = Phi- f_0 - f_0 Phi- on the sector `sector`, with f_0 from the exact
/// mode expansion evaluated at hbar. Entries are trusted when every
/// intermediate state they need lies in the truncation.
NumericOp build_phi_plus(const IntertwinerOp& phi, int sector, const Cutoffs& cut);

/// The three intertwining equations, each p * Phi- X(u) = q * X(u) Phi-:
///   "phi-h+": Phi- h+(u) = (u-z-2hbar)/(u-z-hbar) h+(u) Phi-
///   "phi-h-": Phi- h-(u) = (u-z-hbar)/(u-z) h-(u) Phi-
///   "phi-e":  Phi- e(u) = e(u) Phi-
struct PhiEquation {
  std::string id;
  Family current;
};
const std::vector<PhiEquation>& phi_equations();
Complex phi_equation_ratio(const std::string& id, Complex u, Complex z, double hbar);

struct ConvergencePoint {
  long N;
  int e_max;
  double residual;
};

struct EquationSeries {
  std::string equation;
  Complex u;
  std::vector<ConvergencePoint> points;
  double decay_rate = 0.0;  // fitted exponent r in residual ~ N^{-r}
  bool monotone = true;
  double final_residual = 0.0;
  bool pass = false;
};

struct ConvergenceReport {
  Complex z;
  double hbar = 1.0;
  double tolerance = 0.0;
  std::vector<EquationSeries> series;
  bool pass = false;

  /// Numeric residual summary: fails unless every series passes.
  Residual as_residual(const std::string& id) const;
};

/// Relative residual of both sides of one equation on every matrix element
/// of both sectors (magnitude floor 1e-30).
double phi_equation_residual(const PhiEquation& eq, const IntertwinerOp& phi, Complex u, const Cutoffs& cut);

/// Residuals over the N sequence for every equation and sample; a series
/// passes when its last residual is within tolerance and the sequence is
/// non-increasing up to `noise` (rounding in the 2N contraction factors
/// reaches ~1e-11 at N = 200).
ConvergenceReport verify_phi_equations(Complex z, const std::vector<Complex>& u_samples, double hbar,
                                       const Cutoffs& cut, const std::vector<long>& Ns, double tolerance,
                                       int jobs = 1, double noise = 1e-10);

}  // namespace dyhat
