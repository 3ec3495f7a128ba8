#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dyhat/bigrat.hpp"

namespace dyhat {

/// Name of the deformation parameter. Every variable list contains it.
inline const std::string kHbar = "hbar";

using VarList = std::vector<std::string>;
using Exponents = std::vector<int>;

/// Exact polynomial over BigRat in a declared list of commuting variables.
///
/// Terms are kept sorted by graded lexicographic order over the variable list
/// (largest first) with no zero coefficients, so structural equality is
/// mathematical equality once both operands share a variable list. Binary
/// operations on polynomials with different lists promote both operands to
/// the union list (left operand's order first).
class ScalarPoly {
 public:
  struct Term {
    Exponents exp;
    BigRat coef;
  };

  ScalarPoly();
  explicit ScalarPoly(VarList vars);
  ScalarPoly(const BigRat& c);  // NOLINT: constants convert implicitly
  ScalarPoly(long c);           // NOLINT
  ScalarPoly(VarList vars, const BigRat& c);

  /// The polynomial consisting of the single variable `name` (added to the
  /// default list {hbar} if it is not hbar itself).
  static ScalarPoly variable(const std::string& name);
  static ScalarPoly variable(const std::string& name, const VarList& vars);
  static ScalarPoly monomial(VarList vars, Exponents exp, BigRat coef);

  const VarList& vars() const { return *vars_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant value; throws if not constant.
  BigRat constant_value() const;
  /// Coefficient of the constant monomial (zero if absent).
  BigRat constant_term() const;

  int total_degree() const;
  int degree_in(const std::string& var) const;
  int min_degree_in(const std::string& var) const;
  bool contains_var(const std::string& var) const;
  int var_index(const std::string& var) const;  // -1 if absent

  /// Leading term under grlex; throws on zero.
  const Term& leading() const;

  ScalarPoly with_vars(const VarList& target) const;

  ScalarPoly operator-() const;
  ScalarPoly& operator+=(const ScalarPoly& o);
  ScalarPoly& operator-=(const ScalarPoly& o);
  ScalarPoly& operator*=(const ScalarPoly& o);
  ScalarPoly& operator*=(const BigRat& c);
  friend ScalarPoly operator+(ScalarPoly a, const ScalarPoly& b) { return a += b; }
  friend ScalarPoly operator-(ScalarPoly a, const ScalarPoly& b) { return a -= b; }
  friend ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b);
  friend ScalarPoly operator*(ScalarPoly a, const BigRat& c) { return a *= c; }
  friend ScalarPoly operator*(const BigRat& c, ScalarPoly a) { return a *= c; }
  friend bool operator==(const ScalarPoly& a, const ScalarPoly& b);
  friend bool operator!=(const ScalarPoly& a, const ScalarPoly& b) { return !(a == b); }

  ScalarPoly pow(unsigned n) const;

  /// Substitute rational values for some variables; the variable list is kept.
  ScalarPoly substitute(const std::map<std::string, BigRat>& values) const;
  /// Substitute a polynomial for one variable.
  ScalarPoly compose(const std::string& var, const ScalarPoly& value) const;
  /// Full evaluation; every variable with nonzero degree must be given.
  BigRat evaluate(const std::map<std::string, BigRat>& values) const;

  ScalarPoly derivative(const std::string& var) const;

  /// Coefficients with respect to `var`: result[i] multiplies var^i. The
  /// coefficient polynomials keep the full variable list (exponent of var 0).
  std::vector<ScalarPoly> coefficients_in(const std::string& var) const;
  static ScalarPoly from_coefficients(const std::string& var, const std::vector<ScalarPoly>& coeffs,
                                      const VarList& vars);

  /// Exact division; throws std::domain_error if `divisor` does not divide.
  ScalarPoly divide_exact(const ScalarPoly& divisor) const;

  /// Canonical text, e.g. "2*hbar^2*u - 1/3".
  std::string str() const;
  /// Sorted monomial list [[coef, {var: exp}], ...] as used in reports.
  std::vector<std::pair<std::string, std::map<std::string, int>>> monomial_list() const;

 private:
  void normalize();
  static bool grlex_greater(const Exponents& a, const Exponents& b);

  std::shared_ptr<const VarList> vars_;
  std::vector<Term> terms_;

  friend class PolyOps;
};

std::ostream& operator<<(std::ostream& os, const ScalarPoly& p);

/// Union of two variable lists, left order first.
VarList merge_vars(const VarList& a, const VarList& b);

/// Greatest common divisor in Q[vars], normalized monic under grlex (1 for
/// coprime inputs, the other operand for a zero input).
ScalarPoly poly_gcd(const ScalarPoly& a, const ScalarPoly& b);

/// Parse a polynomial written with + - * ^ / integers, rationals and
/// identifiers; parentheses allowed. Used by configs and tests.
ScalarPoly parse_poly(const std::string& text, const VarList& vars = {kHbar});

}  // namespace dyhat
