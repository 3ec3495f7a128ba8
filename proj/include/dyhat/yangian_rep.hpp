#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dyhat/fock.hpp"
#include "dyhat/residual.hpp"

namespace dyhat {

enum class Family { E, F, HPlus, HMinus };

const char* family_name(Family f);  // "e", "f", "h+", "h-"
int family_shift(Family f);

/// One mode of a current on the truncated basis of a sector.
///   e, f : index k, the coefficient of u^{-k-1}
///   h+   : index m >= 0, the coefficient of u^{-m}   (H_m)
///   h-   : index m >= 0, the coefficient of v^{m}    (Hm_m)
struct ModeOperator {
  Family family = Family::E;
  int index = 0;
  int power = 0;  // exponent of u in the generating function
  SparseOp<ScalarPoly> op;
};

int mode_power(Family f, int index);
/// Whether the family has a nonzero coefficient at u^power at all.
bool family_has_power(Family f, int power);

/// The level-one representation on one sector with lazily cached modes and
/// mode products. Safe to share between threads.
class LevelOneRep {
 public:
  LevelOneRep(int sector, const Cutoffs& cut);

  const std::shared_ptr<const FockBasis>& basis() const { return basis_; }
  const Cutoffs& cutoffs() const { return cut_; }

  /// Mode by index; throws std::invalid_argument outside the family's range.
  ModeOperator mode(Family f, int index) const;
  /// Operator coefficient of u^power; the zero operator where the family has
  /// no such power.
  const SparseOp<ScalarPoly>& coefficient(Family f, int power) const;
  /// coefficient(a, pa) * coefficient(b, pb), cached.
  const SparseOp<ScalarPoly>& product(Family a, int pa, Family b, int pb) const;

  /// Lowest u-power retained in series at infinity.
  int series_limit() const { return limit_; }

 private:
  const std::vector<FockVector<USeries>>& images(Family f) const;

  int sector_;
  Cutoffs cut_;
  std::shared_ptr<const FockBasis> basis_;
  int limit_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Family, std::vector<FockVector<USeries>>> images_;
  mutable std::map<std::pair<Family, int>, SparseOp<ScalarPoly>> coeffs_;
  mutable std::map<std::tuple<Family, int, Family, int>, SparseOp<ScalarPoly>> products_;
};

ModeOperator build_mode(Family f, int index, int sector, const Cutoffs& cut);

/// h_k from the stored series coefficients:
///   h_k = H_{k+1} / hbar               (k >= 0)
///   h_k = (delta_{k,-1} - Hm_{-k-1}) / hbar   (k < 0)
SparseOp<ScalarPoly> h_mode(const LevelOneRep& rep, int k);

/// p(u,v) A(u) B(v) - q(u,v) B(v) A(u) = 0, central charge 1 substituted.
struct RelationInstance {
  std::string id;
  Family a = Family::E, b = Family::E;
  ScalarPoly p, q;  // polynomials in u, v, hbar
  int central_charge = 1;
};

/// The exchange relations in cleared form, in catalog order.
const std::vector<RelationInstance>& exchange_relations();
std::optional<RelationInstance> find_relation(const std::string& id);

/// Every relation id verified on the level-one module, in catalog order.
std::vector<std::string> relation_catalog();

Residual verify_exchange(const LevelOneRep& rep, const RelationInstance& rel);
Residual verify_ef_delta(const LevelOneRep& rep);
/// Conjugation by e^{gamma d} against the mode mixing induced by u -> u + gamma,
/// compared coefficientwise in gamma up to gamma_degree. Also checks the
/// conjugation of the Heisenberg generators.
Residual verify_d_covariance(const LevelOneRep& rep, int gamma_degree);

/// [T a_n T^-1, T a_m T^-1] = n delta_{n+m,0} for 0 < |n|, |m| <= 3, with the
/// conjugates expanded by shift_conjugate, coefficientwise in gamma.
Residual verify_shift_brackets(const LevelOneRep& rep, int gamma_degree);

/// Dispatch by catalog id.
Residual verify_relation(const LevelOneRep& rep, const std::string& id, int gamma_degree = 3);

/// Record every trusted entry of `diff` as an exact check against zero.
void record_operator(Residual& r, const SparseOp<ScalarPoly>& diff, const std::string& label);

}  // namespace dyhat
