#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dyhat/laurent.hpp"

namespace dyhat {

/// Basis vector of a Fock module: p-eigenvalue m (twice the charge) and a
/// partition listing the creation modes a_{-n} applied to the charge vacuum.
struct FockState {
  int m = 0;
  std::vector<int> parts;  // weakly decreasing, all >= 1

  int energy() const;
  int sector() const { return ((m % 2) + 2) % 2; }
  /// Multiplicity of part n.
  int count(int n) const;
  std::string str() const;

  static FockState vacuum(int m = 0) { return FockState{m, {}}; }
  static FockState from_multiplicities(int m, const std::vector<int>& r);  // r[n-1] = multiplicity of n
  std::vector<int> multiplicities(int n_max) const;

  friend bool operator==(const FockState& a, const FockState& b) { return a.m == b.m && a.parts == b.parts; }
  friend bool operator!=(const FockState& a, const FockState& b) { return !(a == b); }
  /// Basis order: energy, then weight, then partition lexicographically.
  friend bool operator<(const FockState& a, const FockState& b);
};

struct Cutoffs {
  int e_max = 4;
  int m_lo = -4, m_hi = 4;
  int u_lo = -4, u_hi = 3;  // Laurent powers examined in exchange relations
  int modes = 3;            // e_k, f_l with |k|, |l| <= modes in the delta relation
  int margin = 0;

  void validate() const;
  bool weight_ok(int m) const { return m >= m_lo && m <= m_hi; }
};

/// All partitions of n, each weakly decreasing, in lexicographic order.
std::vector<std::vector<int>> partitions_of(int n);

/// Truncated basis of one sector: energy <= e_max, weight in the window and of
/// the sector's parity.
class FockBasis {
 public:
  FockBasis(int sector, const Cutoffs& cut);

  int sector() const { return sector_; }
  const Cutoffs& cutoffs() const { return cut_; }
  size_t size() const { return states_.size(); }
  const FockState& state(size_t i) const { return states_[i]; }
  const std::vector<FockState>& states() const { return states_; }
  int index(const FockState& s) const;  // -1 when outside the truncation

 private:
  int sector_;
  Cutoffs cut_;
  std::vector<FockState> states_;
  std::map<FockState, int> index_;
};

template <typename C>
using FockVector = std::map<FockState, C>;

/// Generators of the Heisenberg algebra and charge shifts acting on states.
struct HeisenbergOp {
  enum class Kind { Mode, P, ChargeShift };
  Kind kind = Kind::Mode;
  int n = 0;  // mode index for Mode (nonzero), weight shift for ChargeShift

  static HeisenbergOp a(int n) { return {Kind::Mode, n}; }
  static HeisenbergOp p() { return {Kind::P, 0}; }
  static HeisenbergOp shift(int s) { return {Kind::ChargeShift, s}; }
  std::string str() const;
};

/// Apply a generator to a vector. Components pushed above e_max are dropped
/// and counted in *overflow (if given); the result is exact below that.
template <typename C>
FockVector<C> heisenberg_act(const HeisenbergOp& op, const FockVector<C>& v, int e_max, int* overflow = nullptr);

// ---------------------------------------------------------------------------
// Normal-ordered exponentials with exact coefficients in Q[hbar]((u)).

using USeries = TruncatedLaurent<ScalarPoly>;

/// exp(sum_n c_n(u) a_{-n}/n) exp(sum_n d_n(u) a_n/n) e^{shift} phi(u)^p,
/// times a scalar prefactor. Factors act right to left.
struct VertexOpSpec {
  std::string name;
  std::vector<USeries> creation;      // c_n for n = 1..size
  std::vector<USeries> annihilation;  // d_n for n = 1..size
  int shift = 0;
  USeries weight_base;      // phi(u)
  USeries weight_base_inv;  // 1/phi(u)
  ScalarPoly prefactor = ScalarPoly(1);
  int limit = -16;  // lowest u-power kept for series at infinity

  /// exp(sum c_n x_n / n) expanded by partition up to energy e_max.
  std::vector<std::pair<FockState, USeries>> creation_table;

  void finalize(int e_max);
};

/// The currents of the level-one module, built to handle energies <= e_max;
/// `limit` is the lowest power of u retained in series at infinity.
VertexOpSpec vertex_e(int e_max, int limit);
VertexOpSpec vertex_f(int e_max, int limit);
VertexOpSpec vertex_hplus(int e_max, int limit);
VertexOpSpec vertex_hminus(int e_max, int limit);
/// phi_-(u + shift_u) and phi_+(u + shift_u) and their inverses.
VertexOpSpec vertex_phi_minus(const ScalarPoly& shift_u, bool inverse, int e_max, int limit);
VertexOpSpec vertex_phi_plus(const ScalarPoly& shift_u, bool inverse, int e_max, int limit);

/// Weight window violations throw std::out_of_range.
FockVector<USeries> apply_vertex(const VertexOpSpec& spec, const FockState& state, const Cutoffs& cut);
FockVector<USeries> apply_vertex(const VertexOpSpec& spec, const FockVector<USeries>& v, const Cutoffs& cut);

/// Coefficient of u^power of every component; throws if unknown.
FockVector<ScalarPoly> mode_coefficient(const FockVector<USeries>& applied, int power);

// ---------------------------------------------------------------------------
// Sparse operators on a truncated basis.

/// Which matrix elements can be nonzero: <out|A|mid> != 0 implies
///   4 N_mid + m_mid^2 <= 4 N_out + m_out^2 + 4 lowering   (total = true)
///   N_mid <= N_out + lowering                            (total = false)
struct EnergyBound {
  bool total = false;
  int lowering = 0;

  /// Largest boson energy a source state of weight m_mid may have.
  int max_source_energy(const FockState& out, int m_mid) const;
};

template <typename C>
struct SparseOp {
  std::shared_ptr<const FockBasis> basis;
  int shift = 0;
  EnergyBound bound;
  std::vector<std::vector<std::pair<int, C>>> cols;  // column j: (row, value), rows ascending
  std::vector<char> mask;  // row-major untrusted flags; empty means every entry is trusted

  SparseOp() = default;
  SparseOp(std::shared_ptr<const FockBasis> b, int s, EnergyBound eb)
      : basis(std::move(b)), shift(s), bound(eb), cols(basis->size()) {}

  C entry(int row, int col) const;
  FockVector<C> column(int col) const;
  size_t nonzeros() const;
  bool trusted(int row, int col) const { return mask.empty() || !mask[row * basis->size() + col]; }
  void distrust(int row, int col);
};

/// A*B on the truncated basis. Entry (out,in) is trusted when the source
/// weight lies in the window, every basis state the bound of A allows as a
/// source is present (boson energy <= e_max - margin), and all factor
/// entries it uses are trusted.
template <typename C>
SparseOp<C> product(const SparseOp<C>& a, const SparseOp<C>& b);

/// sum_i c_i * op_i; trusted where every term is trusted.
template <typename C>
SparseOp<C> combine(const std::vector<std::pair<C, const SparseOp<C>*>>& terms);

/// Matrix of a Heisenberg generator (exact on the truncated basis).
SparseOp<ScalarPoly> heisenberg_matrix(std::shared_ptr<const FockBasis> basis, const HeisenbergOp& op);

// ---------------------------------------------------------------------------
// The shift automorphism T = e^{gamma d}.

inline const std::string kGamma = "gamma";

/// e^{gamma d} a_n e^{-gamma d} as a finite combination (truncated at
/// creation index e_max); the P kind carries the p-term.
std::vector<std::pair<ScalarPoly, HeisenbergOp>> shift_conjugate(const HeisenbergOp& op, const ScalarPoly& gamma,
                                                                  int e_max);

/// e^{gamma d} on the truncated basis; entries are polynomials in gamma.
/// The gamma^g part raises boson energy by exactly g.
SparseOp<ScalarPoly> shift_operator(std::shared_ptr<const FockBasis> basis, const ScalarPoly& gamma);

/// e^{gamma d} applied to one state, computed from its defining rules.
FockVector<ScalarPoly> shift_apply(const FockState& s, const ScalarPoly& gamma, int e_max);

}  // namespace dyhat
