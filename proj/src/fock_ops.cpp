#include <algorithm>
#include <stdexcept>

#include "dyhat/fock.hpp"

namespace dyhat {

int EnergyBound::max_source_energy(const FockState& out, int m_mid) const {
  if (!total) return out.energy() + lowering;
  int num = 4 * out.energy() + out.m * out.m - m_mid * m_mid + 4 * lowering;
  // floor division
  return num >= 0 ? num / 4 : -((-num + 3) / 4);
}

template <typename C>
C SparseOp<C>::entry(int row, int col) const {
  for (const auto& [r, v] : cols[col])
    if (r == row) return v;
  return CoeffTraits<C>::zero();
}

template <typename C>
FockVector<C> SparseOp<C>::column(int col) const {
  FockVector<C> v;
  for (const auto& [r, x] : cols[col]) v.emplace(basis->state(r), x);
  return v;
}

template <typename C>
size_t SparseOp<C>::nonzeros() const {
  size_t n = 0;
  for (const auto& c : cols) n += c.size();
  return n;
}

template <typename C>
void SparseOp<C>::distrust(int row, int col) {
  if (mask.empty()) mask.assign(basis->size() * basis->size(), 0);
  mask[row * basis->size() + col] = 1;
}

namespace {

// The bound of a weight-preserving Heisenberg-type operator can be restated in
// total-energy form with the same lowering.
EnergyBound compose(const EnergyBound& a, int a_shift, const EnergyBound& b, int b_shift) {
  EnergyBound x = a, y = b;
  if (x.total != y.total) {
    if (!x.total && a_shift == 0) x.total = true;
    if (!y.total && b_shift == 0) y.total = true;
    if (x.total != y.total) throw std::invalid_argument("product: incompatible energy bounds");
  }
  return EnergyBound{x.total, x.lowering + y.lowering};
}

template <typename C>
void add_to(FockVector<C>& v, const FockState& s, const C& c) {
  auto it = v.find(s);
  if (it == v.end()) v.emplace(s, c);
  else it->second = it->second + c;
}

template <typename C>
std::vector<std::pair<int, C>> to_sorted(std::map<int, C>& acc) {
  std::vector<std::pair<int, C>> out;
  for (auto& [r, v] : acc)
    if (!CoeffTraits<C>::is_zero(v)) out.emplace_back(r, std::move(v));
  return out;
}

}  // namespace

template <typename C>
SparseOp<C> product(const SparseOp<C>& a, const SparseOp<C>& b) {
  if (a.basis != b.basis) throw std::invalid_argument("product: operators on different bases");
  const FockBasis& basis = *a.basis;
  const Cutoffs& cut = basis.cutoffs();
  SparseOp<C> r(a.basis, a.shift + b.shift, compose(a.bound, a.shift, b.bound, b.shift));
  const int n = static_cast<int>(basis.size());
  for (int j = 0; j < n; ++j) {
    std::map<int, C> acc;
    for (const auto& [mid, y] : b.cols[j])
      for (const auto& [out, x] : a.cols[mid]) {
        auto it = acc.find(out);
        if (it == acc.end()) acc.emplace(out, x * y);
        else it->second = it->second + x * y;
      }
    r.cols[j] = to_sorted(acc);
  }
  // trust
  const bool masks = !a.mask.empty() || !b.mask.empty();
  for (int in = 0; in < n; ++in) {
    const FockState& sin = basis.state(in);
    const int w = sin.m + b.shift;
    const int m_out = w + a.shift;
    for (int out = 0; out < n; ++out) {
      const FockState& sout = basis.state(out);
      if (sout.m != m_out) continue;
      bool ok = cut.weight_ok(w) && a.bound.max_source_energy(sout, w) <= cut.e_max - cut.margin;
      if (ok && masks) {
        int emax_src = a.bound.max_source_energy(sout, w);
        for (int mid = 0; mid < n && ok; ++mid) {
          const FockState& sm = basis.state(mid);
          if (sm.m != w || sm.energy() > emax_src) continue;
          ok = a.trusted(out, mid) && b.trusted(mid, in);
        }
      }
      if (!ok) r.distrust(out, in);
    }
  }
  return r;
}

template <typename C>
SparseOp<C> combine(const std::vector<std::pair<C, const SparseOp<C>*>>& terms) {
  if (terms.empty()) throw std::invalid_argument("combine: no terms");
  const auto& first = *terms.front().second;
  SparseOp<C> r(first.basis, first.shift, first.bound);
  const int n = static_cast<int>(first.basis->size());
  for (int j = 0; j < n; ++j) {
    std::map<int, C> acc;
    for (const auto& [c, op] : terms) {
      if (op->basis != first.basis || op->shift != first.shift)
        throw std::invalid_argument("combine: operators of different shape");
      if (CoeffTraits<C>::is_zero(c)) continue;
      for (const auto& [row, x] : op->cols[j]) {
        auto it = acc.find(row);
        if (it == acc.end()) acc.emplace(row, c * x);
        else it->second = it->second + c * x;
      }
    }
    r.cols[j] = to_sorted(acc);
  }
  for (const auto& [c, op] : terms) {
    if (op->mask.empty()) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!op->trusted(i, j)) r.distrust(i, j);
  }
  return r;
}

template struct SparseOp<ScalarPoly>;
template struct SparseOp<Complex>;
template SparseOp<ScalarPoly> product(const SparseOp<ScalarPoly>&, const SparseOp<ScalarPoly>&);
template SparseOp<Complex> product(const SparseOp<Complex>&, const SparseOp<Complex>&);
template SparseOp<ScalarPoly> combine(const std::vector<std::pair<ScalarPoly, const SparseOp<ScalarPoly>*>>&);
template SparseOp<Complex> combine(const std::vector<std::pair<Complex, const SparseOp<Complex>*>>&);

SparseOp<ScalarPoly> heisenberg_matrix(std::shared_ptr<const FockBasis> basis, const HeisenbergOp& op) {
  int shift = op.kind == HeisenbergOp::Kind::ChargeShift ? op.n : 0;
  int lowering = op.kind == HeisenbergOp::Kind::Mode ? op.n : 0;
  SparseOp<ScalarPoly> r(basis, shift, EnergyBound{false, lowering});
  const int e_max = basis->cutoffs().e_max;
  for (size_t j = 0; j < basis->size(); ++j) {
    FockVector<ScalarPoly> v{{basis->state(j), ScalarPoly(1)}};
    std::map<int, ScalarPoly> acc;
    for (const auto& [s, c] : heisenberg_act(op, v, e_max)) {
      int i = basis->index(s);
      if (i >= 0) acc.emplace(i, c);
    }
    r.cols[j] = to_sorted(acc);
  }
  return r;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<ScalarPoly, HeisenbergOp>> shift_conjugate(const HeisenbergOp& op, const ScalarPoly& gamma,
                                                                  int e_max) {
  std::vector<std::pair<ScalarPoly, HeisenbergOp>> out;
  switch (op.kind) {
    case HeisenbergOp::Kind::P:
      out.emplace_back(ScalarPoly(gamma.vars(), 1), op);
      break;
    case HeisenbergOp::Kind::ChargeShift:
      throw std::invalid_argument("shift_conjugate: charge shifts do not conjugate to a linear combination");
    case HeisenbergOp::Kind::Mode: {
      const int n = op.n;
      if (n < 0) {
        const int k0 = -n;
        ScalarPoly g(gamma.vars(), 1);
        for (int k = 0; k0 + k <= e_max; ++k) {
          out.emplace_back(g * binomial(k0 + k - 1, k), HeisenbergOp::a(-(k0 + k)));
          g *= gamma;
        }
      } else {
        ScalarPoly g(gamma.vars(), 1);
        for (int k = 0; k < n; ++k) {
          BigRat c = binomial(n, k);
          if (k % 2) c = -c;
          out.emplace_back(g * c, HeisenbergOp::a(n - k));
          g *= gamma;
        }
        out.emplace_back(n % 2 ? -g : g, HeisenbergOp::p());
      }
      break;
    }
  }
  return out;
}

FockVector<ScalarPoly> shift_apply(const FockState& s, const ScalarPoly& gamma, int e_max) {
  // e^{gamma d}|m; lambda> = prod_i A(lambda_i) exp(m sum_n gamma^n a_{-n}/n)|m>
  FockVector<ScalarPoly> v{{FockState::vacuum(s.m), ScalarPoly(gamma.vars(), 1)}};
  if (s.m != 0) {
    // multiply by exp(sum_n m gamma^n x_n / n): accumulate factor by factor
    for (int n = 1; n <= e_max; ++n) {
      ScalarPoly cn = gamma.pow(static_cast<unsigned>(n)) * BigRat(s.m, n);
      FockVector<ScalarPoly> acc;
      FockVector<ScalarPoly> term = v;
      for (int k = 0; !term.empty(); ++k) {
        for (const auto& [t, c] : term) add_to(acc, t, c);
        FockVector<ScalarPoly> next = heisenberg_act(HeisenbergOp::a(-n), term, e_max);
        for (auto& [t, c] : next) c = c * cn * BigRat(1, k + 1);
        term = std::move(next);
      }
      v = std::move(acc);
    }
  }
  for (int part : s.parts) {
    FockVector<ScalarPoly> acc;
    for (const auto& [c, op] : shift_conjugate(HeisenbergOp::a(-part), gamma, e_max)) {
      for (const auto& [t, x] : heisenberg_act(op, v, e_max)) add_to(acc, t, x * c);
    }
    v.clear();
    for (auto& [t, x] : acc)
      if (!x.is_zero()) v.emplace(t, std::move(x));
  }
  return v;
}

SparseOp<ScalarPoly> shift_operator(std::shared_ptr<const FockBasis> basis, const ScalarPoly& gamma) {
  SparseOp<ScalarPoly> r(basis, 0, EnergyBound{true, 0});
  const int e_max = basis->cutoffs().e_max;
  for (size_t j = 0; j < basis->size(); ++j) {
    std::map<int, ScalarPoly> acc;
    for (const auto& [t, c] : shift_apply(basis->state(j), gamma, e_max)) {
      int i = basis->index(t);
      if (i >= 0) acc.emplace(i, c);
    }
    r.cols[j] = to_sorted(acc);
  }
  return r;
}

}  // namespace dyhat
