#include "dyhat/yangian_rep.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dyhat {

const char* family_name(Family f) {
  switch (f) {
    case Family::E: return "e";
    case Family::F: return "f";
    case Family::HPlus: return "h+";
    default: return "h-";
  }
}

int family_shift(Family f) {
  switch (f) {
    case Family::E: return 2;
    case Family::F: return -2;
    default: return 0;
  }
}

int mode_power(Family f, int index) {
  switch (f) {
    case Family::E:
    case Family::F: return -index - 1;
    case Family::HPlus: return -index;
    default: return index;
  }
}

bool family_has_power(Family f, int power) {
  if (f == Family::HPlus) return power <= 0;
  if (f == Family::HMinus) return power >= 0;
  return true;
}

namespace {

// Homogeneity in hbar bounds how far a coefficient of u^power lowers energy.
EnergyBound mode_bound(Family f, int power) {
  switch (f) {
    case Family::E:
    case Family::F: return EnergyBound{true, -power - 1};
    default: return EnergyBound{true, -power};
  }
}

const ScalarPoly& hbar() {
  static const ScalarPoly h = ScalarPoly::variable(kHbar);
  return h;
}

}  // namespace

LevelOneRep::LevelOneRep(int sector, const Cutoffs& cut) : sector_(sector), cut_(cut) {
  cut_.validate();
  basis_ = std::make_shared<FockBasis>(sector, cut_);
  // Exchange checks reach two powers below the window, the delta relation
  // reaches H_j with j up to 2 * modes + 1.
  limit_ = std::min(cut_.u_lo - 2, -(2 * cut_.modes + 1)) - 2;
}

const std::vector<FockVector<USeries>>& LevelOneRep::images(Family f) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = images_.find(f);
  if (it != images_.end()) return it->second;
  VertexOpSpec spec;
  switch (f) {
    case Family::E: spec = vertex_e(cut_.e_max, limit_); break;
    case Family::F: spec = vertex_f(cut_.e_max, limit_); break;
    case Family::HPlus: spec = vertex_hplus(cut_.e_max, limit_); break;
    case Family::HMinus: spec = vertex_hminus(cut_.e_max, limit_); break;
  }
  std::vector<FockVector<USeries>> out(basis_->size());
  for (size_t j = 0; j < basis_->size(); ++j) {
    const FockState& s = basis_->state(j);
    if (!cut_.weight_ok(s.m + spec.shift)) continue;
    out[j] = apply_vertex(spec, s, cut_);
  }
  return images_.emplace(f, std::move(out)).first->second;
}

const SparseOp<ScalarPoly>& LevelOneRep::coefficient(Family f, int power) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_pair(f, power);
  auto it = coeffs_.find(key);
  if (it != coeffs_.end()) return it->second;
  SparseOp<ScalarPoly> op(basis_, family_shift(f), mode_bound(f, power));
  if (family_has_power(f, power)) {
    const auto& imgs = images(f);
    for (size_t j = 0; j < basis_->size(); ++j) {
      for (const auto& [s, x] : imgs[j]) {
        if (!x.known(power)) throw std::out_of_range("mode coefficient below the retained series window");
        ScalarPoly c = x[power];
        if (c.is_zero()) continue;
        int i = basis_->index(s);
        if (i >= 0) op.cols[j].emplace_back(i, std::move(c));
      }
      std::sort(op.cols[j].begin(), op.cols[j].end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    }
  }
  return coeffs_.emplace(key, std::move(op)).first->second;
}

const SparseOp<ScalarPoly>& LevelOneRep::product(Family a, int pa, Family b, int pb) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_tuple(a, pa, b, pb);
  auto it = products_.find(key);
  if (it != products_.end()) return it->second;
  auto r = dyhat::product(coefficient(a, pa), coefficient(b, pb));
  return products_.emplace(key, std::move(r)).first->second;
}

ModeOperator LevelOneRep::mode(Family f, int index) const {
  if ((f == Family::HPlus || f == Family::HMinus) && index < 0)
    throw std::invalid_argument(std::string("mode: ") + family_name(f) + " has no mode " + std::to_string(index));
  int power = mode_power(f, index);
  return ModeOperator{f, index, power, coefficient(f, power)};
}

ModeOperator build_mode(Family f, int index, int sector, const Cutoffs& cut) {
  LevelOneRep rep(sector, cut);
  return rep.mode(f, index);
}

SparseOp<ScalarPoly> h_mode(const LevelOneRep& rep, int k) {
  SparseOp<ScalarPoly> r;
  if (k >= 0) {
    r = rep.mode(Family::HPlus, k + 1).op;
  } else {
    r = rep.mode(Family::HMinus, -k - 1).op;
    for (auto& col : r.cols)
      for (auto& [i, x] : col) x = -x;
    if (k == -1)
      for (size_t j = 0; j < r.basis->size(); ++j) {
        auto& col = r.cols[j];
        auto it = std::find_if(col.begin(), col.end(), [&](const auto& e) { return e.first == static_cast<int>(j); });
        if (it == col.end()) {
          col.emplace_back(static_cast<int>(j), ScalarPoly(1));
          std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        } else {
          it->second += ScalarPoly(1);
        }
      }
  }
  for (auto& col : r.cols) {
    for (auto& [i, x] : col) x = x.divide_exact(hbar());
    col.erase(std::remove_if(col.begin(), col.end(), [](const auto& e) { return e.second.is_zero(); }), col.end());
  }
  return r;
}

// ---------------------------------------------------------------------------

const std::vector<RelationInstance>& exchange_relations() {
  static const std::vector<RelationInstance> rels = [] {
    const VarList vars{kHbar, "u", "v"};
    auto P = [&](const char* s) { return parse_poly(s, vars); };
    return std::vector<RelationInstance>{
        {"ee", Family::E, Family::E, P("u-v-hbar"), P("u-v+hbar")},
        {"ff", Family::F, Family::F, P("u-v+hbar"), P("u-v-hbar")},
        {"h+e", Family::HPlus, Family::E, P("u-v-hbar"), P("u-v+hbar")},
        {"h-e", Family::HMinus, Family::E, P("u-v-hbar"), P("u-v+hbar")},
        {"h+f", Family::HPlus, Family::F, P("u-v"), P("u-v-2*hbar")},
        {"h-f", Family::HMinus, Family::F, P("u-v+hbar"), P("u-v-hbar")},
        {"h+h-", Family::HPlus, Family::HMinus, P("(u-v-hbar)*(u-v)"), P("(u-v+hbar)*(u-v-2*hbar)")},
        {"h+h+", Family::HPlus, Family::HPlus, P("1"), P("1")},
        {"h-h-", Family::HMinus, Family::HMinus, P("1"), P("1")},
    };
  }();
  return rels;
}

std::optional<RelationInstance> find_relation(const std::string& id) {
  for (const auto& r : exchange_relations())
    if (r.id == id) return r;
  return std::nullopt;
}

std::vector<std::string> relation_catalog() {
  std::vector<std::string> ids;
  for (const auto& r : exchange_relations()) ids.push_back(r.id);
  ids.push_back("ef-delta");
  ids.push_back("d-cov");
  return ids;
}

void record_operator(Residual& r, const SparseOp<ScalarPoly>& diff, const std::string& label) {
  const FockBasis& basis = *diff.basis;
  for (size_t j = 0; j < basis.size(); ++j) {
    const FockState& in = basis.state(j);
    const int m_out = in.m + diff.shift;
    if (!basis.cutoffs().weight_ok(m_out)) continue;
    auto col = diff.column(static_cast<int>(j));
    for (size_t i = 0; i < basis.size(); ++i) {
      const FockState& out = basis.state(i);
      if (out.m != m_out) continue;
      if (!diff.trusted(static_cast<int>(i), static_cast<int>(j))) {
        ++r.flagged;
        continue;
      }
      auto it = col.find(out);
      bool zero = it == col.end() || it->second.is_zero();
      r.record_exact(zero, label + " " + out.str() + "<-" + in.str(), zero ? "0" : it->second.str());
    }
  }
}

namespace {

struct Monomial {
  int u = 0, v = 0;
  ScalarPoly coef;  // in hbar only
};

std::vector<Monomial> split_uv(const ScalarPoly& p) {
  std::vector<Monomial> out;
  const int iu = p.var_index("u"), iv = p.var_index("v"), ih = p.var_index(kHbar);
  for (const auto& t : p.terms()) {
    Monomial m;
    m.u = iu >= 0 ? t.exp[iu] : 0;
    m.v = iv >= 0 ? t.exp[iv] : 0;
    int h = ih >= 0 ? t.exp[ih] : 0;
    m.coef = hbar().pow(static_cast<unsigned>(h)) * t.coef;
    out.push_back(std::move(m));
  }
  return out;
}

using Terms = std::vector<std::pair<ScalarPoly, const SparseOp<ScalarPoly>*>>;

}  // namespace

Residual verify_exchange(const LevelOneRep& rep, const RelationInstance& rel) {
  Residual r;
  r.id = rel.id;
  const Cutoffs& cut = rep.cutoffs();
  const auto pm = split_uv(rel.p), qm = split_uv(rel.q);
  for (int a = cut.u_lo; a <= cut.u_hi; ++a)
    for (int b = cut.u_lo; b <= cut.u_hi; ++b) {
      Terms terms;
      for (const auto& m : pm) {
        int pa = a - m.u, pb = b - m.v;
        if (!family_has_power(rel.a, pa) || !family_has_power(rel.b, pb)) continue;
        terms.emplace_back(m.coef, &rep.product(rel.a, pa, rel.b, pb));
      }
      for (const auto& m : qm) {
        int pa = a - m.u, pb = b - m.v;
        if (!family_has_power(rel.a, pa) || !family_has_power(rel.b, pb)) continue;
        terms.emplace_back(-m.coef, &rep.product(rel.b, pb, rel.a, pa));
      }
      if (terms.empty()) continue;  // both sides vanish identically
      auto diff = combine(terms);
      std::ostringstream label;
      label << rel.id << " u^" << a << " v^" << b;
      record_operator(r, diff, label.str());
    }
  r.finish();
  return r;
}

Residual verify_ef_delta(const LevelOneRep& rep) {
  Residual r;
  r.id = "ef-delta";
  const Cutoffs& cut = rep.cutoffs();
  for (int k = -cut.modes; k <= cut.modes; ++k)
    for (int l = -cut.modes; l <= cut.modes; ++l) {
      const int pk = -k - 1, pl = -l - 1, s = k + l + 1;
      // hbar (e_k f_l - f_l e_k) = sum_{j=0}^{s} C(k-j, s-j) hbar^{s-j} H_j - [s <= 0] Hm_{-s}
      Terms terms;
      terms.emplace_back(hbar(), &rep.product(Family::E, pk, Family::F, pl));
      terms.emplace_back(-hbar(), &rep.product(Family::F, pl, Family::E, pk));
      for (int j = 0; j <= s; ++j) {
        BigRat c = binomial(k - j, s - j);
        if (c == 0) continue;
        terms.emplace_back(-(hbar().pow(static_cast<unsigned>(s - j)) * c), &rep.coefficient(Family::HPlus, -j));
      }
      if (s <= 0) terms.emplace_back(ScalarPoly(1), &rep.coefficient(Family::HMinus, -s));
      auto diff = combine(terms);
      std::ostringstream label;
      label << "[e_" << k << ",f_" << l << "]";
      record_operator(r, diff, label.str());
    }
  r.finish();
  return r;
}

namespace {

// Coefficient of gamma^g, g <= degree, of every entry must vanish.
void record_gamma_layers(Residual& r, const SparseOp<ScalarPoly>& diff, int degree, const std::string& label) {
  const FockBasis& basis = *diff.basis;
  for (size_t j = 0; j < basis.size(); ++j) {
    const FockState& in = basis.state(j);
    const int m_out = in.m + diff.shift;
    if (!basis.cutoffs().weight_ok(m_out)) continue;
    auto col = diff.column(static_cast<int>(j));
    for (size_t i = 0; i < basis.size(); ++i) {
      const FockState& out = basis.state(i);
      if (out.m != m_out) continue;
      if (!diff.trusted(static_cast<int>(i), static_cast<int>(j))) {
        ++r.flagged;
        continue;
      }
      auto it = col.find(out);
      ScalarPoly low;
      if (it != col.end()) {
        auto layers = it->second.coefficients_in(kGamma);
        for (int g = 0; g <= degree && g < static_cast<int>(layers.size()); ++g)
          if (!layers[g].is_zero()) {
            low = layers[g];
            break;
          }
      }
      bool zero = low.is_zero();
      r.record_exact(zero, label + " " + out.str() + "<-" + in.str(), zero ? "0" : low.str());
    }
  }
}

}  // namespace

Residual verify_d_covariance(const LevelOneRep& rep, int gamma_degree) {
  Residual r;
  r.id = "d-cov";
  const Cutoffs& cut = rep.cutoffs();
  const auto& basis = rep.basis();
  const ScalarPoly g = ScalarPoly::variable(kGamma);
  const auto T = shift_operator(basis, g);
  auto gpow = [&](int n) { return g.pow(static_cast<unsigned>(n)); };

  for (Family f : {Family::E, Family::F, Family::HPlus, Family::HMinus})
    for (int P = cut.u_lo; P <= cut.u_hi; ++P) {
      if (!family_has_power(f, P)) continue;
      // T X_P = sum_j c_j X_{P_j} T
      std::vector<std::pair<ScalarPoly, int>> mix;  // coefficient, power
      switch (f) {
        case Family::E:
        case Family::F: {
          const int k = -P - 1;
          for (int j = 0; j <= gamma_degree; ++j) mix.emplace_back(gpow(j) * binomial(j - k - 1, j), P + j);
          break;
        }
        case Family::HPlus: {
          const int jp = -P;
          for (int j = std::max(0, jp - gamma_degree); j <= jp; ++j)
            mix.emplace_back(gpow(jp - j) * binomial(-j, jp - j), -j);
          break;
        }
        case Family::HMinus: {
          const int jp = P;
          for (int gg = 0; gg <= gamma_degree; ++gg) mix.emplace_back(gpow(gg) * binomial(jp + gg, gg), jp + gg);
          break;
        }
      }
      auto TX = dyhat::product(T, rep.coefficient(f, P));
      std::vector<SparseOp<ScalarPoly>> rhs;
      rhs.reserve(mix.size());
      for (const auto& [c, p] : mix) rhs.push_back(dyhat::product(rep.coefficient(f, p), T));
      Terms terms{{ScalarPoly(1), &TX}};
      for (size_t i = 0; i < mix.size(); ++i) terms.emplace_back(-mix[i].first, &rhs[i]);
      auto diff = combine(terms);
      std::ostringstream label;
      label << family_name(f) << " u^" << P;
      record_gamma_layers(r, diff, gamma_degree, label.str());
    }

  // Heisenberg generators
  std::vector<HeisenbergOp> gens{HeisenbergOp::p()};
  for (int n = 1; n <= std::min(3, cut.e_max); ++n) {
    gens.push_back(HeisenbergOp::a(n));
    gens.push_back(HeisenbergOp::a(-n));
  }
  for (const auto& x : gens) {
    auto TX = dyhat::product(T, heisenberg_matrix(basis, x));
    auto conj = shift_conjugate(x, g, cut.e_max);
    std::vector<SparseOp<ScalarPoly>> rhs;
    rhs.reserve(conj.size());
    for (const auto& [c, op] : conj) rhs.push_back(dyhat::product(heisenberg_matrix(basis, op), T));
    Terms terms{{ScalarPoly(1), &TX}};
    for (size_t i = 0; i < conj.size(); ++i) terms.emplace_back(-conj[i].first, &rhs[i]);
    record_gamma_layers(r, combine(terms), gamma_degree, x.str());
  }
  r.finish();
  return r;
}

Residual verify_shift_brackets(const LevelOneRep& rep, int gamma_degree) {
  Residual r;
  r.id = "shift-brackets";
  const Cutoffs& cut = rep.cutoffs();
  const auto& basis = rep.basis();
  const ScalarPoly g = ScalarPoly::variable(kGamma);
  const auto one = heisenberg_matrix(basis, HeisenbergOp::shift(0));
  const int top = std::min(3, cut.e_max);
  // T a_n T^{-1} as an operator on the truncated basis
  std::map<int, SparseOp<ScalarPoly>> conj;
  for (int n = -top; n <= top; ++n) {
    if (n == 0) continue;
    auto parts = shift_conjugate(HeisenbergOp::a(n), g, cut.e_max);
    std::vector<SparseOp<ScalarPoly>> mats;
    mats.reserve(parts.size());
    for (const auto& [c, op] : parts) mats.push_back(heisenberg_matrix(basis, op));
    Terms terms;
    for (size_t i = 0; i < parts.size(); ++i) terms.emplace_back(parts[i].first, &mats[i]);
    conj.emplace(n, combine(terms));
  }
  for (const auto& [n, x] : conj)
    for (const auto& [m, y] : conj) {
      if (m < n) continue;
      auto xy = dyhat::product(x, y), yx = dyhat::product(y, x);
      Terms terms{{ScalarPoly(1), &xy}, {ScalarPoly(-1), &yx}};
      if (n + m == 0) terms.emplace_back(ScalarPoly(-n), &one);
      std::ostringstream label;
      label << "[Ta_" << n << ",Ta_" << m << "]";
      record_gamma_layers(r, combine(terms), gamma_degree, label.str());
    }
  r.finish();
  return r;
}

Residual verify_relation(const LevelOneRep& rep, const std::string& id, int gamma_degree) {
  if (id == "shift-brackets") return verify_shift_brackets(rep, gamma_degree);
  if (id == "ef-delta") return verify_ef_delta(rep);
  if (id == "d-cov") return verify_d_covariance(rep, gamma_degree);
  auto rel = find_relation(id);
  if (!rel) throw std::invalid_argument("unknown relation id: " + id);
  return verify_exchange(rep, *rel);
}

}  // namespace dyhat
