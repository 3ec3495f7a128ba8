#include "dyhat/fock.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dyhat {

int FockState::energy() const { return std::accumulate(parts.begin(), parts.end(), 0); }

int FockState::count(int n) const { return static_cast<int>(std::count(parts.begin(), parts.end(), n)); }

std::string FockState::str() const {
  std::ostringstream os;
  os << "|m=" << m;
  if (!parts.empty()) {
    os << ";";
    for (size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  }
  os << ">";
  return os.str();
}

FockState FockState::from_multiplicities(int m, const std::vector<int>& r) {
  FockState s{m, {}};
  for (int n = static_cast<int>(r.size()); n >= 1; --n)
    for (int k = 0; k < r[n - 1]; ++k) s.parts.push_back(n);
  return s;
}

std::vector<int> FockState::multiplicities(int n_max) const {
  std::vector<int> r(static_cast<size_t>(std::max(n_max, parts.empty() ? 0 : parts.front())), 0);
  for (int p : parts) ++r[p - 1];
  return r;
}

bool operator<(const FockState& a, const FockState& b) {
  int ea = a.energy(), eb = b.energy();
  if (ea != eb) return ea < eb;
  if (a.m != b.m) return a.m < b.m;
  return a.parts < b.parts;
}

void Cutoffs::validate() const {
  if (e_max < 0) throw std::invalid_argument("cutoffs: e_max must be >= 0");
  if (margin < 0 || margin > e_max) throw std::invalid_argument("cutoffs: margin must lie in [0, e_max]");
  if (m_lo > m_hi) throw std::invalid_argument("cutoffs: empty weight window");
  if (u_lo > u_hi) throw std::invalid_argument("cutoffs: empty u window");
  if (modes < 0) throw std::invalid_argument("cutoffs: modes must be >= 0");
}

std::vector<std::vector<int>> partitions_of(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // parts weakly decreasing, each <= bound
  std::function<void(int, int)> rec = [&](int rest, int bound) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rest, bound); p >= 1; --p) {
      cur.push_back(p);
      rec(rest - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  std::sort(out.begin(), out.end());
  return out;
}

FockBasis::FockBasis(int sector, const Cutoffs& cut) : sector_(sector), cut_(cut) {
  cut.validate();
  if (sector != 0 && sector != 1) throw std::invalid_argument("FockBasis: sector must be 0 or 1");
  for (int e = 0; e <= cut.e_max; ++e) {
    auto ps = partitions_of(e);
    for (int m = cut.m_lo; m <= cut.m_hi; ++m) {
      if (((m % 2) + 2) % 2 != sector) continue;
      for (const auto& p : ps) states_.push_back(FockState{m, p});
    }
  }
  for (size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], static_cast<int>(i));
}

int FockBasis::index(const FockState& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

std::string HeisenbergOp::str() const {
  switch (kind) {
    case Kind::Mode: return "a_" + std::to_string(n);
    case Kind::P: return "p";
    default: return "e^{" + std::to_string(n) + "alpha/2}";
  }
}

namespace {

ScalarPoly scale(const ScalarPoly& c, long k) { return c * BigRat(k); }
Complex scale(const Complex& c, long k) { return c * static_cast<double>(k); }

template <typename C>
void accumulate_into(FockVector<C>& v, const FockState& s, const C& c) {
  auto it = v.find(s);
  if (it == v.end()) {
    v.emplace(s, c);
  } else {
    it->second = it->second + c;
  }
}

template <typename C>
void drop_zeros(FockVector<C>& v) {
  for (auto it = v.begin(); it != v.end();) {
    if (CoeffTraits<C>::is_zero(it->second)) it = v.erase(it);
    else ++it;
  }
}

}  // namespace

template <typename C>
FockVector<C> heisenberg_act(const HeisenbergOp& op, const FockVector<C>& v, int e_max, int* overflow) {
  FockVector<C> out;
  for (const auto& [s, c] : v) {
    switch (op.kind) {
      case HeisenbergOp::Kind::P:
        if (s.m != 0) accumulate_into(out, s, scale(c, s.m));
        break;
      case HeisenbergOp::Kind::ChargeShift:
        accumulate_into(out, FockState{s.m + op.n, s.parts}, c);
        break;
      case HeisenbergOp::Kind::Mode: {
        if (op.n == 0) throw std::invalid_argument("heisenberg_act: a_0 is not represented; use a charge shift");
        if (op.n < 0) {
          FockState t = s;
          t.parts.push_back(-op.n);
          std::sort(t.parts.begin(), t.parts.end(), std::greater<int>());
          if (t.energy() > e_max) {
            if (overflow) ++*overflow;
            break;
          }
          accumulate_into(out, t, c);
        } else {
          int r = s.count(op.n);
          if (r == 0) break;
          FockState t = s;
          t.parts.erase(std::find(t.parts.begin(), t.parts.end(), op.n));
          accumulate_into(out, t, scale(c, static_cast<long>(op.n) * r));
        }
        break;
      }
    }
  }
  drop_zeros(out);
  return out;
}

template FockVector<ScalarPoly> heisenberg_act(const HeisenbergOp&, const FockVector<ScalarPoly>&, int, int*);
template FockVector<Complex> heisenberg_act(const HeisenbergOp&, const FockVector<Complex>&, int, int*);

// ---------------------------------------------------------------------------
// Vertex operators

namespace {

USeries upoly(const std::map<int, ScalarPoly>& cs) { return USeries::polynomial("u", cs); }

USeries clip(const USeries& s, int limit) {
  if (s.exact() || s.region() != Region::AtInfinity || s.min_power() >= limit || s.empty_window()) return s;
  return s.narrowed(limit, s.max_power());
}

// (u + a)^n for n >= 0 as an exact polynomial in u.
USeries shifted_power(const ScalarPoly& a, int n) {
  std::map<int, ScalarPoly> cs;
  ScalarPoly ak(1);
  for (int k = 0; k <= n; ++k) {
    cs[n - k] = ak * binomial(n, k);
    ak *= a;
  }
  return upoly(cs);
}

// (u + a)^{-n} expanded at infinity down to `limit`.
USeries shifted_inverse_power(const ScalarPoly& a, int n, int limit) {
  if (a.is_zero()) return USeries::monomial("u", -n, ScalarPoly(1));
  USeries s("u", Region::AtInfinity, limit, -n, false);
  // (u+a)^{-n} = sum_k binom(-n, k) a^k u^{-n-k}
  ScalarPoly ak(1);
  for (int k = 0; -n - k >= limit; ++k) {
    s.set(-n - k, ak * binomial(-n, k));
    ak *= a;
  }
  return s;
}

USeries one_series() { return USeries::constant("u", ScalarPoly(1)); }

USeries weight_power(const VertexOpSpec& spec, int m) {
  const USeries& base = m >= 0 ? spec.weight_base : spec.weight_base_inv;
  USeries r = one_series();
  for (int i = 0; i < std::abs(m); ++i) r = clip(r * base, spec.limit);
  return r;
}

}  // namespace

void VertexOpSpec::finalize(int e_max) {
  creation_table.clear();
  // exp(sum_n c_n x_n / n) = prod_n sum_k (c_n/n)^k x_n^k / k!
  std::vector<std::vector<USeries>> powers(static_cast<size_t>(e_max) + 1);
  for (int n = 1; n <= e_max; ++n) {
    USeries c = n <= static_cast<int>(creation.size()) ? creation[n - 1] : USeries();
    USeries cn = c * ScalarPoly(BigRat(1, n));
    auto& pw = powers[n];
    pw.push_back(one_series());
    for (int k = 1; k * n <= e_max; ++k) pw.push_back(clip(pw.back() * cn * ScalarPoly(BigRat(1, k)), limit));
  }
  for (int e = 0; e <= e_max; ++e)
    for (const auto& p : partitions_of(e)) {
      FockState s{0, p};
      auto r = s.multiplicities(e_max);
      USeries coef = one_series();
      bool zero = false;
      for (int n = 1; n <= e_max && !zero; ++n) {
        if (r[n - 1] == 0) continue;
        const USeries& f = powers[n][r[n - 1]];
        if (f.is_zero()) zero = true;
        else coef = clip(coef * f, limit);
      }
      if (!zero) creation_table.emplace_back(s, coef);
    }
}

VertexOpSpec vertex_e(int e_max, int limit) {
  VertexOpSpec s;
  s.name = "e";
  s.limit = limit;
  ScalarPoly h = ScalarPoly::variable(kHbar);
  for (int n = 1; n <= e_max; ++n) {
    s.creation.push_back(shifted_power(-h, n) + shifted_power(ScalarPoly(0), n));
    s.annihilation.push_back(USeries::monomial("u", -n, ScalarPoly(-1)));
  }
  s.shift = 2;
  s.weight_base = USeries::monomial("u", 1, ScalarPoly(1));
  s.weight_base_inv = USeries::monomial("u", -1, ScalarPoly(1));
  s.finalize(e_max);
  return s;
}

VertexOpSpec vertex_f(int e_max, int limit) {
  VertexOpSpec s;
  s.name = "f";
  s.limit = limit;
  ScalarPoly h = ScalarPoly::variable(kHbar);
  for (int n = 1; n <= e_max; ++n) {
    s.creation.push_back(-(shifted_power(h, n) + shifted_power(ScalarPoly(0), n)));
    s.annihilation.push_back(USeries::monomial("u", -n, ScalarPoly(1)));
  }
  s.shift = -2;
  s.weight_base = USeries::monomial("u", -1, ScalarPoly(1));
  s.weight_base_inv = USeries::monomial("u", 1, ScalarPoly(1));
  s.finalize(e_max);
  return s;
}

VertexOpSpec vertex_hminus(int e_max, int limit) {
  VertexOpSpec s;
  s.name = "h-";
  s.limit = limit;
  ScalarPoly h = ScalarPoly::variable(kHbar);
  for (int n = 1; n <= e_max; ++n) s.creation.push_back(shifted_power(-h, n) - shifted_power(h, n));
  s.weight_base = one_series();
  s.weight_base_inv = one_series();
  s.finalize(e_max);
  return s;
}

VertexOpSpec vertex_hplus(int e_max, int limit) {
  VertexOpSpec s;
  s.name = "h+";
  s.limit = limit;
  ScalarPoly h = ScalarPoly::variable(kHbar);
  for (int n = 1; n <= e_max; ++n)
    s.annihilation.push_back(shifted_inverse_power(-h, n, limit) - USeries::monomial("u", -n, ScalarPoly(1)));
  // u/(u - hbar) and its inverse 1 - hbar/u
  s.weight_base = shifted_inverse_power(-h, 1, limit) * USeries::monomial("u", 1, ScalarPoly(1));
  s.weight_base_inv = upoly({{0, ScalarPoly(1)}, {-1, -h}});
  s.finalize(e_max);
  return s;
}

VertexOpSpec vertex_phi_minus(const ScalarPoly& a, bool inverse, int e_max, int limit) {
  VertexOpSpec s;
  s.name = inverse ? "phi-^-1" : "phi-";
  s.limit = limit;
  for (int n = 1; n <= e_max; ++n) {
    USeries c = shifted_power(a, n);
    s.creation.push_back(inverse ? -c : c);
  }
  s.shift = inverse ? -1 : 1;
  s.weight_base = one_series();
  s.weight_base_inv = one_series();
  s.finalize(e_max);
  return s;
}

VertexOpSpec vertex_phi_plus(const ScalarPoly& a, bool inverse, int e_max, int limit) {
  VertexOpSpec s;
  s.name = inverse ? "phi+^-1" : "phi+";
  s.limit = limit;
  for (int n = 1; n <= e_max; ++n) {
    USeries d = shifted_inverse_power(a, n, limit);
    s.annihilation.push_back(inverse ? -d : d);
  }
  // phi_+(u) carries (u+a)^{-p}
  USeries down = shifted_inverse_power(a, 1, limit), up = shifted_power(a, 1);
  s.weight_base = inverse ? up : down;
  s.weight_base_inv = inverse ? down : up;
  s.finalize(e_max);
  return s;
}

FockVector<USeries> apply_vertex(const VertexOpSpec& spec, const FockState& state, const Cutoffs& cut) {
  const int e_max = cut.e_max;
  if (state.energy() > e_max) throw std::invalid_argument("apply_vertex: input state above e_max");
  const int m_out = state.m + spec.shift;
  if (!cut.weight_ok(m_out))
    throw std::out_of_range("apply_vertex: weight " + std::to_string(m_out) + " leaves the window");

  // annihilation part: x_n -> x_n + d_n on prod x_n^{r_n}
  auto r = state.multiplicities(e_max);
  std::map<std::vector<int>, USeries> poly{{std::vector<int>(r.size(), 0), one_series()}};
  for (int n = 1; n <= static_cast<int>(r.size()); ++n) {
    int rn = r[n - 1];
    if (rn == 0) continue;
    USeries d = n <= static_cast<int>(spec.annihilation.size()) ? spec.annihilation[n - 1] : USeries();
    std::vector<USeries> dpow{one_series()};
    for (int k = 1; k <= rn; ++k) dpow.push_back(clip(dpow.back() * d, spec.limit));
    std::map<std::vector<int>, USeries> next;
    for (const auto& [mono, c] : poly)
      for (int j = 0; j <= rn; ++j) {
        const USeries& dp = dpow[rn - j];
        if (dp.is_zero()) continue;
        auto key = mono;
        key[n - 1] = j;
        USeries t = clip(c * dp * ScalarPoly(binomial(rn, j)), spec.limit);
        auto it = next.find(key);
        if (it == next.end()) next.emplace(key, t);
        else it->second = it->second + t;
      }
    poly = std::move(next);
  }

  USeries w = clip(weight_power(spec, state.m) * spec.prefactor, spec.limit);
  FockVector<USeries> out;
  for (const auto& [mono, c] : poly) {
    int e_rest = 0;
    for (size_t i = 0; i < mono.size(); ++i) e_rest += static_cast<int>(i + 1) * mono[i];
    USeries cw = clip(c * w, spec.limit);
    if (cw.is_zero()) continue;
    for (const auto& [mu, cmu] : spec.creation_table) {
      if (e_rest + mu.energy() > e_max) continue;
      auto rm = mu.multiplicities(e_max);
      std::vector<int> total(static_cast<size_t>(e_max), 0);
      for (size_t i = 0; i < mono.size() && i < total.size(); ++i) total[i] += mono[i];
      for (size_t i = 0; i < rm.size() && i < total.size(); ++i) total[i] += rm[i];
      FockState t = FockState::from_multiplicities(m_out, total);
      USeries v = clip(cw * cmu, spec.limit);
      auto it = out.find(t);
      if (it == out.end()) out.emplace(t, v);
      else it->second = it->second + v;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero()) it = out.erase(it);
    else ++it;
  }
  return out;
}

FockVector<USeries> apply_vertex(const VertexOpSpec& spec, const FockVector<USeries>& v, const Cutoffs& cut) {
  FockVector<USeries> out;
  for (const auto& [s, c] : v) {
    for (const auto& [t, x] : apply_vertex(spec, s, cut)) {
      USeries y = clip(x * c, spec.limit);
      auto it = out.find(t);
      if (it == out.end()) out.emplace(t, y);
      else it->second = it->second + y;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero()) it = out.erase(it);
    else ++it;
  }
  return out;
}

FockVector<ScalarPoly> mode_coefficient(const FockVector<USeries>& applied, int power) {
  FockVector<ScalarPoly> out;
  for (const auto& [s, c] : applied) {
    ScalarPoly x = c.coefficient(power);
    if (!x.is_zero()) out.emplace(s, std::move(x));
  }
  return out;
}

}  // namespace dyhat
