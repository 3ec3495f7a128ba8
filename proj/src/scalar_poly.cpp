#include "dyhat/scalar_poly.hpp"

#include "expr_parser.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dyhat {

BigRat parse_rat(const std::string& text) {
  BigRat r;
  if (r.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: '" + text + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

BigRat binomial(long top, long k) {
  if (k < 0) return 0;
  BigRat r = 1;
  for (long i = 0; i < k; ++i) {
    r *= BigRat(top - i);
    r /= BigRat(i + 1);
  }
  return r;
}

BigRat factorial(long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return BigRat(r);
}

namespace {

const std::shared_ptr<const VarList>& default_vars() {
  static const auto v = std::make_shared<const VarList>(VarList{kHbar});
  return v;
}

std::shared_ptr<const VarList> ensure_hbar(VarList vars) {
  if (std::find(vars.begin(), vars.end(), kHbar) == vars.end()) vars.insert(vars.begin(), kHbar);
  if (vars.size() == 1) return default_vars();
  return std::make_shared<const VarList>(std::move(vars));
}

}  // namespace

VarList merge_vars(const VarList& a, const VarList& b) {
  VarList out = a;
  for (const auto& v : b)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

ScalarPoly::ScalarPoly() : vars_(default_vars()) {}
ScalarPoly::ScalarPoly(VarList vars) : vars_(ensure_hbar(std::move(vars))) {}
ScalarPoly::ScalarPoly(const BigRat& c) : vars_(default_vars()) {
  if (c != 0) terms_.push_back({Exponents(1, 0), c});
}
ScalarPoly::ScalarPoly(long c) : ScalarPoly(BigRat(c)) {}
ScalarPoly::ScalarPoly(VarList vars, const BigRat& c) : vars_(ensure_hbar(std::move(vars))) {
  if (c != 0) terms_.push_back({Exponents(vars_->size(), 0), c});
}

ScalarPoly ScalarPoly::variable(const std::string& name) { return variable(name, {kHbar}); }

ScalarPoly ScalarPoly::variable(const std::string& name, const VarList& vars) {
  ScalarPoly p(merge_vars(vars, {name}));
  Exponents e(p.vars_->size(), 0);
  e[p.var_index(name)] = 1;
  p.terms_.push_back({std::move(e), 1});
  return p;
}

ScalarPoly ScalarPoly::monomial(VarList vars, Exponents exp, BigRat coef) {
  ScalarPoly p(std::move(vars));
  if (exp.size() != p.vars_->size()) {
    // hbar may have been prepended
    if (exp.size() + 1 == p.vars_->size()) exp.insert(exp.begin(), 0);
    else throw std::invalid_argument("monomial: exponent length mismatch");
  }
  for (int e : exp)
    if (e < 0) throw std::invalid_argument("monomial: negative exponent");
  if (coef != 0) p.terms_.push_back({std::move(exp), std::move(coef)});
  return p;
}

bool ScalarPoly::grlex_greater(const Exponents& a, const Exponents& b) {
  int da = std::accumulate(a.begin(), a.end(), 0);
  int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da > db;
  return a > b;
}

void ScalarPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& x, const Term& y) { return grlex_greater(x.exp, y.exp); });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().exp == t.exp) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef == 0) out.pop_back();
  terms_ = std::move(out);
}

bool ScalarPoly::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 &&
          std::all_of(terms_[0].exp.begin(), terms_[0].exp.end(), [](int e) { return e == 0; }));
}

BigRat ScalarPoly::constant_value() const {
  if (!is_constant()) throw std::domain_error("ScalarPoly is not constant: " + str());
  return terms_.empty() ? BigRat(0) : terms_[0].coef;
}

BigRat ScalarPoly::constant_term() const {
  if (terms_.empty()) return 0;
  const auto& last = terms_.back();
  if (std::all_of(last.exp.begin(), last.exp.end(), [](int e) { return e == 0; })) return last.coef;
  return 0;
}

int ScalarPoly::total_degree() const {
  if (terms_.empty()) return -1;
  return std::accumulate(terms_[0].exp.begin(), terms_[0].exp.end(), 0);
}

int ScalarPoly::var_index(const std::string& var) const {
  auto it = std::find(vars_->begin(), vars_->end(), var);
  return it == vars_->end() ? -1 : static_cast<int>(it - vars_->begin());
}

int ScalarPoly::degree_in(const std::string& var) const {
  int i = var_index(var);
  if (terms_.empty()) return -1;
  if (i < 0) return 0;
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.exp[i]);
  return d;
}

int ScalarPoly::min_degree_in(const std::string& var) const {
  int i = var_index(var);
  if (terms_.empty()) return 0;
  if (i < 0) return 0;
  int d = terms_[0].exp[i];
  for (const auto& t : terms_) d = std::min(d, t.exp[i]);
  return d;
}

bool ScalarPoly::contains_var(const std::string& var) const { return degree_in(var) > 0; }

const ScalarPoly::Term& ScalarPoly::leading() const {
  if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
  return terms_.front();
}

ScalarPoly ScalarPoly::with_vars(const VarList& target) const {
  if (*vars_ == target) return *this;
  ScalarPoly out(target);
  std::vector<int> map(vars_->size());
  for (size_t i = 0; i < vars_->size(); ++i) {
    int j = out.var_index((*vars_)[i]);
    map[i] = j;
    if (j < 0) {
      for (const auto& t : terms_)
        if (t.exp[i] != 0) throw std::invalid_argument("with_vars: variable " + (*vars_)[i] + " dropped");
    }
  }
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Exponents e(out.vars_->size(), 0);
    for (size_t i = 0; i < t.exp.size(); ++i)
      if (map[i] >= 0) e[map[i]] = t.exp[i];
    out.terms_.push_back({std::move(e), t.coef});
  }
  out.normalize();
  return out;
}

ScalarPoly ScalarPoly::operator-() const {
  ScalarPoly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

namespace {

// Merge two term lists already sorted by grlex (descending).
template <typename Greater>
std::vector<ScalarPoly::Term> merge_terms(const std::vector<ScalarPoly::Term>& a,
                                          const std::vector<ScalarPoly::Term>& b, int sign,
                                          Greater greater) {
  std::vector<ScalarPoly::Term> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && greater(a[i].exp, b[j].exp))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || greater(b[j].exp, a[i].exp)) {
      out.push_back({b[j].exp, sign > 0 ? b[j].coef : BigRat(-b[j].coef)});
      ++j;
    } else {
      BigRat c = sign > 0 ? BigRat(a[i].coef + b[j].coef) : BigRat(a[i].coef - b[j].coef);
      if (c != 0) out.push_back({a[i].exp, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

class PolyOps {
 public:
  static void align(ScalarPoly& a, ScalarPoly& b) {
    if (a.vars_ == b.vars_ || *a.vars_ == *b.vars_) {
      b.vars_ = a.vars_;
      return;
    }
    VarList m = merge_vars(*a.vars_, *b.vars_);
    a = a.with_vars(m);
    b = b.with_vars(m);
    b.vars_ = a.vars_;
  }
  static void add(ScalarPoly& a, ScalarPoly b, int sign) {
    align(a, b);
    a.terms_ = merge_terms(a.terms_, b.terms_, sign, ScalarPoly::grlex_greater);
  }
  static ScalarPoly mul(ScalarPoly a, ScalarPoly b) {
    align(a, b);
    ScalarPoly r;
    r.vars_ = a.vars_;
    if (a.terms_.empty() || b.terms_.empty()) return r;
    r.terms_.reserve(a.terms_.size() * b.terms_.size());
    const size_t n = a.vars_->size();
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) {
        Exponents e(n);
        for (size_t k = 0; k < n; ++k) e[k] = x.exp[k] + y.exp[k];
        r.terms_.push_back({std::move(e), x.coef * y.coef});
      }
    r.normalize();
    return r;
  }
};

ScalarPoly& ScalarPoly::operator+=(const ScalarPoly& o) {
  PolyOps::add(*this, o, +1);
  return *this;
}
ScalarPoly& ScalarPoly::operator-=(const ScalarPoly& o) {
  PolyOps::add(*this, o, -1);
  return *this;
}
ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b) { return PolyOps::mul(a, b); }
ScalarPoly& ScalarPoly::operator*=(const ScalarPoly& o) {
  *this = PolyOps::mul(*this, o);
  return *this;
}
ScalarPoly& ScalarPoly::operator*=(const BigRat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

bool operator==(const ScalarPoly& a, const ScalarPoly& b) {
  if (a.vars_ == b.vars_ || *a.vars_ == *b.vars_) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].exp != b.terms_[i].exp || a.terms_[i].coef != b.terms_[i].coef) return false;
    return true;
  }
  return (a - b).is_zero();
}

ScalarPoly ScalarPoly::pow(unsigned n) const {
  ScalarPoly result(*vars_, 1);
  ScalarPoly base = *this;
  while (n) {
    if (n & 1u) result *= base;
    n >>= 1u;
    if (n) base *= base;
  }
  return result;
}

ScalarPoly ScalarPoly::substitute(const std::map<std::string, BigRat>& values) const {
  std::vector<std::pair<int, BigRat>> subs;
  for (const auto& [name, val] : values) {
    int i = var_index(name);
    if (i >= 0) subs.emplace_back(i, val);
  }
  if (subs.empty()) return *this;
  ScalarPoly out(*vars_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term nt = t;
    for (const auto& [i, val] : subs) {
      if (nt.exp[i] != 0) {
        BigRat p;
        mpz_pow_ui(p.get_num_mpz_t(), val.get_num_mpz_t(), static_cast<unsigned long>(nt.exp[i]));
        mpz_pow_ui(p.get_den_mpz_t(), val.get_den_mpz_t(), static_cast<unsigned long>(nt.exp[i]));
        nt.coef *= p;
        nt.exp[i] = 0;
      }
    }
    if (nt.coef != 0) out.terms_.push_back(std::move(nt));
  }
  out.normalize();
  return out;
}

ScalarPoly ScalarPoly::compose(const std::string& var, const ScalarPoly& value) const {
  int i = var_index(var);
  if (i < 0) return *this;
  auto coeffs = coefficients_in(var);
  // Horner
  ScalarPoly acc(*vars_);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * value + *it;
  return acc;
}

BigRat ScalarPoly::evaluate(const std::map<std::string, BigRat>& values) const {
  ScalarPoly s = substitute(values);
  if (!s.is_constant()) throw std::invalid_argument("evaluate: unassigned variables in " + s.str());
  return s.constant_value();
}

ScalarPoly ScalarPoly::derivative(const std::string& var) const {
  int i = var_index(var);
  ScalarPoly out(*vars_);
  if (i < 0) return out;
  for (const auto& t : terms_) {
    if (t.exp[i] == 0) continue;
    Term nt = t;
    nt.coef *= nt.exp[i];
    nt.exp[i] -= 1;
    out.terms_.push_back(std::move(nt));
  }
  out.normalize();
  return out;
}

std::vector<ScalarPoly> ScalarPoly::coefficients_in(const std::string& var) const {
  int i = var_index(var);
  if (terms_.empty()) return {};
  if (i < 0) return {*this};
  std::vector<ScalarPoly> out(static_cast<size_t>(degree_in(var)) + 1, ScalarPoly(*vars_));
  for (auto& c : out) c.vars_ = vars_;
  for (const auto& t : terms_) {
    Term nt = t;
    int d = nt.exp[i];
    nt.exp[i] = 0;
    out[d].terms_.push_back(std::move(nt));
  }
  for (auto& c : out) c.normalize();
  return out;
}

ScalarPoly ScalarPoly::from_coefficients(const std::string& var, const std::vector<ScalarPoly>& coeffs,
                                         const VarList& vars) {
  ScalarPoly x = variable(var, vars);
  ScalarPoly acc(x.vars());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ScalarPoly ScalarPoly::divide_exact(const ScalarPoly& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
  ScalarPoly rem = *this;
  ScalarPoly d = divisor;
  PolyOps::align(rem, d);
  ScalarPoly quot(rem.vars());
  quot.vars_ = rem.vars_;
  const Term& lead = d.terms_.front();
  const size_t n = rem.vars_->size();
  while (!rem.is_zero()) {
    const Term& lt = rem.terms_.front();
    Exponents e(n);
    for (size_t k = 0; k < n; ++k) {
      e[k] = lt.exp[k] - lead.exp[k];
      if (e[k] < 0) throw std::domain_error("divide_exact: not divisible");
    }
    ScalarPoly q;
    q.vars_ = rem.vars_;
    q.terms_.push_back({std::move(e), lt.coef / lead.coef});
    rem -= q * d;
    quot += q;
  }
  return quot;
}

std::string ScalarPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    BigRat c = t.coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool has_var = false;
    std::ostringstream mono;
    for (size_t i = 0; i < t.exp.size(); ++i) {
      if (t.exp[i] == 0) continue;
      if (has_var) mono << "*";
      mono << (*vars_)[i];
      if (t.exp[i] != 1) mono << "^" << t.exp[i];
      has_var = true;
    }
    if (!has_var) {
      os << to_string(c);
    } else {
      if (c != 1) os << to_string(c) << "*";
      os << mono.str();
    }
  }
  return os.str();
}

std::vector<std::pair<std::string, std::map<std::string, int>>> ScalarPoly::monomial_list() const {
  std::vector<std::pair<std::string, std::map<std::string, int>>> out;
  for (const auto& t : terms_) {
    std::map<std::string, int> m;
    for (size_t i = 0; i < t.exp.size(); ++i)
      if (t.exp[i]) m[(*vars_)[i]] = t.exp[i];
    out.emplace_back(to_string(t.coef), std::move(m));
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const ScalarPoly& p) { return os << p.str(); }

// ---------------------------------------------------------------------------
// gcd: recursive primitive pseudo-remainder sequences.

namespace {

ScalarPoly monic(const ScalarPoly& p) {
  if (p.is_zero()) return p;
  return p * BigRat(1 / p.leading().coef);
}

std::string pick_main_var(const ScalarPoly& a, const ScalarPoly& b) {
  for (const auto& v : a.vars())
    if (a.degree_in(v) > 0 || b.degree_in(v) > 0) return v;
  return {};
}

ScalarPoly content_in(const ScalarPoly& p, const std::string& var);

ScalarPoly gcd_rec(const ScalarPoly& a, const ScalarPoly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return ScalarPoly(a.vars(), 1);
  std::string x = pick_main_var(a, b);
  int da = a.degree_in(x), db = b.degree_in(x);
  if (da == 0) return gcd_rec(a, content_in(b, x));
  if (db == 0) return gcd_rec(content_in(a, x), b);
  ScalarPoly ca = content_in(a, x), cb = content_in(b, x);
  ScalarPoly g_content = gcd_rec(ca, cb);
  ScalarPoly pa = a.divide_exact(ca), pb = b.divide_exact(cb);
  if (pa.degree_in(x) < pb.degree_in(x)) std::swap(pa, pb);
  while (!pb.is_zero() && pb.degree_in(x) > 0) {
    // pseudo-remainder of pa by pb in x
    auto cb_list = pb.coefficients_in(x);
    const ScalarPoly& lcb = cb_list.back();
    int dbx = pb.degree_in(x);
    ScalarPoly r = pa;
    ScalarPoly xv = ScalarPoly::variable(x, r.vars());
    while (!r.is_zero() && r.degree_in(x) >= dbx) {
      auto cr = r.coefficients_in(x);
      int dr = static_cast<int>(cr.size()) - 1;
      r = lcb * r - cr.back() * xv.pow(static_cast<unsigned>(dr - dbx)) * pb;
    }
    pa = pb;
    if (r.is_zero()) {
      pb = r;
      break;
    }
    pb = r.divide_exact(content_in(r, x));
    pb = monic(pb);
  }
  ScalarPoly g;
  if (!pb.is_zero()) {
    // pb has degree 0 in x: coprime primitive parts
    g = ScalarPoly(a.vars(), 1);
  } else {
    g = pa.divide_exact(content_in(pa, x));
  }
  return monic(g * g_content);
}

ScalarPoly content_in(const ScalarPoly& p, const std::string& var) {
  auto cs = p.coefficients_in(var);
  ScalarPoly g;
  bool first = true;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    if (first) {
      g = monic(c);
      first = false;
    } else {
      g = gcd_rec(g, c);
    }
    if (g.is_constant()) return ScalarPoly(p.vars(), 1);
  }
  return g;
}

}  // namespace

ScalarPoly poly_gcd(const ScalarPoly& a, const ScalarPoly& b) {
  ScalarPoly x = a, y = b;
  PolyOps::align(x, y);
  return gcd_rec(x, y);
}

ScalarPoly parse_poly(const std::string& text, const VarList& vars) {
  return ExprParser<ScalarPoly>(
             text, [&](const BigRat& c) { return ScalarPoly(vars, c); },
             [&](const std::string& name) { return ScalarPoly::variable(name, vars); },
             [](const ScalarPoly& a, const ScalarPoly& b) {
               if (!b.is_constant() || b.is_zero())
                 throw std::invalid_argument("parse_poly: division by non-constant");
               return a * BigRat(1 / b.constant_value());
             })
      .parse();
}

}  // namespace dyhat
