#include "dyhat/eval_rmatrix.hpp"

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

namespace dyhat {

const char* gen_name(Gen g) {
  switch (g) {
    case Gen::E: return "e";
    case Gen::F: return "f";
    default: return "h";
  }
}

namespace {

const VarList& vars_xyz() {
  static const VarList v{kHbar, "u", "x", "y", "z"};
  return v;
}

RatFun var(const std::string& name) { return RatFun::variable(name, vars_xyz()); }
RatFun hbar_q() { return var(kHbar); }

MatrixQ unit2(Gen g) {
  MatrixQ m(2);
  switch (g) {
    case Gen::E: m(0, 1) = RatFun(1); break;
    case Gen::F: m(1, 0) = RatFun(1); break;
    case Gen::H:
      m(0, 0) = RatFun(1);
      m(1, 1) = RatFun(-1);
      break;
  }
  return m;
}

std::string first_nonzero(const MatrixQ& m) {
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j)
      if (!m(i, j).is_zero()) return "(" + std::to_string(i) + "," + std::to_string(j) + ") " + m(i, j).str();
  return "0";
}

void record_matrix(Residual& r, const MatrixQ& m, const std::string& where) {
  bool zero = m.is_zero();
  r.record_exact(zero, where, zero ? "0" : first_nonzero(m));
}

MatrixQ comm(const MatrixQ& a, const MatrixQ& b) { return a * b - b * a; }
MatrixQ anti(const MatrixQ& a, const MatrixQ& b) { return a * b + b * a; }

}  // namespace

MatrixQ eval_generator(Gen g, int k, const RatFun& x) { return x.pow(k) * unit2(g); }

Residual check_mode_relations(const ModeImage& image, int lo, int hi, const std::string& id) {
  Residual r;
  r.id = id;
  std::map<std::pair<Gen, int>, MatrixQ> cache;
  auto img = [&](Gen g, int k) -> const MatrixQ& {
    auto key = std::make_pair(g, k);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, image(g, k)).first;
    return it->second;
  };
  const RatFun h = hbar_q();
  auto label = [](const char* what, int k, int l) {
    std::ostringstream os;
    os << what << " k=" << k << " l=" << l;
    return os.str();
  };
  for (int l = lo; l <= hi; ++l) {
    record_matrix(r, comm(img(Gen::H, 0), img(Gen::E, l)) - RatFun(2) * img(Gen::E, l), label("[h0,e]", 0, l));
    record_matrix(r, comm(img(Gen::H, 0), img(Gen::F, l)) + RatFun(2) * img(Gen::F, l), label("[h0,f]", 0, l));
  }
  for (int k = lo; k <= hi; ++k)
    for (int l = lo; l <= hi; ++l) {
      record_matrix(r, comm(img(Gen::H, k), img(Gen::H, l)), label("[h,h]", k, l));
      record_matrix(r, comm(img(Gen::E, k), img(Gen::F, l)) - img(Gen::H, k + l), label("[e,f]", k, l));
      record_matrix(r,
                    comm(img(Gen::H, k + 1), img(Gen::E, l)) - comm(img(Gen::H, k), img(Gen::E, l + 1)) -
                        h * anti(img(Gen::H, k), img(Gen::E, l)),
                    label("he", k, l));
      record_matrix(r,
                    comm(img(Gen::H, k + 1), img(Gen::F, l)) - comm(img(Gen::H, k), img(Gen::F, l + 1)) +
                        h * anti(img(Gen::H, k), img(Gen::F, l)),
                    label("hf", k, l));
      record_matrix(r,
                    comm(img(Gen::E, k + 1), img(Gen::E, l)) - comm(img(Gen::E, k), img(Gen::E, l + 1)) -
                        h * anti(img(Gen::E, k), img(Gen::E, l)),
                    label("ee", k, l));
      record_matrix(r,
                    comm(img(Gen::F, k + 1), img(Gen::F, l)) - comm(img(Gen::F, k), img(Gen::F, l + 1)) +
                        h * anti(img(Gen::F, k), img(Gen::F, l)),
                    label("ff", k, l));
    }
  r.finish();
  return r;
}

Residual verify_defining_modes_eval(int lo, int hi) {
  const RatFun x = var("x");
  return check_mode_relations([&](Gen g, int k) { return eval_generator(g, k, x); }, lo, hi, "eval-modes");
}

MatrixQ rbar(const RatFun& u) {
  const RatFun h = RatFun::variable(kHbar, u.num().vars());
  const RatFun den = u + h;
  if (den.is_zero()) throw std::domain_error("rbar: pole at u = -hbar");
  MatrixQ m(4);
  m(0, 0) = RatFun(1);
  m(3, 3) = RatFun(1);
  m(1, 1) = u / den;
  m(2, 2) = u / den;
  m(1, 2) = h / den;
  m(2, 1) = h / den;
  return m;
}

MatrixC rbar(Complex u, double hbar) {
  const Complex den = u + hbar;
  if (std::abs(den) == 0.0) throw std::domain_error("rbar: pole at u = -hbar");
  MatrixC m(4);
  m(0, 0) = 1.0;
  m(3, 3) = 1.0;
  m(1, 1) = u / den;
  m(2, 2) = u / den;
  m(1, 2) = hbar / den;
  m(2, 1) = hbar / den;
  return m;
}

// ---------------------------------------------------------------------------

Complex log_gamma(Complex z) {
  static const double kPi = std::acos(-1.0);
  if (z.real() < 0.5) return std::log(kPi / std::sin(kPi * z)) - log_gamma(1.0 - z);
  static const double g = 7.0;
  static const double p[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  Complex a = p[0];
  for (int i = 1; i < 9; ++i) a += p[i] / (z + static_cast<double>(i));
  Complex t = z + g + 0.5;
  return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

namespace {

void guard_pole(Complex a, double eps, const char* what) {
  double n = std::round(a.real());
  if (n <= 0 && std::abs(a - n) < eps) throw std::domain_error(std::string("rho: near a pole of ") + what);
}

}  // namespace

Complex rho(int eps, Complex u, double hbar, double pole_eps) {
  if (eps != 1 && eps != -1) throw std::invalid_argument("rho: eps must be +1 or -1");
  if (hbar == 0.0) throw std::domain_error("rho: hbar = 0");
  const Complex a = -static_cast<double>(eps) * u / (2 * hbar);
  guard_pole(a, pole_eps, "Gamma(a)");
  guard_pole(1.0 + a, pole_eps, "Gamma(1+a)");
  guard_pole(0.5 + a, pole_eps, "Gamma(1/2+a)");
  Complex l = log_gamma(a) + log_gamma(1.0 + a) - 2.0 * log_gamma(0.5 + a);
  return std::exp(static_cast<double>(eps) * l);
}

// ---------------------------------------------------------------------------

const char* ybe_name(YbeKind k) {
  switch (k) {
    case YbeKind::PurePlus: return "ybe+";
    case YbeKind::PureMinus: return "ybe-";
    default: return "ybe-mixed";
  }
}

namespace {

// The slots of one YBE instance, as 4x4 blocks on W_a (x) W_b.
template <typename T, typename RB>
Matrix<T> ybe_residual_generic(YbeKind kind, const T& x, const T& y, const T& z, RB rb) {
  const Matrix<T> P = flip4<T>();
  // image of R^- type elements: Rbar(a - b); of R^+ type: (P Rbar(b - a) P)^{-1}
  auto minus = [&](const T& a, const T& b) { return rb(a - b); };
  auto plus = [&](const T& a, const T& b) { return inverse(P * rb(b - a) * P); };
  Matrix<T> r12, l1, l2;
  switch (kind) {
    case YbeKind::PureMinus:
      r12 = minus(x, y);
      l1 = minus(x, z);
      l2 = minus(y, z);
      break;
    case YbeKind::PurePlus:
      r12 = plus(x, y);
      l1 = plus(x, z);
      l2 = plus(y, z);
      break;
    case YbeKind::Mixed:
      r12 = plus(x, y);
      l1 = minus(x, z);
      l2 = plus(y, z);
      break;
  }
  Matrix<T> R = embed3(r12, 0, 1), L1 = embed3(l1, 0, 2), L2 = embed3(l2, 1, 2);
  return R * L1 * L2 - L2 * L1 * R;
}

}  // namespace

MatrixQ ybe_residual(YbeKind kind) {
  return ybe_residual_generic<RatFun>(kind, var("x"), var("y"), var("z"), [](const RatFun& u) { return rbar(u); });
}

Residual check_ybe(YbeKind kind) {
  Residual r;
  r.id = ybe_name(kind);
  MatrixQ m = ybe_residual(kind);
  for (size_t i = 0; i < 8; ++i)
    for (size_t j = 0; j < 8; ++j) {
      bool zero = m(i, j).is_zero();
      r.record_exact(zero, "(" + std::to_string(i) + "," + std::to_string(j) + ")", zero ? "0" : m(i, j).str());
    }
  r.finish();
  return r;
}

Residual check_ybe_random(YbeKind kind, int trials, uint64_t seed) {
  Residual r;
  r.id = std::string(ybe_name(kind)) + "-random";
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<long> num(-60, 60), den(1, 17);
  auto draw = [&]() { return BigRat(make_rat(num(gen), den(gen))); };
  for (int t = 0; t < trials; ++t) {
    BigRat h = draw();
    while (h == 0) h = draw();
    BigRat x = draw(), y = draw(), z = draw();
    auto rb = [&](const BigRat& u) {
      BigRat d = u + h;
      if (d == 0) throw std::domain_error("pole");
      Matrix<BigRat> m(4);
      m(0, 0) = 1;
      m(3, 3) = 1;
      m(1, 1) = u / d;
      m(2, 2) = u / d;
      m(1, 2) = h / d;
      m(2, 1) = h / d;
      return m;
    };
    Matrix<BigRat> res;
    try {
      res = ybe_residual_generic<BigRat>(kind, x, y, z, rb);
    } catch (const std::domain_error&) {
      --t;  // coinciding parameters hit a pole; draw again
      continue;
    }
    std::ostringstream where;
    where << "hbar=" << h.get_str() << " x=" << x.get_str() << " y=" << y.get_str() << " z=" << z.get_str();
    bool zero = res.is_zero();
    r.record_exact(zero, where.str(), zero ? "0" : "nonzero");
  }
  r.finish();
  return r;
}

// ---------------------------------------------------------------------------

MatrixQ eval_current(Gen g, const RatFun& u, const RatFun& x) {
  const RatFun h = RatFun::variable(kHbar, u.num().vars());
  const RatFun pole = RatFun(1) / (u - x);
  if (g == Gen::H) return MatrixQ::identity(2) + (h * pole) * unit2(Gen::H);
  return pole * unit2(g);
}

MatrixQ coproduct_pair(Gen g, const RatFun& u, const RatFun& x, const RatFun& y) {
  const RatFun h = RatFun::variable(kHbar, u.num().vars());
  const MatrixQ one = MatrixQ::identity(2);
  switch (g) {
    case Gen::E: return kron(eval_current(Gen::E, u, x), one) + kron(eval_current(Gen::H, u, x), eval_current(Gen::E, u, y));
    case Gen::F: return kron(one, eval_current(Gen::F, u, y)) + kron(eval_current(Gen::F, u, x), eval_current(Gen::H, u, y));
    default: {
      const RatFun up = u + h;
      MatrixQ left = eval_current(Gen::F, up, x) * eval_current(Gen::H, u, x);
      MatrixQ right = eval_current(Gen::H, u, y) * eval_current(Gen::E, up, y);
      return kron(eval_current(Gen::H, u, x), eval_current(Gen::H, u, y)) -
             (RatFun(2) * h * h) * kron(left, right);
    }
  }
}

namespace {

// Expansions of the coproduct currents, cached per (generator, region, depth).
struct CoproductCache {
  RatFun x, y;
  std::map<Gen, MatrixQ> pairs;
  std::map<std::tuple<Gen, Region, int>, std::vector<TruncatedLaurent<RatFun>>> series;

  const MatrixQ& pair(Gen g) {
    auto it = pairs.find(g);
    if (it == pairs.end()) it = pairs.emplace(g, coproduct_pair(g, var("u"), x, y)).first;
    return it->second;
  }
  const std::vector<TruncatedLaurent<RatFun>>& expanded(Gen g, Region reg, int limit) {
    auto key = std::make_tuple(g, reg, limit);
    auto it = series.find(key);
    if (it != series.end()) return it->second;
    const MatrixQ& m = pair(g);
    std::vector<TruncatedLaurent<RatFun>> out;
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) out.push_back(laurent_expand(m(i, j), "u", reg, limit));
    return series.emplace(key, std::move(out)).first->second;
  }
  MatrixQ mode(Gen g, int k, int depth) {
    const RatFun h = hbar_q();
    MatrixQ r(4);
    if (k >= 0) {
      const auto& s = expanded(g, Region::AtInfinity, -depth);
      for (size_t i = 0; i < 16; ++i) {
        RatFun c = s[i].coefficient(-k - 1);
        r(i / 4, i % 4) = g == Gen::H ? c / h : c;
      }
    } else {
      const int j = -k - 1;
      const auto& s = expanded(g, Region::AtZero, depth);
      for (size_t i = 0; i < 16; ++i) {
        RatFun c = s[i].coefficient(j);
        if (g == Gen::H) {
          if (j == 0 && i / 4 == i % 4) c = c - RatFun(1);
          r(i / 4, i % 4) = -c / h;
        } else {
          r(i / 4, i % 4) = -c;
        }
      }
    }
    return r;
  }
};

}  // namespace

MatrixQ coproduct_mode(Gen g, int k, const RatFun& x, const RatFun& y) {
  CoproductCache c{x, y, {}, {}};
  return c.mode(g, k, std::abs(k) + 2);
}

Residual verify_coproduct_hom_and_intertwine(int lo, int hi) {
  const RatFun x = var("x"), y = var("y");
  // relations reach modes 2*lo - 1 .. 2*hi + 1
  const int depth = 2 * std::max(std::abs(lo), std::abs(hi)) + 3;
  CoproductCache d{x, y, {}, {}}, dswap{y, x, {}, {}};
  Residual hom = check_mode_relations([&](Gen g, int k) { return d.mode(g, k, depth); }, lo, hi, "coproduct");
  Residual r;
  r.id = "coproduct";
  r.merge(hom);
  const MatrixQ R = rbar(x - y), P = flip4<RatFun>();
  for (Gen g : {Gen::E, Gen::F, Gen::H})
    for (int k = lo; k <= hi; ++k) {
      MatrixQ a = d.mode(g, k, depth);
      MatrixQ op = P * dswap.mode(g, k, depth) * P;
      std::ostringstream where;
      where << "intertwine " << gen_name(g) << "_" << k;
      record_matrix(r, R * a - op * R, where.str());
    }
  r.finish();
  return r;
}

// ---------------------------------------------------------------------------

namespace {

Complex clog1p(Complex z) {
  if (std::abs(z) < 1e-4) {
    Complex term = z, sum = 0;
    for (int k = 1; k <= 6; ++k) {
      sum += (k % 2 ? 1.0 : -1.0) * term / static_cast<double>(k);
      term *= z;
    }
    return sum;
  }
  return std::log(1.0 + z);
}

Complex ipow(Complex a, int k) {
  Complex r = 1.0;
  for (int i = 0; i < k; ++i) r *= a;
  return r;
}

}  // namespace

Complex dkplus_coeff_inf(int sign, Complex x, double hbar, int k) {
  return (ipow(x - static_cast<double>(sign) * hbar, k) - ipow(x, k)) / hbar;
}

Complex kminus_coeff_zero(int sign, Complex y, Complex shift, double hbar, int k) {
  // k-(v + shift) = (1/hbar) [ln(v + c1) - ln(v + c0)], c1 = shift - y + sign hbar, c0 = shift - y
  const Complex c1 = shift - y + static_cast<double>(sign) * hbar, c0 = shift - y;
  if (k == 0) return std::log(c1 / c0) / hbar;
  double sgn = (k % 2) ? 1.0 : -1.0;
  return sgn * (1.0 / ipow(c1, k) - 1.0 / ipow(c0, k)) / (static_cast<double>(k) * hbar);
}

Complex r0_exponent(int sigma, int tau, Complex x, Complex y, Complex shift, double hbar, ResidueConvention conv) {
  // hbar Res = (1/hbar) ln[(w)(w - sigma hbar + tau hbar) / ((w - sigma hbar)(w + tau hbar))], w = x - y + shift
  const Complex w = x - y + shift;
  const double s = sigma * hbar, t = tau * hbar;
  Complex l = clog1p(s * t / ((w - s) * (w + t))) / hbar;
  return conv == ResidueConvention::InfinityZero ? l : -l;
}

Complex r0_exponent_series(int sigma, int tau, Complex x, Complex y, Complex shift, double hbar, int terms) {
  Complex sum = 0;
  for (int k = 0; k < terms; ++k)
    sum += dkplus_coeff_inf(sigma, x, hbar, k) * kminus_coeff_zero(tau, y, shift, hbar, k);
  return hbar * sum;
}

namespace {

// log of the diagonal of R0 truncated at n <= n_max, in basis order.
std::array<Complex, 4> r0_log(Complex x, Complex y, long n_max, double hbar, ResidueConvention conv) {
  std::array<Complex, 4> acc{};
  const int sig[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (int d = 0; d < 4; ++d) {
    // summed from the small tail terms upwards
    Complex s = 0;
    for (long n = n_max; n >= 0; --n)
      s += r0_exponent(sig[d][0], sig[d][1], x, y, static_cast<double>(2 * n + 1) * hbar, hbar, conv);
    acc[d] = s;
  }
  return acc;
}

UniversalRImage assemble(Complex x, Complex y, double hbar, const std::array<Complex, 4>& logs) {
  UniversalRImage r;
  r.r_plus = MatrixC::identity(4);
  r.r_minus = MatrixC::identity(4);
  // exp(-hbar sum_k e_k (x) f_{-k-1}) = 1 - hbar/(y - x) E (x) F for |y| > |x|
  r.r_plus(1, 2) = hbar / (x - y);
  r.r_minus(2, 1) = hbar / (x - y);
  r.r_zero = MatrixC(4);
  for (int d = 0; d < 4; ++d) r.r_zero(d, d) = std::exp(logs[d]);
  r.full = r.r_plus * r.r_zero * r.r_minus;
  return r;
}

}  // namespace

UniversalRImage reconstruct_universal_R(Complex x, Complex y, long n_max, double hbar, ResidueConvention conv) {
  if (n_max < 0) throw std::invalid_argument("reconstruct_universal_R: negative product cutoff");
  return assemble(x, y, hbar, r0_log(x, y, n_max, hbar, conv));
}

UniversalRImage reconstruct_universal_R_richardson(Complex x, Complex y, long n_max, double hbar,
                                                   ResidueConvention conv) {
  if (n_max < 4) throw std::invalid_argument("reconstruct_universal_R_richardson: product cutoff below 4");
  auto l1 = r0_log(x, y, n_max / 4, hbar, conv), l2 = r0_log(x, y, n_max / 2, hbar, conv),
       l4 = r0_log(x, y, n_max, hbar, conv);
  // Truncation errors expand in powers of 1/(n + 1); levels at step ratio 2.
  const double h1 = 1.0 / (n_max / 4 + 1), h2 = 1.0 / (n_max / 2 + 1), h4 = 1.0 / (n_max + 1);
  std::array<Complex, 4> out{};
  for (int d = 0; d < 4; ++d) {
    // Neville extrapolation to h = 0 through (h1,l1), (h2,l2), (h4,l4)
    Complex p12 = (l2[d] * h1 - l1[d] * h2) / (h1 - h2);
    Complex p24 = (l4[d] * h2 - l2[d] * h4) / (h2 - h4);
    out[d] = (p24 * h1 - p12 * h4) / (h1 - h4);
  }
  return assemble(x, y, hbar, out);
}

double max_abs_diff(const MatrixC& a, const MatrixC& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace dyhat
