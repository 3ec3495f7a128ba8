#include "dyhat/intertwiner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace dyhat {

Complex GeometricVertex::c(int n) const {
  Complex s = 0.0;
  for (const auto& [a, b] : creation) s += a * std::pow(b, n);
  return s;
}

Complex GeometricVertex::d(int n) const {
  Complex s = 0.0;
  for (const auto& [g, dl] : annihilation) s += g * std::pow(dl, -n);
  return s;
}

NormalProduct normal_product(const GeometricVertex& a, const GeometricVertex& b) {
  Complex logc = std::log(a.prefactor) + std::log(b.prefactor) + static_cast<double>(b.shift) * a.log_weight;
  for (const auto& [alpha, beta] : b.creation)
    for (const auto& [gamma, delta] : a.annihilation) logc += -gamma * alpha * std::log(1.0 - beta / delta);
  NormalProduct r;
  r.scalar = std::exp(logc);
  r.op.name = ":" + a.name + " " + b.name + ":";
  r.op.creation = a.creation;
  r.op.creation.insert(r.op.creation.end(), b.creation.begin(), b.creation.end());
  r.op.annihilation = a.annihilation;
  r.op.annihilation.insert(r.op.annihilation.end(), b.annihilation.begin(), b.annihilation.end());
  r.op.shift = a.shift + b.shift;
  r.op.log_weight = a.log_weight + b.log_weight;
  return r;
}

GeometricVertex numeric_current(Family f, Complex u, double hbar) {
  GeometricVertex v;
  v.name = family_name(f);
  switch (f) {
    case Family::E:
      v.creation = {{1.0, u - hbar}, {1.0, u}};
      v.annihilation = {{-1.0, u}};
      v.shift = 2;
      v.log_weight = std::log(u);
      break;
    case Family::F:
      v.creation = {{-1.0, u + hbar}, {-1.0, u}};
      v.annihilation = {{1.0, u}};
      v.shift = -2;
      v.log_weight = -std::log(u);
      break;
    case Family::HPlus:
      v.annihilation = {{1.0, u - hbar}, {-1.0, u}};
      v.log_weight = std::log(u / (u - hbar));
      break;
    case Family::HMinus:
      v.creation = {{1.0, u - hbar}, {-1.0, u + hbar}};
      break;
  }
  return v;
}

Complex NumericOp::entry(int row, int col) const {
  const auto& c = cols.at(col);
  auto it = std::lower_bound(c.begin(), c.end(), row, [](const auto& e, int r) { return e.first < r; });
  return it != c.end() && it->first == row ? it->second : Complex(0.0);
}

bool NumericOp::trusted(int row, int col) const {
  if (untrusted.empty()) return true;
  const auto& u = untrusted.at(col);
  return !std::binary_search(u.begin(), u.end(), row);
}

namespace {

// All partitions of energy <= e_max with multiplicities and the union table.
struct PartitionTable {
  int e_max;
  std::vector<std::vector<int>> parts;
  std::vector<std::vector<int>> mult;  // mult[i][n-1]
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> join;  // join[i][j]: index of the union, -1 above e_max

  explicit PartitionTable(int e) : e_max(e) {
    for (int n = 0; n <= e_max; ++n)
      for (auto& p : partitions_of(n)) {
        index[p] = static_cast<int>(parts.size());
        parts.push_back(p);
      }
    for (const auto& p : parts) mult.push_back(FockState{0, p}.multiplicities(e_max));
    join.assign(parts.size(), std::vector<int>(parts.size(), -1));
    for (size_t i = 0; i < parts.size(); ++i)
      for (size_t j = 0; j < parts.size(); ++j) {
        std::vector<int> u = parts[i];
        u.insert(u.end(), parts[j].begin(), parts[j].end());
        std::sort(u.begin(), u.end(), std::greater<int>());
        auto it = index.find(u);
        if (it != index.end()) join[i][j] = it->second;
      }
  }
};

const PartitionTable& partition_table(int e_max) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PartitionTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[e_max];
  if (!slot) slot = std::make_unique<PartitionTable>(e_max);
  return *slot;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

NumericOp vertex_matrix(const GeometricVertex& v, std::shared_ptr<const FockBasis> in,
                        std::shared_ptr<const FockBasis> out) {
  const Cutoffs& cut = in->cutoffs();
  const int e_max = cut.e_max;
  if (out->cutoffs().e_max != e_max) throw std::invalid_argument("vertex_matrix: bases with different e_max");
  const PartitionTable& pt = partition_table(e_max);
  const size_t P = pt.parts.size();

  std::vector<Complex> c(e_max + 1), d(e_max + 1);
  for (int n = 1; n <= e_max; ++n) {
    c[n] = v.c(n);
    d[n] = v.d(n);
  }
  // exp(sum c_n x_n / n) by partition
  std::vector<Complex> cr(P);
  for (size_t i = 0; i < P; ++i) {
    Complex x = 1.0;
    for (int n = 1; n <= e_max; ++n) {
      const int t = pt.mult[i][n - 1];
      if (t) x *= std::pow(c[n] / static_cast<double>(n), t) / factorial(t);
    }
    cr[i] = x;
  }

  NumericOp op;
  op.in = in;
  op.out = out;
  op.shift = v.shift;
  op.cols.resize(in->size());
  std::map<int, std::vector<int>> out_rows;  // weight -> basis index of each partition
  auto rows_for = [&](int m) -> const std::vector<int>& {
    auto it = out_rows.find(m);
    if (it != out_rows.end()) return it->second;
    std::vector<int> r(P);
    for (size_t i = 0; i < P; ++i) r[i] = out->index(FockState{m, pt.parts[i]});
    return out_rows.emplace(m, std::move(r)).first->second;
  };

  std::vector<Complex> acc(P);
  for (size_t j = 0; j < in->size(); ++j) {
    const FockState& s = in->state(j);
    const int m_out = s.m + v.shift;
    if (!out->cutoffs().weight_ok(m_out) || ((m_out % 2) + 2) % 2 != out->sector()) continue;
    const Complex w = v.prefactor * std::exp(static_cast<double>(s.m) * v.log_weight);
    const std::vector<int> r = s.multiplicities(e_max);
    // prod_n (x_n + d_n)^{r_n}: keep s_n <= r_n of each x_n
    std::vector<std::pair<std::vector<int>, Complex>> ann{{{}, w}};
    for (int n = 1; n <= e_max; ++n) {
      const int rn = r[n - 1];
      if (rn == 0) continue;
      std::vector<std::pair<std::vector<int>, Complex>> next;
      for (const auto& [keep, coef] : ann)
        for (int sn = 0; sn <= rn; ++sn) {
          Complex x = coef * binomial(rn, sn).get_d() * std::pow(d[n], rn - sn);
          if (x == 0.0) continue;
          std::vector<int> k = keep;
          k.insert(k.end(), sn, n);
          next.emplace_back(std::move(k), x);
        }
      ann.swap(next);
    }
    std::fill(acc.begin(), acc.end(), Complex(0.0));
    for (auto& [keep, coef] : ann) {
      std::sort(keep.begin(), keep.end(), std::greater<int>());
      const int a = pt.index.at(keep);
      for (size_t b = 0; b < P; ++b) {
        const int t = pt.join[a][b];
        if (t >= 0) acc[t] += coef * cr[b];
      }
    }
    const auto& rows = rows_for(m_out);
    auto& col = op.cols[j];
    for (size_t i = 0; i < P; ++i)
      if (acc[i] != 0.0 && rows[i] >= 0) col.emplace_back(rows[i], acc[i]);
    std::sort(col.begin(), col.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  return op;
}

IntertwinerOp build_phi_minus(Complex z, double hbar, long N, double pole_eps) {
  if (N < 0) throw std::invalid_argument("build_phi_minus: N must be >= 0");
  if (hbar == 0.0) throw std::invalid_argument("build_phi_minus: hbar must be nonzero");
  IntertwinerOp phi;
  phi.z = z;
  phi.hbar = hbar;
  phi.N = N;
  GeometricVertex& v = phi.spec;
  v.name = "Phi-";
  v.creation = {{1.0, z + hbar}};
  for (long k = 0; k <= N; ++k) {
    const Complex d1 = z - 2.0 * static_cast<double>(k) * hbar, d2 = d1 - hbar;
    if (std::abs(d1) < pole_eps || std::abs(d2) < pole_eps)
      throw std::domain_error("build_phi_minus: z on the pole lattice of the product");
    v.annihilation.emplace_back(-1.0, d1);
    v.annihilation.emplace_back(1.0, d2);
  }
  // Gamma(1/2 + a)/Gamma(a), a = -z/(2 hbar): zeros at a = 0, -1, ...; poles at a = -1/2, -3/2, ...
  const Complex a = -z / (2.0 * hbar);
  auto near_nonpositive_integer = [&](Complex x) {
    const double r = std::round(x.real());
    return r <= 0.0 && std::abs(x - r) < pole_eps;
  };
  if (near_nonpositive_integer(a) || near_nonpositive_integer(a + 0.5))
    throw std::domain_error("build_phi_minus: Gamma ratio has a zero or pole at this z");
  v.shift = 1;
  v.log_weight = 0.5 * std::log(Complex(2.0 * hbar)) + log_gamma(a + 0.5) - log_gamma(a);
  // <1|Phi-|0> is the prefactor itself (trivial zero mode and oscillators on
  // the vacuum), so the normalization is prefactor = 1.
  v.prefactor = 1.0;
  return phi;
}

namespace {

// (1/2 pi i) contour integral over |u| = radius of scalar(u) * M(u), M the
// matrix of a normal-ordered operator, by the trapezoid rule.
NumericOp contour_integral(const std::function<NormalProduct(Complex)>& product, double radius, int samples,
                           std::shared_ptr<const FockBasis> in, std::shared_ptr<const FockBasis> out) {
  const double pi = std::acos(-1.0);
  std::vector<std::map<int, Complex>> acc(in->size());
  int shift = 0;
  for (int s = 0; s < samples; ++s) {
    const Complex u = std::polar(radius, 2.0 * pi * (s + 0.5) / samples);
    NormalProduct np = product(u);
    NumericOp m = vertex_matrix(np.op, in, out);
    shift = m.shift;
    const Complex w = np.scalar * u / static_cast<double>(samples);
    for (size_t j = 0; j < m.cols.size(); ++j)
      for (const auto& [i, x] : m.cols[j]) acc[j][i] += w * x;
  }
  NumericOp r;
  r.in = in;
  r.out = out;
  r.shift = shift;
  r.cols.resize(in->size());
  for (size_t j = 0; j < acc.size(); ++j)
    for (const auto& [i, x] : acc[j]) r.cols[j].emplace_back(i, x);
  return r;
}

}  // namespace

NumericOp build_phi_plus(const IntertwinerOp& phi, int sector, const Cutoffs& cut) {
  auto in = std::make_shared<FockBasis>(sector, cut);
  auto out = std::make_shared<FockBasis>(1 - sector, cut);
  if (in->size() == 0 || out->size() == 0) throw std::invalid_argument("build_phi_plus: empty truncation");
  const double hbar = phi.hbar;
  // Phi- f(u) converges for small |u|: its contraction is analytic inside the
  // nearest zero of 1 - (u + b)/delta. f(u) Phi- converges beyond |z + hbar|.
  double inner = 1e300;
  for (const auto& [g, delta] : phi.spec.annihilation)
    for (double b : {hbar, 0.0}) inner = std::min(inner, std::abs(delta - b));
  if (inner < 1e-8) throw std::domain_error("build_phi_plus: contraction singular at u = 0");
  const double outer = std::abs(phi.z + hbar);
  // Laurent span of a matrix element is at most 2 e_max + |m| + 2
  int span = 2 * cut.e_max + 2 + std::max(std::abs(cut.m_lo), std::abs(cut.m_hi));
  const int samples = std::max(64, 4 * span);
  NumericOp left = contour_integral(
      [&](Complex u) { return normal_product(phi.spec, numeric_current(Family::F, u, hbar)); }, 0.5 * inner,
      samples, in, out);
  NumericOp right = contour_integral(
      [&](Complex u) { return normal_product(numeric_current(Family::F, u, hbar), phi.spec); },
      2.0 * outer + 1.0, samples, in, out);
  NumericOp r = left;
  for (size_t j = 0; j < r.cols.size(); ++j) {
    std::map<int, Complex> m(left.cols[j].begin(), left.cols[j].end());
    for (const auto& [i, x] : right.cols[j]) m[i] -= x;
    r.cols[j].assign(m.begin(), m.end());
  }
  return r;
}

const std::vector<PhiEquation>& phi_equations() {
  static const std::vector<PhiEquation> eqs{
      {"phi-h+", Family::HPlus}, {"phi-h-", Family::HMinus}, {"phi-e", Family::E}};
  return eqs;
}

Complex phi_equation_ratio(const std::string& id, Complex u, Complex z, double hbar) {
  if (id == "phi-h+") return (u - z - 2.0 * hbar) / (u - z - hbar);
  if (id == "phi-h-") return (u - z - hbar) / (u - z);
  if (id == "phi-e") return 1.0;
  throw std::invalid_argument("unknown intertwining equation: " + id);
}

double phi_equation_residual(const PhiEquation& eq, const IntertwinerOp& phi, Complex u, const Cutoffs& cut) {
  const GeometricVertex x = numeric_current(eq.current, u, phi.hbar);
  const NormalProduct lhs = normal_product(phi.spec, x), rhs = normal_product(x, phi.spec);
  const Complex ratio = phi_equation_ratio(eq.id, u, phi.z, phi.hbar);
  double worst = 0.0;
  long compared = 0;
  for (int sector : {0, 1}) {
    auto in = std::make_shared<FockBasis>(sector, cut);
    auto out = std::make_shared<FockBasis>(1 - sector, cut);
    NumericOp ml = vertex_matrix(lhs.op, in, out), mr = vertex_matrix(rhs.op, in, out);
    for (size_t j = 0; j < ml.cols.size(); ++j) {
      std::map<int, std::pair<Complex, Complex>> both;
      for (const auto& [i, v] : ml.cols[j]) both[i].first = lhs.scalar * v;
      for (const auto& [i, v] : mr.cols[j]) both[i].second = ratio * rhs.scalar * v;
      for (const auto& [i, lr] : both) {
        const double scale = std::max({std::abs(lr.first), std::abs(lr.second), 1e-30});
        worst = std::max(worst, std::abs(lr.first - lr.second) / scale);
        ++compared;
      }
    }
  }
  if (compared == 0) throw std::invalid_argument("phi_equation_residual: no matrix elements at these cutoffs");
  return worst;
}

Residual ConvergenceReport::as_residual(const std::string& id) const {
  Residual r;
  r.id = id;
  r.exact = false;
  for (const auto& s : series) {
    std::ostringstream where;
    where << s.equation << " u=" << s.u.real();
    if (s.u.imag() != 0.0) where << (s.u.imag() > 0 ? "+" : "") << s.u.imag() << "i";
    where << " residual " << s.final_residual;
    r.record_numeric(s.final_residual, tolerance, where.str());
    if (!s.monotone) {
      r.status = Status::Fail;
      if (r.failures.size() < Residual::kMaxWitnesses) r.failures.push_back(where.str() + ": not monotone in N");
    }
  }
  r.finish();
  return r;
}

ConvergenceReport verify_phi_equations(Complex z, const std::vector<Complex>& u_samples, double hbar,
                                       const Cutoffs& cut, const std::vector<long>& Ns, double tolerance,
                                       int jobs, double noise) {
  if (Ns.empty() || u_samples.empty()) throw std::invalid_argument("verify_phi_equations: nothing to check");
  cut.validate();
  std::vector<IntertwinerOp> phis;
  for (long N : Ns) phis.push_back(build_phi_minus(z, hbar, N));

  ConvergenceReport rep;
  rep.z = z;
  rep.hbar = hbar;
  rep.tolerance = tolerance;
  for (const auto& eq : phi_equations())
    for (Complex u : u_samples) {
      EquationSeries s;
      s.equation = eq.id;
      s.u = u;
      s.points.resize(Ns.size());
      rep.series.push_back(s);
    }
  // one task per (series, N), run in waves of `jobs`
  std::vector<std::pair<size_t, size_t>> tasks;
  for (size_t a = 0; a < rep.series.size(); ++a)
    for (size_t b = 0; b < Ns.size(); ++b) tasks.emplace_back(a, b);
  const size_t width = static_cast<size_t>(std::max(1, jobs));
  for (size_t start = 0; start < tasks.size(); start += width) {
    std::vector<std::future<double>> fs;
    for (size_t t = start; t < std::min(tasks.size(), start + width); ++t) {
      auto [a, b] = tasks[t];
      const PhiEquation eq = phi_equations()[a / u_samples.size()];
      const Complex u = rep.series[a].u;
      const IntertwinerOp* phi = &phis[b];
      fs.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                              [eq, u, phi, &cut] { return phi_equation_residual(eq, *phi, u, cut); }));
    }
    for (size_t t = start; t < std::min(tasks.size(), start + width); ++t) {
      auto [a, b] = tasks[t];
      rep.series[a].points[b] = ConvergencePoint{Ns[b], cut.e_max, fs[t - start].get()};
    }
  }
  rep.pass = true;
  for (auto& s : rep.series) {
    for (size_t i = 1; i < s.points.size(); ++i)
      if (s.points[i].residual > s.points[i - 1].residual * (1 + 1e-9) + noise) s.monotone = false;
    // least squares slope of -log residual against log N
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : s.points)
      if (p.residual > 0 && p.N > 0) {
        const double x = std::log(static_cast<double>(p.N)), y = -std::log(p.residual);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
      }
    s.decay_rate = n >= 2 && n * sxx - sx * sx != 0 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    s.final_residual = s.points.back().residual;
    s.pass = s.monotone && s.final_residual <= tolerance;
    rep.pass = rep.pass && s.pass;
  }
  return rep;
}

}  // namespace dyhat
