#include "dyhat/suite.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dyhat/eval_rmatrix.hpp"
#include "dyhat/intertwiner.hpp"
#include "dyhat/pairing.hpp"
#include "dyhat/yangian_rep.hpp"

namespace dyhat {

using json = nlohmann::json;

const char* backend_name(Backend b) { return b == Backend::Exact ? "exact" : "numeric"; }

// ---------------------------------------------------------------------------
// Catalog

namespace {

std::vector<CheckInfo> build_catalog() {
  std::vector<CheckInfo> c;
  const std::map<std::string, std::string> fock_desc{
      {"ef-delta", "[e_k, f_l] against the delta-function term on the level-one module"},
      {"d-cov", "e^{gamma d} conjugation of currents and Heisenberg generators"},
  };
  for (const auto& id : relation_catalog()) {
    auto it = fock_desc.find(id);
    c.push_back({id, Backend::Exact,
                 it != fock_desc.end() ? it->second : "exchange relation " + id + " on the level-one module"});
  }
  c.push_back({"shift-brackets", Backend::Exact, "Heisenberg brackets preserved by e^{gamma d} conjugation"});
  c.push_back({"eval-modes", Backend::Exact, "mode relations on the evaluation module, symbolic x"});
  c.push_back({"ybe-pure-plus", Backend::Exact, "Yang-Baxter equation, R+ slots, symbolic"});
  c.push_back({"ybe-pure-minus", Backend::Exact, "Yang-Baxter equation, R- slots, symbolic"});
  c.push_back({"ybe-mixed", Backend::Exact, "mixed Yang-Baxter equation R+ L- L+, symbolic"});
  c.push_back({"ybe-random", Backend::Exact, "all three Yang-Baxter equations at seeded random rational points"});
  c.push_back({"coproduct", Backend::Exact, "coproduct is a homomorphism and Rbar intertwines it with the opposite"});
  c.push_back({"pairing", Backend::Exact, "pairing table resummation and Hopf pairing axiom in low degree"});
  c.push_back({"rho-anchor", Backend::Numeric, "rho-(hbar) = 2/pi"});
  c.push_back({"universal-r", Backend::Numeric, "truncated universal R on W_x (x) W_y against rho- Rbar"});
  c.push_back({"intertwiner", Backend::Numeric, "vertex operator intertwining equations, convergence in N"});
  return c;
}

bool is_fock_check(const std::string& id) {
  if (id == "shift-brackets") return true;
  for (const auto& r : relation_catalog())
    if (r == id) return true;
  return false;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> c = build_catalog();
  return c;
}

const CheckInfo* find_check(const std::string& id) {
  for (const auto& c : check_catalog())
    if (c.id == id) return &c;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Config

namespace {

template <typename T>
T get_as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path, "wrong type");
  }
}

Complex parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ConfigError(path, "expected a number or [re, im]");
}

json complex_json(Complex c) {
  if (c.imag() == 0.0) return c.real();
  return json::array({c.real(), c.imag()});
}

std::pair<int, int> parse_window(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw ConfigError(path, "expected [lo, hi] integers");
  auto w = std::make_pair(j[0].get<int>(), j[1].get<int>());
  if (w.first > w.second) throw ConfigError(path, "lo > hi");
  return w;
}

void reject_unknown(const json& obj, const std::vector<std::string>& known, const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == it.key();
    if (!ok) throw ConfigError(prefix + it.key(), "unknown field");
  }
}

}  // namespace

SuiteConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("$", "expected an object");
  reject_unknown(doc,
                 {"backend", "checks", "cutoffs", "eval_window", "ybe_trials", "numeric", "jobs", "seed",
                  "record_timing", "out"},
                 "");
  SuiteConfig cfg;
  if (doc.contains("backend")) {
    auto b = get_as<std::string>(doc["backend"], "backend");
    if (b == "exact")
      cfg.backend = Backend::Exact;
    else if (b == "numeric")
      cfg.backend = Backend::Numeric;
    else
      throw ConfigError("backend", "expected \"exact\" or \"numeric\", got \"" + b + "\"");
  }
  if (doc.contains("checks")) {
    if (!doc["checks"].is_array()) throw ConfigError("checks", "expected an array of ids");
    for (size_t i = 0; i < doc["checks"].size(); ++i)
      cfg.checks.push_back(get_as<std::string>(doc["checks"][i], "checks[" + std::to_string(i) + "]"));
  }
  if (doc.contains("cutoffs")) {
    const json& c = doc["cutoffs"];
    if (!c.is_object()) throw ConfigError("cutoffs", "expected an object");
    reject_unknown(c, {"e_max", "m_window", "u_window", "margin", "modes", "gamma_degree"}, "cutoffs.");
    if (c.contains("e_max")) cfg.cut.e_max = get_as<int>(c["e_max"], "cutoffs.e_max");
    if (c.contains("m_window")) std::tie(cfg.cut.m_lo, cfg.cut.m_hi) = parse_window(c["m_window"], "cutoffs.m_window");
    if (c.contains("u_window")) std::tie(cfg.cut.u_lo, cfg.cut.u_hi) = parse_window(c["u_window"], "cutoffs.u_window");
    if (c.contains("margin")) cfg.cut.margin = get_as<int>(c["margin"], "cutoffs.margin");
    if (c.contains("modes")) cfg.cut.modes = get_as<int>(c["modes"], "cutoffs.modes");
    if (c.contains("gamma_degree")) cfg.gamma_degree = get_as<int>(c["gamma_degree"], "cutoffs.gamma_degree");
  }
  if (doc.contains("eval_window")) std::tie(cfg.eval_lo, cfg.eval_hi) = parse_window(doc["eval_window"], "eval_window");
  if (doc.contains("ybe_trials")) cfg.ybe_trials = get_as<int>(doc["ybe_trials"], "ybe_trials");
  if (doc.contains("numeric")) {
    const json& n = doc["numeric"];
    if (!n.is_object()) throw ConfigError("numeric", "expected an object");
    reject_unknown(n, {"hbar", "z", "u_samples", "xy_diffs", "N", "N_product", "e_max", "tolerance", "pole_eps"},
                   "numeric.");
    cfg.has_numeric = true;
    NumericParams& p = cfg.numeric;
    if (n.contains("hbar")) p.hbar = get_as<double>(n["hbar"], "numeric.hbar");
    if (n.contains("z")) p.z = parse_complex(n["z"], "numeric.z");
    if (n.contains("u_samples")) {
      if (!n["u_samples"].is_array()) throw ConfigError("numeric.u_samples", "expected an array");
      p.u_samples.clear();
      for (size_t i = 0; i < n["u_samples"].size(); ++i)
        p.u_samples.push_back(parse_complex(n["u_samples"][i], "numeric.u_samples[" + std::to_string(i) + "]"));
    }
    if (n.contains("xy_diffs")) p.xy_diffs = get_as<std::vector<double>>(n["xy_diffs"], "numeric.xy_diffs");
    if (n.contains("N")) p.Ns = get_as<std::vector<long>>(n["N"], "numeric.N");
    if (n.contains("N_product")) p.n_product = get_as<long>(n["N_product"], "numeric.N_product");
    if (n.contains("e_max")) p.e_max = get_as<int>(n["e_max"], "numeric.e_max");
    if (n.contains("tolerance")) p.tolerance = get_as<double>(n["tolerance"], "numeric.tolerance");
    if (n.contains("pole_eps")) p.pole_eps = get_as<double>(n["pole_eps"], "numeric.pole_eps");
  }
  if (doc.contains("jobs")) cfg.jobs = get_as<int>(doc["jobs"], "jobs");
  if (doc.contains("seed")) cfg.seed = get_as<uint64_t>(doc["seed"], "seed");
  if (doc.contains("record_timing")) cfg.record_timing = get_as<bool>(doc["record_timing"], "record_timing");
  if (doc.contains("out")) cfg.out = get_as<std::string>(doc["out"], "out");
  validate_config(cfg);
  return cfg;
}

void validate_config(const SuiteConfig& cfg) {
  for (size_t i = 0; i < cfg.checks.size(); ++i) {
    const std::string path = "checks[" + std::to_string(i) + "]";
    const CheckInfo* info = find_check(cfg.checks[i]);
    if (!info) throw ConfigError(path, "unknown check id \"" + cfg.checks[i] + "\"");
    if (info->backend == Backend::Numeric && cfg.backend != Backend::Numeric)
      throw ConfigError(path, "\"" + cfg.checks[i] + "\" needs backend \"numeric\"");
    for (size_t k = 0; k < i; ++k)
      if (cfg.checks[k] == cfg.checks[i]) throw ConfigError(path, "duplicate check id \"" + cfg.checks[i] + "\"");
  }
  if (cfg.backend == Backend::Numeric && !cfg.has_numeric)
    throw ConfigError("numeric", "required when backend is \"numeric\"");
  if (cfg.backend == Backend::Exact && cfg.has_numeric)
    throw ConfigError("numeric", "given but backend is \"exact\"");
  try {
    cfg.cut.validate();
  } catch (const std::exception& e) {
    throw ConfigError("cutoffs", e.what());
  }
  if (cfg.gamma_degree < 0) throw ConfigError("cutoffs.gamma_degree", "must be >= 0");
  if (cfg.ybe_trials < 0) throw ConfigError("ybe_trials", "must be >= 0");
  if (cfg.jobs < 1) throw ConfigError("jobs", "must be >= 1");
  if (cfg.has_numeric) {
    const NumericParams& p = cfg.numeric;
    if (!(p.hbar > 0.0)) throw ConfigError("numeric.hbar", "must be > 0");
    if (!(p.tolerance > 0.0)) throw ConfigError("numeric.tolerance", "must be > 0");
    if (!(p.pole_eps > 0.0)) throw ConfigError("numeric.pole_eps", "must be > 0");
    if (p.e_max < 0) throw ConfigError("numeric.e_max", "must be >= 0");
    if (p.n_product < 4) throw ConfigError("numeric.N_product", "must be >= 4");
    if (p.Ns.empty()) throw ConfigError("numeric.N", "must not be empty");
    for (size_t i = 0; i < p.Ns.size(); ++i) {
      if (p.Ns[i] < 0) throw ConfigError("numeric.N[" + std::to_string(i) + "]", "must be >= 0");
      if (i > 0 && p.Ns[i] <= p.Ns[i - 1]) throw ConfigError("numeric.N", "must be increasing");
    }
  }
}

namespace {

json config_object(const SuiteConfig& cfg) {
  json j;
  j["backend"] = backend_name(cfg.backend);
  j["checks"] = cfg.checks;
  j["cutoffs"] = {{"e_max", cfg.cut.e_max},
                  {"m_window", {cfg.cut.m_lo, cfg.cut.m_hi}},
                  {"u_window", {cfg.cut.u_lo, cfg.cut.u_hi}},
                  {"margin", cfg.cut.margin},
                  {"modes", cfg.cut.modes},
                  {"gamma_degree", cfg.gamma_degree}};
  j["eval_window"] = {cfg.eval_lo, cfg.eval_hi};
  j["ybe_trials"] = cfg.ybe_trials;
  if (cfg.has_numeric) {
    const NumericParams& p = cfg.numeric;
    json us = json::array();
    for (Complex u : p.u_samples) us.push_back(complex_json(u));
    j["numeric"] = {{"hbar", p.hbar},           {"z", complex_json(p.z)}, {"u_samples", us},
                    {"xy_diffs", p.xy_diffs},   {"N", p.Ns},              {"N_product", p.n_product},
                    {"e_max", p.e_max},         {"tolerance", p.tolerance}, {"pole_eps", p.pole_eps}};
  }
  j["seed"] = cfg.seed;
  j["record_timing"] = cfg.record_timing;
  return j;
}

}  // namespace

std::string config_json(const SuiteConfig& cfg) { return config_object(cfg).dump(2); }

// ---------------------------------------------------------------------------
// Running

bool Report::all_pass() const {
  for (const auto& r : records)
    if (r.residual.status != Status::Pass) return false;
  return true;
}

namespace {

struct Context {
  const SuiteConfig& cfg;
  std::once_flag reps_once;
  std::unique_ptr<LevelOneRep> reps[2];

  explicit Context(const SuiteConfig& c) : cfg(c) {}
  const LevelOneRep& rep(int sector) {
    std::call_once(reps_once, [&] {
      for (int s = 0; s < 2; ++s) reps[s] = std::make_unique<LevelOneRep>(s, cfg.cut);
    });
    return *reps[sector];
  }
};

json fock_parameters(const SuiteConfig& cfg, const std::string& id) {
  json p = {{"sectors", {0, 1}},
            {"e_max", cfg.cut.e_max},
            {"m_window", {cfg.cut.m_lo, cfg.cut.m_hi}},
            {"u_window", {cfg.cut.u_lo, cfg.cut.u_hi}},
            {"margin", cfg.cut.margin}};
  if (id == "ef-delta") p["modes"] = cfg.cut.modes;
  if (id == "d-cov" || id == "shift-brackets") p["gamma_degree"] = cfg.gamma_degree;
  return p;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

Residual run_universal_r(const NumericParams& p) {
  Residual r;
  r.id = "universal-r";
  std::ostringstream note;
  for (double t : p.xy_diffs) {
    const Complex x = 0.0, y = -t;
    const MatrixC rb = rbar(Complex(t), p.hbar);
    const Complex rm = rho(-1, t, p.hbar, p.pole_eps);
    const MatrixC target = rm * rb, inverse_scaled = (1.0 / rm) * rb;
    const MatrixC plain = reconstruct_universal_R(x, y, p.n_product, p.hbar).full;
    const MatrixC extrap = reconstruct_universal_R_richardson(x, y, p.n_product, p.hbar).full;
    const double e_plain = max_abs_diff(plain, target), e_extrap = max_abs_diff(extrap, target);
    r.record_numeric(e_plain, 1e-3, "x-y=" + fmt(t) + " N=" + std::to_string(p.n_product) + ": " + fmt(e_plain));
    r.record_numeric(e_extrap, 1e-8, "x-y=" + fmt(t) + " richardson: " + fmt(e_extrap));
    const double e_half = max_abs_diff(reconstruct_universal_R(x, y, p.n_product / 2, p.hbar).full, inverse_scaled);
    const double e_inv = max_abs_diff(plain, inverse_scaled);
    note << "x-y=" << fmt(t) << ": vs Rbar/rho- " << fmt(e_inv) << " (ratio N/2:N " << fmt(e_half / e_inv)
         << ", richardson " << fmt(max_abs_diff(extrap, inverse_scaled)) << "); ";
  }
  r.note = note.str();
  r.finish();
  return r;
}

Residual run_check(Context& ctx, const std::string& id) {
  const SuiteConfig& cfg = ctx.cfg;
  if (is_fock_check(id)) {
    Residual r = verify_relation(ctx.rep(0), id, cfg.gamma_degree);
    r.merge(verify_relation(ctx.rep(1), id, cfg.gamma_degree));
    r.id = id;
    r.finish();
    return r;
  }
  if (id == "eval-modes") return verify_defining_modes_eval(cfg.eval_lo, cfg.eval_hi);
  if (id == "ybe-pure-plus") return check_ybe(YbeKind::PurePlus);
  if (id == "ybe-pure-minus") return check_ybe(YbeKind::PureMinus);
  if (id == "ybe-mixed") return check_ybe(YbeKind::Mixed);
  if (id == "ybe-random") {
    Residual r;
    r.id = id;
    for (YbeKind k : {YbeKind::PurePlus, YbeKind::PureMinus, YbeKind::Mixed})
      r.merge(check_ybe_random(k, cfg.ybe_trials, cfg.seed));
    r.finish();
    return r;
  }
  if (id == "coproduct") return verify_coproduct_hom_and_intertwine(cfg.eval_lo, cfg.eval_hi);
  if (id == "pairing") return pairing_spotcheck(cfg.cut.modes);
  const NumericParams& p = cfg.numeric;
  if (id == "rho-anchor") {
    Residual r;
    r.id = id;
    const double err = std::abs(rho(-1, p.hbar, p.hbar, p.pole_eps) - 2.0 / std::acos(-1.0));
    r.record_numeric(err, 1e-12, "rho-(hbar) - 2/pi = " + fmt(err));
    r.finish();
    return r;
  }
  if (id == "universal-r") return run_universal_r(p);
  if (id == "intertwiner") {
    Cutoffs cut = cfg.cut;
    cut.e_max = p.e_max;
    auto rep = verify_phi_equations(p.z, p.u_samples, p.hbar, cut, p.Ns, p.tolerance, cfg.jobs);
    return rep.as_residual(id);
  }
  throw std::invalid_argument("unknown check id: " + id);
}

json parameters_for(const SuiteConfig& cfg, const std::string& id) {
  if (is_fock_check(id)) return fock_parameters(cfg, id);
  if (id == "eval-modes" || id == "coproduct") return {{"k_window", {cfg.eval_lo, cfg.eval_hi}}};
  if (id == "ybe-random") return {{"trials", cfg.ybe_trials}, {"seed", cfg.seed}};
  if (id == "pairing") return {{"modes", cfg.cut.modes}};
  const NumericParams& p = cfg.numeric;
  if (id == "rho-anchor") return {{"hbar", p.hbar}, {"tolerance", 1e-12}};
  if (id == "universal-r")
    return {{"hbar", p.hbar}, {"xy_diffs", p.xy_diffs}, {"N_product", p.n_product}, {"tolerance", 1e-3},
            {"richardson_tolerance", 1e-8}};
  if (id == "intertwiner") {
    json us = json::array();
    for (Complex u : p.u_samples) us.push_back(complex_json(u));
    return {{"hbar", p.hbar}, {"z", complex_json(p.z)}, {"u_samples", us}, {"N", p.Ns},
            {"e_max", p.e_max}, {"m_window", {cfg.cut.m_lo, cfg.cut.m_hi}}, {"tolerance", p.tolerance}};
  }
  return json::object();
}

}  // namespace

Report run_suite(const SuiteConfig& cfg) {
  validate_config(cfg);
  Context ctx(cfg);
  Report rep;
  rep.records.resize(cfg.checks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cfg.checks.size(); i = next++) {
      const std::string& id = cfg.checks[i];
      CheckRecord& rec = rep.records[i];
      rec.id = id;
      rec.parameters = parameters_for(cfg, id).dump();
      const auto t0 = std::chrono::steady_clock::now();
      try {
        rec.residual = run_check(ctx, id);
      } catch (const std::exception& e) {
        rec.residual = Residual{};
        rec.residual.status = Status::Fail;
        rec.residual.note = std::string("error: ") + e.what();
      }
      rec.residual.id = id;
      rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int n = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(cfg.checks.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rep;
}

std::string report_json(const SuiteConfig& cfg, const Report& rep) {
  json j;
  j["schema"] = 1;
  j["config"] = config_object(cfg);
  json checks = json::array();
  long passed = 0, failed = 0, skipped = 0;
  for (const auto& rec : rep.records) {
    const Residual& r = rec.residual;
    json c;
    c["id"] = rec.id;
    c["parameters"] = json::parse(rec.parameters);
    c["status"] = status_name(r.status);
    c["exact"] = r.exact;
    if (r.exact)
      c["max_residual"] = r.max_residual;
    else
      c["max_residual"] = r.max_residual_value;
    c["trusted"] = r.trusted;
    c["flagged"] = r.flagged;
    c["truncation_events"] = r.truncation_events;
    c["failures"] = r.failures;
    c["note"] = r.note;
    c["wall_time"] = cfg.record_timing ? json(rec.wall_seconds) : json(nullptr);
    checks.push_back(c);
    (r.status == Status::Pass ? passed : r.status == Status::Fail ? failed : skipped)++;
  }
  j["checks"] = checks;
  j["summary"] = {{"total", rep.records.size()}, {"passed", passed}, {"failed", failed}, {"skipped", skipped}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Dumps

namespace {

json poly_json(const ScalarPoly& p) {
  // sorted monomial list: graded lex, largest first, as stored
  json terms = json::array();
  for (const auto& t : p.terms()) {
    json e = json::object();
    for (size_t i = 0; i < t.exp.size(); ++i)
      if (t.exp[i] != 0) e[p.vars()[i]] = t.exp[i];
    terms.push_back({{"coef", to_string(t.coef)}, {"exp", e}});
  }
  return terms;
}

std::string num_str(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

FockState parse_state(const std::string& s) {
  if (s.empty() || s == "vacuum") return FockState::vacuum(0);
  FockState st;
  const auto semi = s.find(';');
  try {
    st.m = std::stoi(s.substr(0, semi));
    if (semi != std::string::npos) {
      std::stringstream rest(s.substr(semi + 1));
      std::string part;
      while (std::getline(rest, part, ','))
        if (!part.empty()) st.parts.push_back(std::stoi(part));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("dump: cannot parse state \"" + s + "\" (expected \"m;p1,p2,...\")");
  }
  for (size_t i = 0; i < st.parts.size(); ++i)
    if (st.parts[i] < 1 || (i > 0 && st.parts[i] > st.parts[i - 1]))
      throw std::invalid_argument("dump: partition must be weakly decreasing positive integers");
  return st;
}

Family parse_family(const std::string& s) {
  if (s == "e") return Family::E;
  if (s == "f") return Family::F;
  if (s == "h+") return Family::HPlus;
  if (s == "h-") return Family::HMinus;
  throw std::invalid_argument("dump: unknown current \"" + s + "\" (e, f, h+, h-)");
}

json state_json(const FockState& s) { return {{"m", s.m}, {"parts", s.parts}}; }

std::string dump_basis(const SuiteConfig& cfg, const DumpRequest& req) {
  if (req.sector != 0 && req.sector != 1) throw std::invalid_argument("dump: sector must be 0 or 1");
  FockBasis b(req.sector, cfg.cut);
  if (req.format == "csv") {
    std::ostringstream os;
    os << "index,m,energy,parts\n";
    for (size_t i = 0; i < b.size(); ++i) {
      const FockState& s = b.state(i);
      os << i << "," << s.m << "," << s.energy() << ",";
      for (size_t k = 0; k < s.parts.size(); ++k) os << (k ? " " : "") << s.parts[k];
      os << "\n";
    }
    return os.str();
  }
  json states = json::array();
  for (size_t i = 0; i < b.size(); ++i) {
    json s = state_json(b.state(i));
    s["index"] = i;
    s["energy"] = b.state(i).energy();
    states.push_back(s);
  }
  json j = {{"kind", "basis"},
            {"sector", req.sector},
            {"e_max", cfg.cut.e_max},
            {"m_window", {cfg.cut.m_lo, cfg.cut.m_hi}},
            {"order", "energy, then weight, then partition lexicographically"},
            {"states", states}};
  return j.dump(2) + "\n";
}

std::string dump_series(const SuiteConfig& cfg, const DumpRequest& req) {
  const Family f = parse_family(req.selector);
  const FockState st = parse_state(req.state);
  if (req.lo > req.hi) throw std::invalid_argument("dump: window lo > hi");
  const int limit = std::min(req.lo, -1) - 2;
  VertexOpSpec spec;
  switch (f) {
    case Family::E: spec = vertex_e(cfg.cut.e_max, limit); break;
    case Family::F: spec = vertex_f(cfg.cut.e_max, limit); break;
    case Family::HPlus: spec = vertex_hplus(cfg.cut.e_max, limit); break;
    case Family::HMinus: spec = vertex_hminus(cfg.cut.e_max, limit); break;
  }
  const auto applied = apply_vertex(spec, st, cfg.cut);
  const BigRat hbar(cfg.numeric.hbar);
  if (req.format == "csv") {
    std::ostringstream os;
    os << "m,parts,power,value\n";
    for (const auto& [t, s] : applied)
      for (int p = req.lo; p <= req.hi; ++p) {
        if (!s.in_window(p) || !s.known(p) || s.coefficient(p).is_zero()) continue;
        os << t.m << ",";
        for (size_t k = 0; k < t.parts.size(); ++k) os << (k ? " " : "") << t.parts[k];
        os << "," << p << "," << num_str(s.coefficient(p).evaluate({{kHbar, hbar}}).get_d()) << "\n";
      }
    return os.str();
  }
  json rows = json::array();
  for (const auto& [t, s] : applied) {
    json coeffs = json::object();
    json unknown = json::array();
    for (int p = req.lo; p <= req.hi; ++p) {
      if (!s.in_window(p)) continue;
      if (!s.known(p)) {
        unknown.push_back(p);
        continue;
      }
      if (!s.coefficient(p).is_zero()) coeffs[std::to_string(p)] = poly_json(s.coefficient(p));
    }
    if (coeffs.empty() && unknown.empty()) continue;
    rows.push_back({{"state", state_json(t)}, {"coefficients", coeffs}, {"unknown_powers", unknown}});
  }
  json j = {{"kind", "series"},          {"current", family_name(f)}, {"state", state_json(st)},
            {"window", {req.lo, req.hi}}, {"e_max", cfg.cut.e_max},    {"variable", "u"},
            {"terms", rows}};
  return j.dump(2) + "\n";
}

std::string dump_matrix(const SuiteConfig& cfg, const DumpRequest& req) {
  if (req.selector == "rbar") {
    if (req.format == "csv") throw std::invalid_argument("dump: rbar is symbolic; use json");
    const VarList vars{kHbar, "u"};
    const MatrixQ m = rbar(RatFun::variable("u", vars));
    json rows = json::array();
    for (size_t i = 0; i < m.size(); ++i) {
      json row = json::array();
      for (size_t k = 0; k < m.size(); ++k) row.push_back(m(i, k).str());
      rows.push_back(row);
    }
    json j = {{"kind", "matrix"}, {"selector", "rbar"}, {"variable", "u"},
              {"basis", {"w+ w+", "w+ w-", "w- w+", "w- w-"}}, {"entries", rows}};
    return j.dump(2) + "\n";
  }
  // <family>_<index>
  const auto us = req.selector.rfind('_');
  if (us == std::string::npos) throw std::invalid_argument("dump: unknown matrix \"" + req.selector + "\"");
  const Family f = parse_family(req.selector.substr(0, us));
  int index = 0;
  try {
    index = std::stoi(req.selector.substr(us + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("dump: bad mode index in \"" + req.selector + "\"");
  }
  if (req.sector != 0 && req.sector != 1) throw std::invalid_argument("dump: sector must be 0 or 1");
  LevelOneRep rep(req.sector, cfg.cut);
  const ModeOperator mode = rep.mode(f, index);
  const auto& basis = *rep.basis();
  const BigRat hbar(cfg.numeric.hbar);
  if (req.format == "csv") {
    std::ostringstream os;
    os << "row,col,trusted,value\n";
    for (size_t c = 0; c < mode.op.cols.size(); ++c)
      for (const auto& [r, x] : mode.op.cols[c])
        os << r << "," << c << "," << (mode.op.trusted(r, static_cast<int>(c)) ? 1 : 0) << ","
           << num_str(x.evaluate({{kHbar, hbar}}).get_d()) << "\n";
    return os.str();
  }
  json entries = json::array();
  for (size_t c = 0; c < mode.op.cols.size(); ++c)
    for (const auto& [r, x] : mode.op.cols[c])
      entries.push_back({{"row", r},
                         {"col", c},
                         {"out", state_json(basis.state(r))},
                         {"in", state_json(basis.state(c))},
                         {"trusted", mode.op.trusted(r, static_cast<int>(c))},
                         {"value", poly_json(x)}});
  json j = {{"kind", "matrix"},   {"selector", req.selector}, {"sector", req.sector},
            {"e_max", cfg.cut.e_max}, {"dimension", basis.size()}, {"shift", mode.op.shift},
            {"entries", entries}};
  return j.dump(2) + "\n";
}

std::string dump_pairing(const SuiteConfig& cfg, const DumpRequest& req) {
  const PairingTable t = pairing_table(cfg.cut.modes);
  auto table = [](const std::vector<std::vector<RatFun>>& m) {
    json rows = json::array();
    for (const auto& r : m) {
      json row = json::array();
      for (const auto& x : r) row.push_back(x.str());
      rows.push_back(row);
    }
    return rows;
  };
  if (req.format == "csv") throw std::invalid_argument("dump: the pairing table is symbolic; use json");
  json j = {{"kind", "pairing-table"},
            {"modes", t.modes},
            {"layout", "[k][l] pairs the mode of index k with the mode of index -l-1"},
            {"e_f", table(t.ef)},
            {"f_e", table(t.fe)},
            {"h_h", table(t.hh)},
            {"c_d", t.cd.str()}};
  return j.dump(2) + "\n";
}

}  // namespace

std::string dump(const SuiteConfig& cfg, const DumpRequest& req) {
  if (req.format != "json" && req.format != "csv") throw std::invalid_argument("dump: format must be json or csv");
  if (req.kind == "basis") return dump_basis(cfg, req);
  if (req.kind == "series") return dump_series(cfg, req);
  if (req.kind == "matrix") return dump_matrix(cfg, req);
  if (req.kind == "pairing-table") return dump_pairing(cfg, req);
  throw std::invalid_argument("dump: unknown kind \"" + req.kind + "\" (series, matrix, basis, pairing-table)");
}

}  // namespace dyhat
