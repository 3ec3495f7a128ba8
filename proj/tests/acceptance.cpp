// One line per acceptance criterion; exit status 0 only if all of them pass.

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dyhat/suite.hpp"
#include "dyhat/yangian_rep.hpp"

using namespace dyhat;

namespace {

SuiteConfig acceptance_config() {
  SuiteConfig c;
  c.backend = Backend::Numeric;
  c.has_numeric = true;
  c.cut.e_max = 4;
  c.cut.m_lo = -4;
  c.cut.m_hi = 4;
  c.cut.u_lo = -4;
  c.cut.u_hi = 3;
  c.cut.modes = 3;
  c.gamma_degree = 3;
  c.eval_lo = -4;
  c.eval_hi = 4;
  c.ybe_trials = 100;
  c.seed = 20240601;
  c.numeric.hbar = 1.0;
  c.numeric.z = 0.3;
  c.numeric.u_samples = {4.0, 6.0, 10.0};
  c.numeric.xy_diffs = {0.7, 1.3, 2.6};
  c.numeric.Ns = {25, 50, 100, 200};
  c.numeric.n_product = 10000;
  c.numeric.e_max = 10;
  c.numeric.tolerance = 1e-6;
  for (const auto& info : check_catalog()) c.checks.push_back(info.id);
  c.jobs = std::max(1u, std::thread::hardware_concurrency());
  return c;
}

std::string residual_text(const Residual& r) {
  std::ostringstream os;
  if (r.exact)
    os << "max residual " << r.max_residual;
  else
    os << "max residual " << r.max_residual_value;
  os << ", " << r.trusted << " trusted";
  if (r.flagged) os << ", " << r.flagged << " flagged";
  return os.str();
}

struct Line {
  int n;
  std::string title;
  bool pass;
  std::string detail;
};

Line combine(int n, const std::string& title, const std::map<std::string, const Residual*>& by_id,
             const std::vector<std::string>& ids) {
  Line l{n, title, true, ""};
  for (const auto& id : ids) {
    const Residual& r = *by_id.at(id);
    const bool ok = r.status == Status::Pass;
    l.pass = l.pass && ok;
    if (!l.detail.empty()) l.detail += "; ";
    l.detail += id + " " + status_name(r.status) + " (" + residual_text(r) + ")";
    if (!ok && !r.failures.empty()) l.detail += " e.g. " + r.failures.front();
  }
  return l;
}

}  // namespace

int main() {
  const SuiteConfig cfg = acceptance_config();
  const Report rep = run_suite(cfg);
  std::map<std::string, const Residual*> by_id;
  for (const auto& rec : rep.records) by_id[rec.id] = &rec.residual;

  std::vector<std::string> exchange;
  for (const auto& r : exchange_relations()) exchange.push_back(r.id);

  std::vector<Line> lines;
  lines.push_back(combine(1, "exchange relations on both sectors, E_max 4, |m| <= 4, u-window [-4,3]", by_id, exchange));
  lines.push_back(combine(2, "delta commutator for k, l in [-3,3]", by_id, {"ef-delta"}));
  lines.push_back(combine(3, "d-covariance to gamma-degree 3", by_id, {"d-cov"}));
  lines.push_back(combine(4, "evaluation-module mode relations, k, l in [-4,4]", by_id, {"eval-modes"}));
  lines.push_back(combine(5, "Yang-Baxter, symbolic and 100 random points", by_id,
                          {"ybe-pure-plus", "ybe-pure-minus", "ybe-mixed", "ybe-random"}));
  lines.push_back(combine(6, "coproduct homomorphism and Rbar intertwining", by_id, {"coproduct"}));
  Line ur = combine(7, "universal R reconstruction vs rho- Rbar, rho-(hbar) = 2/pi", by_id, {"rho-anchor", "universal-r"});
  if (!by_id.at("universal-r")->note.empty()) ur.detail += " [" + by_id.at("universal-r")->note + "]";
  lines.push_back(ur);
  lines.push_back(combine(8, "intertwiner equations, relative residual <= 1e-6 at N = 200, monotone in N", by_id,
                          {"intertwiner"}));
  lines.push_back(combine(9, "pairing table and Hopf pairing spot checks", by_id, {"pairing"}));
  lines.push_back(combine(10, "shift automorphism conjugation and Heisenberg brackets", by_id, {"d-cov", "shift-brackets"}));

  const std::string first = report_json(cfg, rep);
  const std::string second = report_json(cfg, run_suite(cfg));
  lines.push_back({11, "determinism", first == second,
                   first == second ? "two runs gave identical report bytes (" + std::to_string(first.size()) + " bytes)"
                                   : "reports differ between two runs"});

  bool all = true;
  for (const auto& l : lines) {
    all = all && l.pass;
    std::printf("criterion %2d %s: %s -- %s\n", l.n, l.pass ? "PASS" : "FAIL", l.title.c_str(), l.detail.c_str());
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
