#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyhat/fock.hpp"
#include "dyhat/residual.hpp"

namespace dyhat {

enum class Backend { Exact, Numeric };
const char* backend_name(Backend b);

struct NumericParams {
  double hbar = 1.0;
  Complex z = 0.3;
  std::vector<Complex> u_samples{4.0, 6.0, 10.0};
  std::vector<double> xy_diffs{0.7, 1.3, 2.6};  // x - y for the universal R check, y = -(x - y), x = 0
  std::vector<long> Ns{25, 50, 100, 200};
  long n_product = 10000;
  int e_max = 10;  // Fock truncation for the intertwiner
  double tolerance = 1e-6;
  double pole_eps = 1e-8;
};

struct SuiteConfig {
  Backend backend = Backend::Exact;
  Cutoffs cut;
  int gamma_degree = 3;
  int eval_lo = -4, eval_hi = 4;  // mode range for the evaluation-module checks
  int ybe_trials = 100;
  bool has_numeric = false;
  NumericParams numeric;
  std::vector<std::string> checks;
  int jobs = 1;
  uint64_t seed = 0;
  bool record_timing = false;  // wall times make reports differ between runs
  std::string out;
};

/// Invalid configuration; `path` names the offending field (e.g. "cutoffs.e_max").
struct ConfigError : std::runtime_error {
  std::string path;
  ConfigError(std::string p, const std::string& what) : std::runtime_error(p + ": " + what), path(std::move(p)) {}
};

struct CheckInfo {
  std::string id;
  Backend backend;
  std::string description;
};
const std::vector<CheckInfo>& check_catalog();
const CheckInfo* find_check(const std::string& id);

/// Parse a JSON config document; throws ConfigError.
SuiteConfig parse_config(const std::string& json_text);
/// Re-checks the invariants after flag overrides; throws ConfigError.
void validate_config(const SuiteConfig& cfg);
/// Canonical JSON of the effective config.
std::string config_json(const SuiteConfig& cfg);

struct CheckRecord {
  std::string id;
  std::string parameters;  // canonical JSON object
  Residual residual;
  double wall_seconds = 0.0;
};

struct Report {
  std::vector<CheckRecord> records;
  bool all_pass() const;
};

/// Runs every requested check on a bounded worker pool; records keep the
/// order of cfg.checks.
Report run_suite(const SuiteConfig& cfg);
/// Deterministic JSON with "schema": 1.
std::string report_json(const SuiteConfig& cfg, const Report& rep);

/// Data dumps as canonical JSON.
///   basis:          sector, e_max (m window from cut)
///   series:         current e|f|h+|h- applied to a state, powers [lo, hi]
///   matrix:         "rbar" (symbolic u) or a mode operator "e_k" | "f_k" | "h_k"
///   pairing-table:  up to `modes`
struct DumpRequest {
  std::string kind;
  std::string selector;
  int sector = 0;
  std::string state;  // "vacuum" or "m;p1,p2,..."
  int lo = -3, hi = 3;
  std::string format = "json";  // json | csv
};
std::string dump(const SuiteConfig& cfg, const DumpRequest& req);

}  // namespace dyhat
