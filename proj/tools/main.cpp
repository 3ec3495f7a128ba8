#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dyhat/suite.hpp"

using namespace dyhat;

namespace {

constexpr int kConfigError = 2;

struct Overrides {
  std::string config, backend, out;
  int e_max = -1, modes = -1, jobs = -1;
  double tolerance = -1.0;
  long long seed = -1;
  std::vector<std::string> checks;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON config file");
  app->add_option("--backend", o.backend, "exact | numeric");
  app->add_option("--emax", o.e_max, "Fock energy cutoff");
  app->add_option("--modes", o.modes, "mode window K");
  app->add_option("--tolerance", o.tolerance, "numeric tolerance");
  app->add_option("--out", o.out, "output path (default stdout)");
  app->add_option("--jobs", o.jobs, "worker threads");
  app->add_option("--seed", o.seed, "seed for random sample points");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SuiteConfig effective_config(const Overrides& o) {
  SuiteConfig cfg = o.config.empty() ? SuiteConfig{} : parse_config(read_file(o.config));
  if (!o.backend.empty()) {
    if (o.backend == "exact")
      cfg.backend = Backend::Exact;
    else if (o.backend == "numeric")
      cfg.backend = Backend::Numeric;
    else
      throw ConfigError("--backend", "expected exact or numeric, got \"" + o.backend + "\"");
  }
  if (o.e_max >= 0) cfg.cut.e_max = o.e_max;
  if (o.modes >= 0) cfg.cut.modes = o.modes;
  if (o.jobs >= 0) cfg.jobs = o.jobs;
  if (o.seed >= 0) cfg.seed = static_cast<uint64_t>(o.seed);
  if (o.tolerance >= 0.0) {
    cfg.has_numeric = true;
    cfg.numeric.tolerance = o.tolerance;
  }
  if (!o.checks.empty()) cfg.checks = o.checks;
  if (!o.out.empty()) cfg.out = o.out;
  validate_config(cfg);
  return cfg;
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for the level-one Yangian double"};
  app.require_subcommand(1);
  Overrides o;

  auto* verify = app.add_subcommand("verify", "run the configured checks and write a report");
  add_common(verify, o);
  verify->add_option("--check", o.checks, "check id (repeatable; replaces the config list)");

  DumpRequest req;
  std::vector<int> window;
  auto* dump_cmd = app.add_subcommand("dump", "write a basis, series, matrix or pairing table");
  add_common(dump_cmd, o);
  dump_cmd->add_option("kind", req.kind, "series | matrix | basis | pairing-table")->required();
  dump_cmd->add_option("--select", req.selector, "series: e|f|h+|h-; matrix: rbar or e_k|f_k|h+_m|h-_m");
  dump_cmd->add_option("--sector", req.sector, "Fock sector 0 or 1");
  dump_cmd->add_option("--state", req.state, "input state: vacuum or \"m;p1,p2,...\"");
  dump_cmd->add_option("--window", window, "series powers lo hi")->expected(2);
  dump_cmd->add_option("--format", req.format, "json | csv");

  bool catalog_json = false;
  auto* catalog = app.add_subcommand("catalog", "list check ids");
  catalog->add_flag("--json", catalog_json, "machine-readable listing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (catalog->parsed()) {
    std::ostringstream os;
    if (catalog_json) {
      os << "[\n";
      const auto& c = check_catalog();
      for (size_t i = 0; i < c.size(); ++i)
        os << "  {\"id\": \"" << c[i].id << "\", \"backend\": \"" << backend_name(c[i].backend)
           << "\", \"description\": \"" << c[i].description << "\"}" << (i + 1 < c.size() ? "," : "") << "\n";
      os << "]\n";
    } else {
      for (const auto& c : check_catalog()) os << c.id << "\t" << backend_name(c.backend) << "\t" << c.description << "\n";
    }
    std::cout << os.str();
    return 0;
  }

  SuiteConfig cfg;
  try {
    cfg = effective_config(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  if (dump_cmd->parsed()) {
    if (window.size() == 2) {
      req.lo = window[0];
      req.hi = window[1];
    }
    try {
      write_out(cfg.out, dump(cfg, req));
    } catch (const std::exception& e) {
      std::cerr << "dump error: " << e.what() << "\n";
      return kConfigError;
    }
    return 0;
  }

  const Report rep = run_suite(cfg);
  try {
    write_out(cfg.out, report_json(cfg, rep));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  for (const auto& r : rep.records) std::cerr << r.id << ": " << status_name(r.residual.status) << "\n";
  return rep.all_pass() ? 0 : 1;
}
