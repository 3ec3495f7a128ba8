#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dyhat/eval_rmatrix.hpp"
#include "dyhat/suite.hpp"

namespace py = pybind11;
using namespace dyhat;

namespace {

SuiteConfig config_from(const std::string& text) {
  try {
    return parse_config(text);
  } catch (const ConfigError& e) {
    throw py::value_error(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Verification engine for the level-one Yangian double";

  m.def("catalog", [] {
    py::list out;
    for (const auto& c : check_catalog()) {
      py::dict d;
      d["id"] = c.id;
      d["backend"] = backend_name(c.backend);
      d["description"] = c.description;
      out.append(d);
    }
    return out;
  });

  m.def(
      "verify",
      [](const std::string& config) {
        const SuiteConfig cfg = config_from(config);
        Report rep;
        {
          py::gil_scoped_release release;
          rep = run_suite(cfg);
        }
        return py::make_tuple(report_json(cfg, rep), rep.all_pass());
      },
      py::arg("config") = "{}", "Run a suite from a JSON config; returns (report_json, all_pass).");

  m.def(
      "dump",
      [](const std::string& kind, const std::string& selector, int sector, const std::string& state, int lo, int hi,
         const std::string& format, const std::string& config) {
        DumpRequest req{kind, selector, sector, state, lo, hi, format};
        try {
          return dump(config_from(config), req);
        } catch (const std::invalid_argument& e) {
          throw py::value_error(e.what());
        }
      },
      py::arg("kind"), py::arg("selector") = "", py::arg("sector") = 0, py::arg("state") = "vacuum",
      py::arg("lo") = -3, py::arg("hi") = 3, py::arg("format") = "json", py::arg("config") = "{}");

  m.def(
      "rho",
      [](int eps, std::complex<double> u, double hbar) {
        try {
          return rho(eps, u, hbar);
        } catch (const std::domain_error& e) {
          throw py::value_error(e.what());
        }
      },
      py::arg("eps"), py::arg("u"), py::arg("hbar") = 1.0);

  m.def(
      "rbar",
      [](std::complex<double> u, double hbar) {
        const MatrixC r = rbar(u, hbar);
        std::vector<std::vector<std::complex<double>>> out(r.size(), std::vector<std::complex<double>>(r.size()));
        for (size_t i = 0; i < r.size(); ++i)
          for (size_t j = 0; j < r.size(); ++j) out[i][j] = r(i, j);
        return out;
      },
      py::arg("u"), py::arg("hbar") = 1.0);
}
