#include <gtest/gtest.h>

#include <json.hpp>

#include "dyhat/suite.hpp"

using namespace dyhat;
using json = nlohmann::json;

namespace {

std::string config_error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path;
  }
  return "";
}

}  // namespace

TEST(SuiteConfig, Defaults) {
  SuiteConfig c = parse_config("{}");
  EXPECT_EQ(c.backend, Backend::Exact);
  EXPECT_EQ(c.cut.e_max, 4);
  EXPECT_EQ(c.cut.modes, 3);
  EXPECT_TRUE(c.checks.empty());
  EXPECT_FALSE(c.has_numeric);
}

TEST(SuiteConfig, ErrorsNameTheField) {
  EXPECT_EQ(config_error_path("[1]"), "$");
  EXPECT_EQ(config_error_path("{"), "$");
  EXPECT_EQ(config_error_path(R"({"checks":["ee","zz"]})"), "checks[1]");
  EXPECT_EQ(config_error_path(R"({"checks":["ee","ee"]})"), "checks[1]");
  EXPECT_EQ(config_error_path(R"({"cutoffs":{"e_max":"four"}})"), "cutoffs.e_max");
  EXPECT_EQ(config_error_path(R"({"cutoffs":{"emax":4}})"), "cutoffs.emax");
  EXPECT_EQ(config_error_path(R"({"cutoffs":{"m_window":[2,1]}})"), "cutoffs.m_window");
  EXPECT_EQ(config_error_path(R"({"cutoffs":{"e_max":-1}})"), "cutoffs");
  EXPECT_EQ(config_error_path(R"({"backend":"fast"})"), "backend");
  EXPECT_EQ(config_error_path(R"({"jobs":0})"), "jobs");
  EXPECT_EQ(config_error_path(R"({"colour":1})"), "colour");
  EXPECT_EQ(config_error_path(R"({"backend":"numeric","numeric":{"N":[50,25]}})"), "numeric.N");
  EXPECT_EQ(config_error_path(R"({"backend":"numeric","numeric":{"z":"a"}})"), "numeric.z");
  try {
    parse_config(R"({"checks":["zz"]})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("\"zz\""), std::string::npos);
  }
}

TEST(SuiteConfig, NumericFieldsIffNumericBackend) {
  EXPECT_EQ(config_error_path(R"({"backend":"numeric"})"), "numeric");
  EXPECT_EQ(config_error_path(R"({"numeric":{"hbar":1}})"), "numeric");
  EXPECT_EQ(config_error_path(R"({"checks":["intertwiner"]})"), "checks[0]");
  SuiteConfig c = parse_config(R"({"backend":"numeric","numeric":{"z":[0.3,0.1],"u_samples":[4,[6,1]]}})");
  EXPECT_TRUE(c.has_numeric);
  EXPECT_EQ(c.numeric.z, Complex(0.3, 0.1));
  ASSERT_EQ(c.numeric.u_samples.size(), 2u);
  EXPECT_EQ(c.numeric.u_samples[1], Complex(6.0, 1.0));
}

TEST(SuiteConfig, CanonicalRoundTrip) {
  SuiteConfig c = parse_config(R"({"checks":["ff","ee"],"cutoffs":{"e_max":3},"seed":7})");
  SuiteConfig d = parse_config(config_json(c));
  EXPECT_EQ(config_json(c), config_json(d));
  EXPECT_EQ(d.checks, (std::vector<std::string>{"ff", "ee"}));
}

TEST(Catalog, IdsAreUniqueAndResolvable) {
  const auto& c = check_catalog();
  for (size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(find_check(c[i].id), &c[i]);
    for (size_t j = 0; j < i; ++j) EXPECT_NE(c[i].id, c[j].id);
  }
  for (const char* id : {"ee", "ff", "h+h-", "ef-delta", "d-cov", "pairing", "intertwiner"})
    EXPECT_NE(find_check(id), nullptr) << id;
  EXPECT_EQ(find_check("zz"), nullptr);
}

TEST(RunSuite, SelectedExchangeRelationsPass) {
  SuiteConfig c = parse_config(R"({"checks":["ee","ff","h+h-"],"cutoffs":{"e_max":3}})");
  Report r = run_suite(c);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_TRUE(r.all_pass());
  json j = json::parse(report_json(c, r));
  EXPECT_EQ(j["schema"], 1);
  for (const auto& rec : j["checks"]) {
    EXPECT_EQ(rec["status"], "pass");
    EXPECT_EQ(rec["max_residual"], "0");
    EXPECT_GT(rec["trusted"].get<long>(), 0);
  }
  EXPECT_EQ(j["checks"][2]["id"], "h+h-");
}

TEST(RunSuite, EmptyReportPasses) {
  SuiteConfig c = parse_config("{}");
  Report r = run_suite(c);
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(json::parse(report_json(c, r))["summary"]["total"], 0);
}

TEST(RunSuite, DeterministicAcrossRunsAndJobs) {
  SuiteConfig c = parse_config(R"({"checks":["ybe-random","pairing","h+e","eval-modes"],"cutoffs":{"e_max":3},"seed":5,"jobs":3})");
  const std::string a = report_json(c, run_suite(c)), b = report_json(c, run_suite(c));
  EXPECT_EQ(a, b);
  c.jobs = 1;
  EXPECT_EQ(a, report_json(c, run_suite(c)));
  c.seed = 6;
  EXPECT_NE(a, report_json(c, run_suite(c)));  // the seed is echoed and changes the sample points
}

TEST(RunSuite, NumericFailureIsReported) {
  SuiteConfig c = parse_config(
      R"({"backend":"numeric","checks":["rho-anchor","intertwiner"],"cutoffs":{"m_window":[-2,2]},
          "numeric":{"z":0.3,"u_samples":[4],"N":[10,20],"e_max":3,"tolerance":1e-6}})");
  Report r = run_suite(c);
  EXPECT_EQ(r.records[0].residual.status, Status::Pass);
  EXPECT_EQ(r.records[1].residual.status, Status::Fail);
  EXPECT_FALSE(r.all_pass());
  json j = json::parse(report_json(c, r));
  EXPECT_TRUE(j["checks"][1]["max_residual"].is_number());
  EXPECT_TRUE(j["checks"][1]["wall_time"].is_null());
}

TEST(RunSuite, ErrorsBecomeFailures) {
  // z on the pole lattice of the product
  SuiteConfig c = parse_config(
      R"({"backend":"numeric","checks":["intertwiner"],"numeric":{"z":0,"u_samples":[4],"N":[1,2],"e_max":2}})");
  Report r = run_suite(c);
  EXPECT_EQ(r.records[0].residual.status, Status::Fail);
  EXPECT_NE(r.records[0].residual.note.find("error"), std::string::npos);
}

TEST(Dump, BasisInDocumentedOrder) {
  SuiteConfig c = parse_config(R"({"cutoffs":{"e_max":2}})");
  json j = json::parse(dump(c, {"basis", "", 0}));
  const auto& s = j["states"];
  ASSERT_EQ(s.size(), 20u);  // 5 weights times p(0) + p(1) + p(2)
  for (size_t i = 1; i < s.size(); ++i) {
    auto key = [](const json& x) { return std::make_tuple(x["energy"].get<int>(), x["m"].get<int>(), x["parts"]); };
    EXPECT_LT(key(s[i - 1]), key(s[i]));
  }
  EXPECT_EQ(dump(c, {"basis", "", 1}).find("\"m\": 0,"), std::string::npos);  // odd weights only
}

TEST(Dump, RbarMatrix) {
  json j = json::parse(dump(SuiteConfig{}, {"matrix", "rbar"}));
  ASSERT_EQ(j["entries"].size(), 4u);
  EXPECT_EQ(j["entries"][0][0], "1");
  EXPECT_EQ(j["entries"][3][3], "1");
  EXPECT_EQ(j["entries"][0][1], "0");
  EXPECT_NE(j["entries"][1][2].get<std::string>().find("hbar"), std::string::npos);
  EXPECT_EQ(j["entries"][1][2], j["entries"][2][1]);
}

TEST(Dump, SeriesOfEOnVacuum) {
  DumpRequest req{"series", "e", 0, "vacuum", -3, 3};
  json j = json::parse(dump(SuiteConfig{}, req));
  // e(u)|0> = u^0 |m=2> + lower powers with creation modes: the charge-2
  // vacuum appears with coefficient 1 at u^0 and nowhere else.
  bool found = false;
  for (const auto& t : j["terms"])
    if (t["state"]["m"] == 2 && t["state"]["parts"].empty()) {
      found = true;
      EXPECT_EQ(t["coefficients"].size(), 1u);
      EXPECT_EQ(t["coefficients"]["0"][0]["coef"], "1");
    }
  EXPECT_TRUE(found);
}

TEST(Dump, PairingTableAndErrors) {
  SuiteConfig c;
  c.cut.modes = 1;
  json j = json::parse(dump(c, {"pairing-table"}));
  EXPECT_EQ(j["modes"], 1);
  EXPECT_EQ(j["h_h"].size(), 2u);
  EXPECT_THROW(dump(c, {"bogus"}), std::invalid_argument);
  EXPECT_THROW(dump(c, {"matrix", "x_1"}), std::invalid_argument);
  EXPECT_THROW(dump(c, {"series", "e", 0, "0;1,2"}), std::invalid_argument);
  DumpRequest csv{"pairing-table"};
  csv.format = "csv";
  EXPECT_THROW(dump(c, csv), std::invalid_argument);
}
