#include "doctest.h"

#include "cli.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using newtonosc::cli::run_subcommand;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_subcommand(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("newtonosc_test_" + name);
}

}  // namespace

TEST_CASE("exponent subcommand") {
  const auto r = run({"exponent", "--phase", "x1^2*x2^2 + x1^5*x2", "--p", "inf,inf"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["schema"] == "newtonosc.report/1");
  CHECK(j["exponent"]["nu"] == 2);
  CHECK(j["exponent"]["m"] == 1);
  const auto& flags = j["exponent"]["flags"];
  CHECK(std::find(flags.begin(), flags.end(), "nu<=2 boundary") != flags.end());
}

TEST_CASE("polyhedron subcommand") {
  const auto r = run({"polyhedron", "--phase", "x1*x2"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["polyhedron"]["vertices"] == Json::parse("[[1,1]]"));
  std::vector<std::string> texts;
  for (const auto& f : j["polyhedron"]["facets"]) texts.push_back(f["text"]);
  CHECK(texts == std::vector<std::string>{"x2 >= 1", "x1 >= 1"});
}

TEST_CASE("usage errors exit with 2 and print the grammar") {
  CHECK(run({"polyhedron", "--phase", "x1*x2", "--bogus"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"exponent"}).code == 2);
  const auto bad = run({"exponent", "--phase", "x1^*x2"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("phase grammar") != std::string::npos);
  CHECK(run({"exponent", "--phase", "x1*x2", "--p", "1"}).code == 2);
  CHECK(run({"integrate", "--phase", "x1*x2", "--lambda", "4,2"}).code == 2);
  CHECK(run({"integrate", "--phase", "x1*x2", "--f", "wave"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("numeric module errors exit with 1") {
  const auto r = run({"exponent", "--phase", "x1^3 + x2^2"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("check subcommand verdicts") {
  CHECK(run({"check", "--phase", "x1^2*x2^2 + x1^5*x2", "--jmax", "6", "--vgrid", "16"}).code == 0);
  const auto r = run({"check", "--phase", "x1^3*x2 - x1*x2^3", "--jmax", "6", "--vgrid", "16"});
  CHECK(r.code == 1);
  const auto j = Json::parse(r.out);
  CHECK(j["nondegeneracy"]["verdict"] == "degenerate");
}

TEST_CASE("dual and sum-oracle subcommands") {
  const auto d = run({"dual", "--phase", "x1^2*x2^2 + x1^5*x2"});
  CHECK(d.code == 0);
  CHECK(Json::parse(d.out)["double_dual_equal"] == true);
  CHECK(run({"sum-oracle", "--phase", "x1^3*x2^3", "--z", "1,1"}).code == 0);
  const auto refused = run({"sum-oracle", "--phase", "x1^3*x2 + x1*x2^3", "--z", "1"});
  CHECK(refused.code == 1);
  CHECK(Json::parse(refused.out)["summation"]["status"] == "refused");
}

TEST_CASE("integrate writes CSV with stable columns") {
  const auto csv = temp_path("sweep.csv");
  const auto r = run({"integrate", "--phase", "x1*x2", "--orthant", "--lambda", "geom:2^4:2^8:3", "--certify", "--csv",
                      csv.string()});
  REQUIRE(r.code == 0);
  std::ifstream f(csv);
  std::string header, line;
  std::getline(f, header);
  CHECK(header == "lambda,re,im,abs,err,envelope,certificate");
  int rows = 0;
  while (std::getline(f, line)) ++rows;
  CHECK(rows == 3);
  const auto j = Json::parse(r.out);
  CHECK(j["results"].size() == 3);
  CHECK(j["summary"]["certificate_dominates"] == true);
  std::filesystem::remove(csv);
}

TEST_CASE("config files are overridden by flags") {
  const auto cfg = temp_path("run.ini");
  {
    std::ofstream f(cfg);
    f << "phase = x1*x2\np = 2\n";
  }
  const auto a = Json::parse(run({"exponent", "--config", cfg.string()}).out);
  CHECK(a["exponent"]["nu"] == 2);
  const auto b = Json::parse(run({"exponent", "--config", cfg.string(), "--p", "inf"}).out);
  CHECK(b["exponent"]["nu"] == 1);
  std::filesystem::remove(cfg);
}

TEST_CASE("verify report schema and determinism") {
  const std::vector<std::string> args{"verify", "--phase", "x1*x2", "--lambda", "geom:2^6:2^11:8", "--jmax", "5",
                                      "--vgrid", "12"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.out == b.out);
  const auto j = Json::parse(a.out);
  for (const char* key : {"schema", "config", "polyhedron", "exponent", "nondegeneracy", "decay_fit", "sharpness",
                          "summation", "verdicts"}) {
    CHECK_MESSAGE(j.contains(key), key);
  }
  for (const auto& v : j["verdicts"]) {
    CHECK(v.contains("name"));
    CHECK(v.contains("detail"));
    const std::string s = v["status"];
    CHECK((s == "PASS" || s == "FAIL" || s == "SKIP" || s == "INCONCLUSIVE"));
  }
  CHECK(j["config"]["seed"] == 1);
  CHECK(a.code == (j["pass"] == true ? 0 : 1));
}
