#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "spectre/cli.hpp"

using namespace spectre;
using nlohmann::json;

namespace {

json run_json(const std::vector<std::string>& args, int expect = kExitOk) {
  CliResult r = run_cli(args);
  INFO(r.err);
  REQUIRE(r.code == expect);
  return json::parse(r.out);
}

std::string temp_file(const std::string& name, const std::string& body) {
  std::string path = std::string(P_tmpdir) + "/spectre_cli_" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("clifford-table rows") {
  json j = run_json({"clifford-table"});
  REQUIRE(j["rows"].size() == 8);
  // columns p mod 8 = 0..7
  const int eps[8] = {1, 1, -1, -1, -1, -1, 1, 1};
  const int epsp[8] = {1, -1, 1, 1, 1, -1, 1, 1};
  for (int p = 1; p <= 8; ++p) {
    const json& row = j["rows"][p - 1];
    CHECK(row["p"] == p);
    CHECK(row["eps"] == eps[p % 8]);
    CHECK(row["eps_prime"] == epsp[p % 8]);
    CHECK(row["matches_table"] == true);
    if (p % 2 == 1) CHECK(row["eps_double_prime"].is_null());
  }
  CHECK(j["rows"][1]["eps_double_prime"] == -1);
  CHECK(j["rows"][3]["eps_double_prime"] == 1);
  CHECK(j["rows"][5]["eps_double_prime"] == -1);
  CHECK(j["rows"][7]["eps_double_prime"] == 1);
}

TEST_CASE("wres coefficients") {
  json j = run_json({"wres", "--p", "4", "--parity", "even", "--torsion", "on"});
  CHECK(j["coeff_R"]["exact"] == "-1/6·c(4)");
  CHECK(j["coeff_t2"]["exact"] == "3·c(4)");
  CHECK(j["c_p"]["exact"] == "1/(8*pi^2)");
  CHECK(j["coeff_R"]["decimal"].get<double>() == doctest::Approx(-1.0 / (48 * M_PI * M_PI)).epsilon(1e-14));
  json off = run_json({"wres", "--p", "5", "--parity", "odd", "--torsion", "off"});
  CHECK(off["coeff_t2"]["rational"] == "0");
  CHECK(off["coeff_R"]["rational"] == "-1/4");
  CHECK(off["traced"]["terms"].contains("R"));
  CHECK_FALSE(off["traced"]["terms"].contains("t2"));
  json two = run_json({"wres", "--p", "2", "--parity", "even"});
  CHECK(two["coeff_R"]["rational"] == "0");
  CHECK(two["quadratic_form_positive"].is_null());
}

TEST_CASE("volume and dixmier") {
  json v = run_json({"volume", "--model", "circle", "--p", "1"});
  CHECK(v["ratio"].get<double>() == doctest::Approx(1).epsilon(0.02));
  CHECK(v["c_p_vol"].get<double>() == doctest::Approx(2).epsilon(1e-12));
  json d = run_json({"dixmier", "--sequence", "harmonic"});
  CHECK(d["estimate"]["value"].get<double>() == doctest::Approx(1).epsilon(0.01));
  CliResult csv = run_cli({"dixmier", "--sequence", "harmonic", "--schedule", "10,100,1000", "--format", "csv"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.rfind("N,ratio\n10,", 0) == 0);
  // a tolerance the estimate cannot meet is a check failure
  CliResult tight = run_cli({"volume", "--model", "circle", "--p", "1", "--schedule", "10,100,1000", "--tolerance", "1e-9"});
  CHECK(tight.code == kExitCheckFailed);
}

TEST_CASE("distance on a csv graph") {
  std::string path = temp_file("cycle.csv", "u,v,length\n0,1,1\n1,2,1\n2,3,1\n3,0,1\n");
  json j = run_json({"distance", "--graph", path, "--from", "0", "--to", "2"});
  CHECK(j["distance"].get<double>() == doctest::Approx(2));
  CHECK(j["lp_distance"].get<double>() == doctest::Approx(2).epsilon(1e-9));
  std::string bad = temp_file("bad.csv", "a,b,c\n0,1,1\n");
  CHECK(run_cli({"distance", "--graph", bad, "--from", "0", "--to", "1"}).code == kExitUsage);
  std::string split = temp_file("split.csv", "u,v,length\n0,1,1\n2,3,1\n");
  json s = run_json({"distance", "--graph", split, "--from", "0", "--to", "1"}, kExitCheckFailed);
  CHECK(s["distance"].is_null());
  std::remove(path.c_str());
  std::remove(bad.c_str());
  std::remove(split.c_str());
}

TEST_CASE("hochschild suite") {
  json j = run_json({"hochschild", "--chains", "10"});
  CHECK(j["ok"] == true);
  CHECK(j["identities"].size() >= 8);
  CHECK(j["junk"].size() == 3);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"nope"}).code == kExitUsage);
  CHECK_FALSE(run_cli({"nope"}).err.empty());
  CHECK(run_cli({"wres", "--p", "3", "--parity", "even"}).code == kExitUsage);
  CHECK(run_cli({"wres", "--p", "4"}).code == kExitUsage);
  CHECK(run_cli({"volume", "--model", "torus", "--p", "7"}).code == kExitUsage);
  CHECK(run_cli({"dixmier"}).code == kExitUsage);
  CHECK(run_cli({"dixmier", "--sequence", "harmonic", "--schedule", "5"}).code == kExitUsage);
  CHECK(run_cli({"--help"}).code == kExitOk);
}

TEST_CASE("output is deterministic") {
  std::vector<std::string> args = {"hochschild", "--chains", "5", "--seed", "11"};
  CHECK(run_cli(args).out == run_cli(args).out);
  std::vector<std::string> w = {"wres", "--p", "6", "--parity", "even"};
  CHECK(run_cli(w).out == run_cli(w).out);
}

#ifdef SPECTRE_CLI_PATH
TEST_CASE("executable exit codes") {
  std::string exe = SPECTRE_CLI_PATH;
  auto status = [&](const std::string& a) {
    int rc = std::system((exe + " " + a + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
  };
  CHECK(status("clifford-table") == 0);
  CHECK(status("bogus") == 2);
  CHECK(status("wres --p 4 --parity odd") == 2);
}
#endif

}  // TEST_SUITE
