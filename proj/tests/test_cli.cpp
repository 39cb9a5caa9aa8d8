#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wrr/cli.hpp"
#include "wrr/lattices.hpp"

using namespace wrr;

namespace {

struct CliOutcome {
  int code = 0;
  std::string out;
  std::string err;
};

CliOutcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_matrix(const std::string& name, const Mat& m) {
  const std::string path = "/tmp/wrr_cli_" + name + ".mat";
  write_matrix_file(path, m);
  return path;
}

}  // namespace

TEST_CASE("systole command golden bytes") {
  const std::string path = temp_matrix("id2", Mat::Identity(2, 2));
  const CliOutcome r = run_cli({"systole", path});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "{\"radius\":1.0,\"vectors\":[[1,0],[0,1],[-1,0],[0,-1]]}\n");
  REQUIRE(r.err.empty());
}

TEST_CASE("systole with explicit radius lists the larger ball") {
  const std::string path = temp_matrix("id2", Mat::Identity(2, 2));
  const CliOutcome r = run_cli({"systole", path, "--radius", "1.5"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  REQUIRE(j["radius"] == 1.5);
  REQUIRE(j["vectors"].size() == 8);
}

TEST_CASE("usage errors exit with code 2") {
  REQUIRE(run_cli({}).code == 2);
  REQUIRE(run_cli({"frobnicate"}).code == 2);
  REQUIRE(run_cli({"systole"}).code == 2);
  REQUIRE(run_cli({"verify", "--suite", "nonsense"}).code == 2);
  REQUIRE(run_cli({"--help"}).code == 0);
}

TEST_CASE("computation errors exit with code 1 and a JSON error object") {
  const CliOutcome missing = run_cli({"systole", "/tmp/wrr_cli_no_such_file.mat"});
  REQUIRE(missing.code == 1);
  REQUIRE(Json::parse(missing.out)["error"] == "IoError");

  const std::string path = temp_matrix("id2", Mat::Identity(2, 2));
  const CliOutcome huge = run_cli({"systole", path, "--radius", "5000"});
  REQUIRE(huge.code == 1);
  REQUIRE(Json::parse(huge.out)["error"] == "RadiusTooLarge");
}

TEST_CASE("retract command reports the two-leg path and emits its endpoint") {
  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 0.5;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const std::string path = temp_matrix("diag_half_1_2", d);
  const std::string out_path = "/tmp/wrr_cli_endpoint.mat";
  const CliOutcome r = run_cli({"retract", path, "--emit-endpoint", out_path});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  REQUIRE(j["kind"] == "retraction");
  REQUIRE(j["samples"].size() == 3);
  REQUIRE(j["samples"][1]["param"].get<double>() ==
          Catch::Approx(std::log(2.0) / 3.0).epsilon(1e-7));
  REQUIRE(j["samples"][2]["k"] == 3);

  // Round trip: the emitted matrix reproduces the in-memory endpoint Gram.
  const SymPoint back = read_point(out_path);
  const Json last = j["samples"][2]["gram"];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      REQUIRE(std::abs(back.gram()(i, k) - last[i][k].get<double>()) <= 1e-12);
}

TEST_CASE("phi command matches the diagonal closed form") {
  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 0.5;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const std::string path = temp_matrix("diag_half_1_2", d);
  const CliOutcome r = run_cli({"phi", path, "--t", "2"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  REQUIRE(j["kind"] == "Phi-flow");
  REQUIRE(j["samples"].size() == 2);
  REQUIRE(j["samples"][0]["param"] == 0.0);
  const Json g = j["samples"][1]["gram"];
  REQUIRE(g[0][0].get<double>() == Catch::Approx(std::pow(2.0, -6)).epsilon(1e-10));
  REQUIRE(g[1][1].get<double>() == Catch::Approx(1.0).epsilon(1e-10));
  REQUIRE(g[2][2].get<double>() == Catch::Approx(std::pow(2.0, 6)).epsilon(1e-10));
}

TEST_CASE("minima, flag and stratum commands") {
  const std::string path = temp_matrix("id2", Mat::Identity(2, 2));
  const Json minima = Json::parse(run_cli({"minima", path}).out);
  REQUIRE(minima["values"] == Json::array({1.0, 1.0}));
  const Json flag = Json::parse(run_cli({"flag", path}).out);
  REQUIRE(flag["lambda_dims"] == Json::array({2, 2}));
  const Json st = Json::parse(run_cli({"stratum", path}).out);
  REQUIRE(st["k"] == 2);
  REQUIRE(st["extremely_well_rounded"] == true);
  REQUIRE(st["systole_index"] == 1);
}

TEST_CASE("genericize and scan chain through emitted files") {
  const std::string path = temp_matrix("hex", hexagonal().rep());
  const std::string generic_path = "/tmp/wrr_cli_hex_generic.mat";
  const CliOutcome g =
      run_cli({"genericize", path, "--delta", "0.05", "--emit-endpoint", generic_path});
  REQUIRE(g.code == 0);
  const Json gj = Json::parse(g.out);
  REQUIRE(gj["plan"]["sector_data"].size() == 1);
  REQUIRE(gj["plan"]["basis"].size() == 2);

  const Json sys = Json::parse(run_cli({"systole", generic_path}).out);
  REQUIRE(sys["vectors"].size() == 4);

  const CliOutcome s = run_cli({"scan", generic_path});
  REQUIRE(s.code == 0);
  const Json sj = Json::parse(s.out);
  REQUIRE(sj["ray_samples"].size() == 2);
  REQUIRE(sj["intersections"].size() == 1);
  REQUIRE(sj["intersections"][0]["radius"] == 0.0);

  // Scanning a non-generic point is a computation error, not a crash.
  const CliOutcome bad = run_cli({"scan", path});
  REQUIRE(bad.code == 1);
  REQUIRE(Json::parse(bad.out)["error"] == "NotGeneric");
}

TEST_CASE("verify command is byte-deterministic in the seed") {
  const std::vector<std::string> argv = {"verify", "--suite", "convexity",
                                         "--seed", "7",      "--n",
                                         "3",      "--trials", "100"};
  const CliOutcome a = run_cli(argv);
  const CliOutcome b = run_cli(argv);
  REQUIRE(a.code == 0);
  REQUIRE(a.out == "{\"suite\":\"convexity\",\"pass\":100,\"fail\":0}\n");
  REQUIRE(a.out == b.out);

  const CliOutcome pretty = run_cli({"verify", "--suite", "convexity", "--seed", "7",
                                     "--n", "3", "--trials", "100", "--json-indent", "2"});
  REQUIRE(pretty.out != a.out);
  REQUIRE(Json::parse(pretty.out) == Json::parse(a.out));
}

TEST_CASE("remaining verify suites run clean on small trial counts") {
  for (const std::string& name :
       {std::string("equivariance"), std::string("oracle"), std::string("tflow"),
        std::string("phi"), std::string("genericize"), std::string("scan")}) {
    const int trials = name == "scan" ? 2 : (name == "genericize" ? 4 : 10);
    const CliOutcome r = run_cli({"verify", "--suite", name, "--seed", "11", "--n", "3",
                                  "--trials", std::to_string(trials)});
    INFO(name << ": " << r.out);
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    REQUIRE(j["pass"] == trials);
    REQUIRE(j["fail"] == 0);
  }
}
