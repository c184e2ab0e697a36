#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "minlab/cli.hpp"

using namespace minlab;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("classify emits verdicts and exit codes") {
  Run r = run({"classify", "Z"});
  CHECK(r.code == 0);
  CHECK(r.out.find("vc_minimal: true") != std::string::npos);
  CHECK(r.out.find("route_agreement: true") != std::string::npos);

  Run cof = run({"classify", "cofinal(2)"});
  CHECK(cof.code == 0);
  CHECK(cof.out.find("vc_minimal: false") != std::string::npos);
  CHECK(cof.out.find("dp_minimal: true") != std::string::npos);
  CHECK(cof.out.find("failing chain") != std::string::npos);
}

TEST_CASE("parse failures exit 1 with the cause") {
  Run r = run({"classify", "C(4,1)"});
  CHECK(r.code == 1);
  CHECK(r.err.find("4 is not prime") != std::string::npos);
}

TEST_CASE("json output is a self-describing document with the seed") {
  Run r = run({"classify", "Q^w", "--format", "json", "--seed", "7"});
  CHECK(r.code == 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["tool"] == "minlab");
  CHECK(doc["version"] == kToolVersion);
  CHECK(doc["config"]["seed"] == 7);
  CHECK(doc["result"]["vc_minimal"] == true);
  CHECK(doc["result"]["witness"]["kind"] == "chain");
  // determinism: byte-identical reruns
  Run again = run({"classify", "Q^w", "--format", "json", "--seed", "7"});
  CHECK(again.out == r.out);
}

TEST_CASE("verify-chain subcommand") {
  Run r = run({"verify-chain", "Zp8(2)^w (+) Zloc(2)^3", "--kmax", "12", "--mmax", "12"});
  CHECK(r.code == 0);
  CHECK(r.out.find("pass") != std::string::npos);
  Run bad = run({"verify-chain", "cofinal(2)"});
  CHECK(bad.code == 1);
}

TEST_CASE("oracle-diff respects the environment bound") {
  setenv("MINLAB_ORACLE_BOUND", "48", 1);
  Run r = run({"oracle-diff", "--grid-kmax", "8", "--grid-mmax", "8", "--workers", "4"});
  unsetenv("MINLAB_ORACLE_BOUND");
  CHECK(r.code == 0);
  CHECK(r.out.find("0 mismatches") != std::string::npos);
}

TEST_CASE("directed subcommand reads family files") {
  std::string path = "cli_family_test.txt";
  {
    std::ofstream f(path);
    f << "5\n1 2\n3 4\n1 2 3 4\n";
  }
  Run r = run({"directed", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("all members convex: yes") != std::string::npos);
  std::remove(path.c_str());
  Run missing = run({"directed", "no_such_file.txt"});
  CHECK(missing.code == 1);
}

TEST_CASE("ordered subcommand lists D sets for the integers") {
  Run r = run({"ordered", "--model", "integers", "--p", "2", "--bound", "100"});
  CHECK(r.code == 0);
  CHECK(r.out.find("not convexly orderable") != std::string::npos);
  CHECK(r.out.find("D_{2,1}") != std::string::npos);
}

TEST_CASE("valued subcommand validates and runs") {
  Run bad = run({"valued", "--p", "2", "--gamma1", "2"});
  CHECK(bad.code == 1);
  Run r = run({"valued", "--p", "2", "--gamma1", "1", "--n", "1", "--mode", "exhaustive"});
  CHECK(r.code == 0);
  CHECK(r.out.find("40320 orders") != std::string::npos);
  CHECK(r.out.find("min components 2") != std::string::npos);
  Run rnd = run({"valued", "--p", "3", "--gamma1", "1", "--n", "1", "--mode", "random",
                 "--trials", "200", "--seed", "5"});
  CHECK(rnd.code == 0);
}

TEST_CASE("report covers the corpus") {
  Run r = run({"report"});
  CHECK(r.code == 0);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
}
