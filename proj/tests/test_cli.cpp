// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "netinv/cli.hpp"

using namespace netinv;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("exit codes: success, empty preimage, errors") {
  CHECK(run_cli({"preimage", "--model", "fixtures/identity_2x2.json", "--target", "3,4"}).exit_code == 0);
  CHECK(run_cli({"preimage", "--model", "fixtures/relu_1to1.json", "--target", "-1"}).exit_code == 2);
  CHECK(run_cli({"preimage", "--model", "fixtures/missing.json", "--target", "1"}).exit_code == 1);
  CHECK(run_cli({"preimage", "--model", "fixtures/identity_2x2.json", "--target", "1,bogus"}).exit_code == 1);
  CHECK(run_cli({"preimage", "--model", "fixtures/identity_2x2.json"}).exit_code == 1);  // target required
  CHECK(run_cli({"verify", "--model", "fixtures/identity_2x2.json", "--target", "3,4"}).exit_code == 1);  // verify none
}

TEST_CASE("golden: identity model") {
  const CliResult r = run_cli({"preimage", "--model", "fixtures/identity_2x2.json", "--target", "3,4"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == slurp("golden/identity_target34.json"));
}

TEST_CASE("golden: pinched ReLU branch") {
  const CliResult r = run_cli({"preimage", "--model", "fixtures/relu_1to2.json", "--target", "2,0"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == slurp("golden/relu_1to2_target20.json"));
}

TEST_CASE("golden: wide PReLU layer with a free variable") {
  const CliResult r = run_cli({"preimage", "--model", "fixtures/prelu_wide.json", "--target", "-3"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == slurp("golden/prelu_wide_target-3.json"));
}

TEST_CASE("byte-identical reruns") {
  const std::vector<std::string> args{"preimage", "--model", "fixtures/relu_hidden3.json",
                                      "--target", "1,1",     "--seed",
                                      "9"};
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.out == b.out);
}

TEST_CASE("budgeted run truncates deterministically and flags partial") {
  const CliResult full = run_cli({"preimage", "--model", "fixtures/relu_hidden3.json", "--target", "1,1"});
  const CliResult capped =
      run_cli({"preimage", "--model", "fixtures/relu_hidden3.json", "--target", "1,1", "--max-branches", "4"});
  const auto jf = nlohmann::json::parse(full.out);
  const auto jc = nlohmann::json::parse(capped.out);
  CHECK(jf["enumerated"] == 8);
  CHECK(jf["partial"] == false);
  CHECK(jc["enumerated"] == 4);
  CHECK(jc["partial"] == true);
  CHECK(jc["branches"].size() <= 4);
}

TEST_CASE("verify subcommand: round trip and grid") {
  CHECK(run_cli({"verify", "--model", "fixtures/relu_1to2.json", "--target", "2,0", "--verify", "roundtrip",
                 "--samples", "6", "--seed", "3"})
            .exit_code == 0);
  CHECK(run_cli({"verify", "--model", "fixtures/relu_1to1.json", "--target", "0", "--verify", "grid", "--grid",
                 "-3:3:1/8"})
            .exit_code == 0);
}

TEST_CASE("text format is human readable") {
  const CliResult r =
      run_cli({"preimage", "--model", "fixtures/prelu_wide.json", "--target", "-3", "--format", "text"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("branch") != std::string::npos);
  CHECK(r.out.find("x0 =") != std::string::npos);
}

TEST_CASE("--out writes the document to a file") {
  const std::string path = "out_test_preimage.json";
  const CliResult r =
      run_cli({"preimage", "--model", "fixtures/identity_2x2.json", "--target", "3,4", "--out", path});
  CHECK(r.exit_code == 0);
  CHECK(slurp(path) == slurp("golden/identity_target34.json"));
  std::remove(path.c_str());
}

TEST_CASE("bench reports the exponential branch growth") {
  std::ostringstream out, err;
  const int code = cli::run({"bench", "--shape", "2,1,2", "--shape", "2,2,2", "--shape", "2,3,2", "--seed", "11",
                             "--format", "json"},
                            out, err);
  CHECK(code == 0);
  const auto rows = nlohmann::json::parse(out.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["enumerated"] == 2);
  CHECK(rows[1]["enumerated"] == 4);
  CHECK(rows[2]["enumerated"] == 8);

  // no piecewise layers: always one branch
  std::ostringstream out2, err2;
  CHECK(cli::run({"bench", "--shape", "2,3,2", "--seed", "11", "--hidden", "identity", "--format", "json"}, out2,
                 err2) == 0);
  CHECK(nlohmann::json::parse(out2.str())[0]["enumerated"] == 1);
}

TEST_CASE("symbolic run emits a null target") {
  const CliResult r = run_cli({"preimage", "--model", "fixtures/relu_1to1.json", "--symbolic"});
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["target"].is_null());
  CHECK(j["branches"].size() == 2);
}
