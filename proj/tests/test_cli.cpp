#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(RQV_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.out.append(buffer.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

}  // namespace

TEST_CASE("solve: success, refusal, forced run") {
  const RunResult ok = run("solve --type 0 --genus 2 --rank 2 --degree 0 --structure real"
                           " --seed 1 --starts 6");
  CHECK(ok.exit_code == 0);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j.at("converged").get<bool>());

  const RunResult refused =
      run("solve --type 0 --genus 2 --rank 2 --degree 3 --structure real --seed 1");
  CHECK(refused.exit_code == 3);
  CHECK(nlohmann::json::parse(refused.out).at("reason").get<std::string>().find("even") !=
        std::string::npos);

  const RunResult forced = run(
      "solve --type 0 --genus 2 --rank 1 --degree 1 --structure real --seed 1 --starts 10 "
      "--force");
  CHECK(forced.exit_code == 2);
  const auto fj = nlohmann::json::parse(forced.out);
  CHECK(fj.at("residual").get<double>() >= 4.0 - 1e-6);
}

TEST_CASE("byte-identical output for identical seeds") {
  const std::string args =
      "solve --type 1 --genus 3 --real-components 2 --rank 2 --degree 1 --structure real "
      "--seed 5 --starts 4";
  const RunResult a = run(args);
  const RunResult b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("index command") {
  const RunResult r = run("index --rank 2 --degree 0 --genus 2");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("min_index").get<int>() == 3);
  CHECK(j.at("iso_range").get<int>() == 1);
}

TEST_CASE("tables command incl. the undetermined exit code") {
  const RunResult r = run(
      "tables --structure real --type 0 --genus 3 --space projective --pi 1 --rank 4");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("free_rank").get<int>() == 3);
  CHECK(j.at("torsion").size() == 1);

  const RunResult undet = run(
      "tables --structure real --type 0 --genus 2 --space moduli --pi 1 --rank 2 --degree 0");
  CHECK(undet.exit_code == 4);

  const RunResult invalid = run(
      "tables --structure quaternionic --type 1 --genus 3 --real-components 2 --space full "
      "--pi 1 --rank 3");
  CHECK(invalid.exit_code == 1);
}

TEST_CASE("solution pipeline: invariants, dim, holonomy, equiv") {
  const std::string sol = "/tmp/rqv_cli_test_solution.json";
  const RunResult solved = run("solve --type 0 --genus 2 --rank 2 --degree 0 --structure real"
                               " --seed 9 --starts 6 --out " + sol);
  REQUIRE(solved.exit_code == 0);

  const RunResult inv = run("invariants --in " + sol);
  CHECK(inv.exit_code == 0);
  const auto ij = nlohmann::json::parse(inv.out);
  CHECK(ij.at("realizable").get<bool>());
  CHECK(ij.at("pi1_commutant_dim").get<int>() == 1);

  const RunResult dim = run("dim --in " + sol);
  CHECK(dim.exit_code == 0);
  CHECK(nlohmann::json::parse(dim.out).at("moduli_dim").get<int>() == 5);

  const RunResult hol = run("holonomy --in " + sol);
  CHECK(hol.exit_code == 0);
  const auto hj = nlohmann::json::parse(hol.out);
  CHECK(hj.at("flatness_defect").get<double>() < 1e-10);
  CHECK(hj.at("roundtrip_gauge_distance").get<double>() < 1e-8);

  const RunResult eq = run("equiv --in " + sol + " --in2 " + sol);
  CHECK(eq.exit_code == 0);
  CHECK(nlohmann::json::parse(eq.out).at("orbit_distance").get<double>() < 1e-10);

  const RunResult missing = run("dim --in /tmp/rqv_no_such_file.json");
  CHECK(missing.exit_code == 1);
  std::remove(sol.c_str());
}
