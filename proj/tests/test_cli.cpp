#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "helpers.hpp"

namespace {

struct RunResult {
  std::string out;
  int exit_code = -1;
};

// Runs the CLI capturing stdout; stderr goes to /dev/null.
RunResult run(const std::string& args) {
  std::string cmd = std::string(RN_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.out.append(buffer.data(), n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string fig2_cnf() { return testhelpers::data_path("fig2.cnf"); }
std::string unsat8_cnf() { return testhelpers::data_path("unsat8.cnf"); }

}  // namespace

TEST_CASE("reduce output matches the golden files byte for byte") {
  RunResult path = run("reduce --cnf " + fig2_cnf() + " --family path --levels 0");
  CHECK(path.exit_code == 0);
  CHECK(path.out == testhelpers::read_file(testhelpers::data_path("fig2_path.inst")));

  RunResult cut = run("reduce --cnf " + fig2_cnf() + " --family cut --levels 0");
  CHECK(cut.exit_code == 0);
  CHECK(cut.out == testhelpers::read_file(testhelpers::data_path("fig4_cut.inst")));
}

TEST_CASE("identical invocations produce identical bytes") {
  std::string args = "reduce --cnf " + fig2_cnf() + " --family path --levels 1";
  RunResult first = run(args);
  RunResult second = run(args);
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("solve prints only the value on stdout") {
  std::string inst = "/tmp/robustnet_cli_test_fig2.inst";
  RunResult reduce = run("reduce --cnf " + fig2_cnf() + " --family path --levels 0 --out " + inst);
  REQUIRE(reduce.exit_code == 0);

  RunResult solve = run("solve --instance " + inst + " --objective minmax");
  CHECK(solve.exit_code == 0);
  CHECK(solve.out == "1\n");

  RunResult regret = run("solve --instance " + inst + " --objective regret --method brute");
  CHECK(regret.out == "1\n");

  RunResult mean = run("solve --instance " + inst + " --objective mean");
  CHECK(mean.out == "1\n");
}

TEST_CASE("solution files and the tree transform round trip") {
  std::string inst = "/tmp/robustnet_cli_test_fig2b.inst";
  std::string sol = "/tmp/robustnet_cli_test_fig2b.sol";
  std::string tree_inst = "/tmp/robustnet_cli_test_tree.inst";
  std::string tree_sol = "/tmp/robustnet_cli_test_tree.sol";
  std::string back_inst = "/tmp/robustnet_cli_test_back.inst";
  std::string back_sol = "/tmp/robustnet_cli_test_back.sol";

  REQUIRE(run("reduce --cnf " + fig2_cnf() + " --family path --levels 0 --out " + inst).exit_code == 0);
  REQUIRE(run("solve --instance " + inst + " --out " + sol).exit_code == 0);
  std::string solution_text = testhelpers::read_file(sol);
  CHECK(solution_text.rfind("value 1\n", 0) == 0);

  RunResult to_tree = run("reduce --to-tree --instance " + inst + " --solution " + sol +
                          " --out " + tree_inst + " --out-solution " + tree_sol);
  CHECK(to_tree.exit_code == 0);
  std::string tree_solution = testhelpers::read_file(tree_sol);
  CHECK(tree_solution.rfind("value 1\n", 0) == 0);

  RunResult solve_tree = run("solve --instance " + tree_inst + " --objective minmax");
  CHECK(solve_tree.out == "1\n");

  RunResult to_path = run("reduce --to-path --instance " + tree_inst + " --solution " + tree_sol +
                          " --out " + back_inst + " --out-solution " + back_sol);
  CHECK(to_path.exit_code == 0);
  CHECK(testhelpers::read_file(back_sol) == solution_text);
}

TEST_CASE("verify exit codes and csv output") {
  RunResult pass = run("verify --cnf " + fig2_cnf() + " --family path --levels 0");
  CHECK(pass.exit_code == 0);
  CHECK(pass.out.find("result: PASS") != std::string::npos);
  CHECK(pass.out.find("seconds") == std::string::npos);  // timings stay on stderr

  RunResult unsat = run("verify --cnf " + unsat8_cnf() + " --family path --levels 0");
  CHECK(unsat.exit_code == 0);
  CHECK(unsat.out.find("verdict: UNSAT") != std::string::npos);

  RunResult level1 = run("verify --cnf " + fig2_cnf() + " --family path --levels 1");
  CHECK(level1.exit_code == 0);
  CHECK(level1.out.find("certified: exact value 1") != std::string::npos);
  CHECK(level1.out.find("result: PASS") != std::string::npos);

  std::string csv = "/tmp/robustnet_cli_test_report.csv";
  std::remove(csv.c_str());
  RunResult with_csv = run("verify --cnf " + fig2_cnf() + " --family cut --levels 0 --csv " + csv);
  CHECK(with_csv.exit_code == 0);
  std::string csv_text = testhelpers::read_file(csv);
  CHECK(csv_text.rfind("family,n_vars,m_clauses,K,level,mode,verdict,bound_kind,bound,expected,"
                       "pass,seconds\n", 0) == 0);
  CHECK(csv_text.find("cut,3,3,6,0,faithful,SAT,exact,1,1,1,") != std::string::npos);
}

TEST_CASE("regret identity subcommand") {
  std::string inst = "/tmp/robustnet_cli_test_identity.inst";
  REQUIRE(run("reduce --cnf " + fig2_cnf() + " --family cut --levels 0 --out " + inst).exit_code == 0);
  RunResult identity = run("verify --regret-identity --instance " + inst);
  CHECK(identity.exit_code == 0);
  CHECK(identity.out.find("regret identity holds") != std::string::npos);
}

TEST_CASE("bench subcommand") {
  std::string config = "/tmp/robustnet_cli_test_bench.cfg";
  FILE* f = fopen(config.c_str(), "w");
  REQUIRE(f != nullptr);
  fputs("families path\nsizes 5\nscenarios 2\ntrials 4\n", f);
  fclose(f);
  RunResult bench = run("bench --config " + config + " --seed 11");
  CHECK(bench.exit_code == 0);
  CHECK(bench.out.rfind("family,edges,K,trial,heuristic,exact,ratio,status\n", 0) == 0);
  RunResult jobs = run("bench --config " + config + " --seed 11 --jobs 3");
  CHECK(jobs.out == bench.out);
}

TEST_CASE("error exit codes") {
  CHECK(run("bogus").exit_code == 2);                       // unknown subcommand
  CHECK(run("solve --instance /nonexistent").exit_code == 2);
  CHECK(run("reduce --family path").exit_code == 2);        // missing --cnf

  std::string bad = "/tmp/robustnet_cli_test_bad.inst";
  FILE* f = fopen(bad.c_str(), "w");
  REQUIRE(f != nullptr);
  fputs("ROBUSTNET 1\nproblem path\ndirected 1\nnodes 2\nsource 0\nsink 1\n"
        "edges 1\ne 0 0 1\nscenarios -1\nend\n", f);
  fclose(f);
  CHECK(run("solve --instance " + bad).exit_code == 2);     // parse error

  // Refusal maps to exit 1: amplification past the materialization caps.
  CHECK(run("reduce --cnf " + fig2_cnf() + " --family path --levels 6").exit_code == 1);
}
