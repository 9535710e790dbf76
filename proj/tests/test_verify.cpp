#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "robustnet/reduce.hpp"
#include "robustnet/robust.hpp"
#include "robustnet/verify.hpp"

using namespace robustnet;

namespace {

CnfFormula fig2() { return parse_dimacs(testhelpers::fig2_dimacs()); }
CnfFormula unsat8() { return parse_dimacs(testhelpers::unsat8_dimacs()); }

}  // namespace

TEST_CASE("sat oracle") {
  SatVerdict verdict = sat_oracle(fig2());
  CHECK(verdict.satisfiable);
  CHECK(satisfies(fig2(), verdict.assignment));
  CHECK(satisfies(fig2(), {true, true, true}));  // the paper's witness also satisfies

  CHECK(!sat_oracle(unsat8()).satisfiable);

  CnfFormula empty;
  empty.variable_count = 2;
  CHECK(sat_oracle(empty).satisfiable);  // vacuous

  CnfFormula big;
  big.variable_count = 31;
  CHECK_THROWS_AS(sat_oracle(big), Refusal);
}

TEST_CASE("gap report at level 0") {
  GapReport sat = check_gap(fig2(), "fig2", Family::path, 0);
  CHECK(sat.pass);
  CHECK(sat.satisfiable);
  CHECK(sat.method == GapReport::Method::exact);
  CHECK(sat.bound_kind == BoundKind::exact);
  CHECK(sat.bound == 1);
  CHECK(sat.expected == 1);
  CHECK(sat.instance_edges == 20);
  CHECK(sat.instance_scenarios == 6);

  GapReport unsat = check_gap(unsat8(), "unsat8", Family::path, 0);
  CHECK(unsat.pass);
  CHECK(!unsat.satisfiable);
  CHECK(unsat.bound == 2);
  CHECK(unsat.expected == 2);

  GapReport cut = check_gap(fig2(), "fig2", Family::cut, 0);
  CHECK(cut.pass);
  CHECK(cut.bound == 1);
}

TEST_CASE("gap report at level 1") {
  GapReport sat = check_gap(fig2(), "fig2", Family::path, 1);
  CHECK(sat.pass);
  CHECK(sat.method == GapReport::Method::exact);  // 400 edges, 216 scenarios: small enough
  CHECK(sat.bound == 1);
  CHECK(sat.instance_edges == 400);
  CHECK(sat.instance_scenarios == 216);

  GapReport unsat = check_gap(unsat8(), "unsat8", Family::path, 1);
  CHECK(unsat.pass);
  CHECK(unsat.method == GapReport::Method::compositional);
  CHECK(unsat.bound_kind == BoundKind::lower);
  CHECK(unsat.bound == 4);  // the paper's "gap of 4"
  CHECK(unsat.expected == 4);

  GapReport cut = check_gap(fig2(), "fig2", Family::cut, 1);
  CHECK(cut.pass);
  bool has_caveat = false;
  for (const auto& note : cut.notes)
    if (note.find("cut-family") != std::string::npos) has_caveat = true;
  CHECK(has_caveat);

  GapReport unsat_cut0 = check_gap(unsat8(), "unsat8", Family::cut, 0);
  CHECK(unsat_cut0.pass);
  CHECK(unsat_cut0.bound == 2);
  GapReport unsat_cut1 = check_gap(unsat8(), "unsat8", Family::cut, 1);
  CHECK(unsat_cut1.pass);
  CHECK(unsat_cut1.bound == 4);
  CHECK(unsat_cut1.method == GapReport::Method::compositional);
}

TEST_CASE("gap report at level 2 uses the implicit form") {
  CheckGapOptions options;
  options.samples = 2000;
  GapReport sat = check_gap(fig2(), "fig2", Family::path, 2, AmplifyMode::faithful, options);
  CHECK(sat.pass);
  CHECK(sat.method == GapReport::Method::compositional);
  CHECK(sat.bound_kind == BoundKind::upper);
  CHECK(sat.bound == 1);
  CHECK(sat.expected == 1);
  CHECK(sat.instance_scenarios == 279936);
  bool sampled_note = false;
  for (const auto& note : sat.notes)
    if (note.find("sampled") != std::string::npos) sampled_note = true;
  CHECK(sampled_note);
}

TEST_CASE("gap report text and csv are deterministic") {
  GapReport report = check_gap(fig2(), "fig2", Family::path, 0);
  std::string text = report.to_text();
  CHECK(text.find("seconds") == std::string::npos);
  CHECK(text.find("result: PASS") != std::string::npos);
  CHECK(report.to_text(true).find("seconds:") != std::string::npos);

  CHECK(GapReport::csv_header() ==
        "family,n_vars,m_clauses,K,level,mode,verdict,bound_kind,bound,expected,pass,seconds");
  std::string row = report.to_csv_row();
  CHECK(row.rfind("path,3,3,6,0,faithful,SAT,exact,1,1,1,", 0) == 0);

  GapReport again = check_gap(fig2(), "fig2", Family::path, 0);
  CHECK(again.to_text() == text);
}

TEST_CASE("tensor structure validation") {
  Reduction red = sat_to_shortest_path(fig2());

  StructureCheck level1 = validate_tensor_structure(red.instance, red.pairs, 1, 10000, 0);
  CHECK(level1.ok);
  CHECK(!level1.sampled);
  CHECK(level1.cells_checked == 400ull * 216ull);

  StructureCheck level2 = validate_tensor_structure(red.instance, red.pairs, 2, 10000, 0);
  CHECK(level2.ok);
  CHECK(level2.sampled);
  CHECK(level2.cells_checked == 10000);

  StructureCheck trivial = validate_tensor_structure(red.instance, red.pairs, 0, 100, 0);
  CHECK(trivial.ok);
}

TEST_CASE("regret identity") {
  Reduction path = sat_to_shortest_path(fig2());
  RegretIdentityReport holds = check_regret_equals_minmax(path.instance);
  CHECK(holds.holds());
  CHECK(holds.minmax == 1);
  CHECK(holds.regret == 1);
  CHECK(holds.to_text().find("holds") != std::string::npos);

  Reduction cut = sat_to_cut(fig2());
  CHECK(check_regret_equals_minmax(cut.instance).holds());

  // Forced-edge instance: F* is nonzero, so the identity does not apply.
  RobustInstance forced;
  forced.family = Family::path;
  forced.graph.directed = true;
  forced.graph.node_count = 2;
  forced.graph.edges = {{0, 0, 1}};
  forced.graph.source = 0;
  forced.graph.sink = 1;
  forced.scenarios.rows.push_back(ScenarioRow{{{0, 1}}});
  RegretIdentityReport na = check_regret_equals_minmax(forced);
  CHECK(na.status == RegretIdentityReport::Status::not_applicable);
  CHECK(na.offending_scenario == 0);
  CHECK(na.to_text().find("not applicable") != std::string::npos);
}

TEST_CASE("bench config parsing") {
  BenchConfig config = BenchConfig::parse(
      "# comment\nfamilies path cut\nsizes 4 6\nscenarios 1 3\ntrials 7\nmax_cost 5\n"
      "objective regret\n");
  CHECK(config.families == std::vector<Family>{Family::path, Family::cut});
  CHECK(config.sizes == std::vector<int>{4, 6});
  CHECK(config.scenario_counts == std::vector<int>{1, 3});
  CHECK(config.trials == 7);
  CHECK(config.max_cost == 5);
  CHECK(config.objective == Objective::regret);

  CHECK_THROWS_AS(BenchConfig::parse("bogus 3\n"), ParseError);
  CHECK_THROWS_AS(BenchConfig::parse("families dag\n"), ParseError);
  CHECK_THROWS_AS(BenchConfig::parse("trials 0\n"), ParseError);
}

TEST_CASE("empirical ratios harness") {
  BenchConfig config;
  config.families = {Family::path};
  config.sizes = {6};
  config.scenario_counts = {1, 3};
  config.trials = 25;

  BenchOutcome outcome = empirical_ratios(config, 42);
  CHECK(!outcome.bound_violated);
  CHECK(outcome.excluded == 0);
  CHECK(outcome.csv.rfind("family,edges,K,trial,heuristic,exact,ratio,status\n", 0) == 0);

  // K = 1 trials are exact: every ratio is 1.
  std::istringstream in(outcome.csv);
  std::string line;
  std::getline(in, line);  // header
  int seen_k1 = 0;
  while (std::getline(in, line)) {
    if (line.rfind("path,6,1,", 0) == 0 && line.find("aggregate") == std::string::npos) {
      CHECK(line.find(",1,ok") != std::string::npos);
      ++seen_k1;
    }
  }
  CHECK(seen_k1 == 25);

  // Deterministic, and independent of the worker count.
  CHECK(empirical_ratios(config, 42).csv == outcome.csv);
  CHECK(empirical_ratios(config, 42, 4).csv == outcome.csv);
  CHECK(empirical_ratios(config, 43).csv != outcome.csv);
}

TEST_CASE("random sp instances are valid and solvable") {
  Rng rng(5150);
  for (int trial = 0; trial < 25; ++trial) {
    Family family = rng.coin() ? Family::path : Family::cut;
    RobustInstance inst = random_sp_instance(rng, family, rng.uniform(1, 10),
                                             rng.uniform(1, 4), 9);
    CHECK(validate_instance(inst).ok());
    SolverResult res = solve_minmax_exact(inst);
    CHECK(res.value >= 0);
  }
  for (Family family : {Family::tree, Family::assignment}) {
    for (int trial = 0; trial < 10; ++trial) {
      RobustInstance inst = random_instance(rng, family, rng.uniform(2, 8),
                                            rng.uniform(1, 3), 9);
      CHECK(validate_instance(inst).ok());
      SolverResult res = solve_minmax_exact(inst);
      CHECK(res.value >= 0);
    }
  }
}
