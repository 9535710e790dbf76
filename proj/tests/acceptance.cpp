// Acceptance suite: one check per shipped guarantee, each printed as a
// pass/fail line with its runtime against the stated budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "robustnet/detsolve.hpp"
#include "robustnet/model.hpp"
#include "robustnet/reduce.hpp"
#include "robustnet/robust.hpp"
#include "robustnet/verify.hpp"

using namespace robustnet;

namespace {

struct Failure {
  std::string message;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw Failure{message};
}

CnfFormula fig2() { return parse_dimacs(testhelpers::fig2_dimacs()); }
CnfFormula unsat8() { return parse_dimacs(testhelpers::unsat8_dimacs()); }

// 1. The path reduction reproduces Figure 2's scenario table exactly.
void criterion_fig2_reproduction() {
  Reduction red = sat_to_shortest_path(fig2());
  require(red.instance.graph.node_count == 15, "node count");
  require(red.instance.graph.edge_count() == 20, "edge count");
  require(red.instance.scenarios.count() == 6, "scenario count");
  auto expected = testhelpers::fig2_path_pairs();
  for (int s = 0; s < 6; ++s) {
    const auto& row = red.instance.scenarios.rows[static_cast<std::size_t>(s)].entries;
    require(row.size() == 2, "row size");
    require(row[0].first == expected[static_cast<std::size_t>(s)].first &&
                row[1].first == expected[static_cast<std::size_t>(s)].second &&
                row[0].second == 1 && row[1].second == 1,
            "scenario " + std::to_string(s + 1) + " pattern");
  }
  require(validate_instance(red.instance).ok(), "validation");
}

// 2. The cut reduction reproduces Figure 4's table exactly.
void criterion_fig4_reproduction() {
  Reduction red = sat_to_cut(fig2());
  require(red.instance.graph.node_count == 8, "node count");
  require(red.instance.graph.edge_count() == 9, "edge count");
  require(red.instance.scenarios.count() == 6, "scenario count");
  auto expected = testhelpers::fig4_cut_pairs();
  for (int s = 0; s < 6; ++s) {
    const auto& row = red.instance.scenarios.rows[static_cast<std::size_t>(s)].entries;
    require(row.size() == 2, "row size");
    require(row[0].first == expected[static_cast<std::size_t>(s)].first &&
                row[1].first == expected[static_cast<std::size_t>(s)].second &&
                row[0].second == 1 && row[1].second == 1,
            "scenario " + std::to_string(s + 1) + " pattern");
  }
  require(validate_instance(red.instance).ok(), "validation");
}

// 3. Level-0 gap by brute force: SAT side both optima 1, UNSAT side 2.
void criterion_level0_gap() {
  RobustInstance sat = sat_to_shortest_path(fig2()).instance;
  require(solve_minmax_exact(sat, SolveMethod::brute).value == 1, "fig2 minmax optimum");
  require(solve_regret_exact(sat, SolveMethod::brute).value == 1, "fig2 regret optimum");

  RobustInstance unsat = sat_to_shortest_path(unsat8()).instance;
  require(solve_minmax_exact(unsat, SolveMethod::brute).value == 2, "unsat8 minmax optimum");
}

// 4. Level-1 counts and gap: 400 edges / 216 scenarios, exact optimum 1
//    via memoized Pareto DP, compositional >= 4 for the UNSAT formula.
void criterion_level1() {
  Reduction red = sat_to_shortest_path(fig2());
  AmplifyParams params;
  params.levels = 1;
  Amplified amp = amplify(red.instance, red.pairs, params);
  require(amp.instance.graph.edge_count() == 400, "|E|^2 edges");
  require(amp.instance.scenarios.count() == 216, "K^3 scenarios");

  DpStats stats;
  SolverResult res = pareto_dp(amp.instance, Objective::minmax, nullptr, DpOptions{}, &stats);
  require(res.value == 1, "level-1 exact optimum");
  require(stats.memo_hits > 0, "memoized copies");

  GapReport unsat = check_gap(unsat8(), "unsat8", Family::path, 1);
  require(unsat.method == GapReport::Method::compositional, "compositional certificate");
  require(unsat.bound_kind == BoundKind::lower && unsat.bound == 4, "lower bound 4");
  require(unsat.pass, "unsat level-1 certificate passes");
}

// 5. Level-2 counts and sampled implicit-vs-reference agreement.
void criterion_level2() {
  Reduction red = sat_to_shortest_path(fig2());
  ImplicitInstance implicit(red.instance, red.pairs, 2);
  require(implicit.scenario_count() == 279936, "6^7 = K^(2^(t+1)-1) scenarios");
  require(implicit.edge_count() == 8000, "20^3 edges");
  StructureCheck check = validate_tensor_structure(red.instance, red.pairs, 2, 10000, 12345);
  require(check.ok, "sampled lookups agree: " + check.mismatch);
  require(check.sampled && check.cells_checked == 10000, "10000 seeded samples");
}

// 6. Regret identity across the generated corpus.
void criterion_regret_identity() {
  std::vector<RobustInstance> corpus;
  corpus.push_back(sat_to_shortest_path(fig2()).instance);
  corpus.push_back(sat_to_cut(fig2()).instance);
  corpus.push_back(sat_to_shortest_path(unsat8()).instance);
  corpus.push_back(sat_to_cut(unsat8()).instance);

  // Tree-family instances from the transform (any feasible path works).
  {
    RobustInstance sat_path = corpus[0];
    corpus.push_back(path_to_tree(sat_path, witness_path(fig2(), {true, true, true})).instance);
    RobustInstance unsat_path = corpus[2];
    std::vector<int> edges;
    for (int i = 0; i < 8; ++i) {
      edges.push_back(6 * i);      // first literal arc
      edges.push_back(6 * i + 3);  // its dummy
    }
    for (int i = 0; i + 1 < 8; ++i) edges.push_back(6 * 8 + i);
    corpus.push_back(path_to_tree(unsat_path, make_solution(edges)).instance);
  }

  // Level-1 amplified instance.
  {
    Reduction red = sat_to_shortest_path(fig2());
    AmplifyParams params;
    params.levels = 1;
    corpus.push_back(amplify(red.instance, red.pairs, params).instance);
  }

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto fstar = per_scenario_optima(corpus[i]);
    for (Cost v : fstar)
      require(v == 0, "F* zero on corpus instance " + std::to_string(i));
    RegretIdentityReport report = check_regret_equals_minmax(corpus[i]);
    require(report.holds(), "regret = minmax on corpus instance " + std::to_string(i));
  }
}

// 7. Tree transform: cost vector preserved, |V|-1 edges, equal optima on
//    the SAT (1) and UNSAT (2) fixtures.
void criterion_tree_transform() {
  Reduction sat = sat_to_shortest_path(fig2());
  Solution witness = witness_path(fig2(), {true, true, true});
  TreeTransform tree = path_to_tree(sat.instance, witness);
  require(tree.solution.size() == 14, "|V|-1 = 14 edges");
  require(evaluate(sat.instance, witness).per_scenario_costs ==
              evaluate(tree.instance, tree.solution).per_scenario_costs,
          "per-scenario cost vector preserved");
  require(solve_minmax_exact(sat.instance).value == 1, "sat path optimum 1");
  require(solve_minmax_exact(tree.instance).value == 1, "sat tree optimum 1");

  Reduction unsat = sat_to_shortest_path(unsat8());
  std::vector<int> edges;
  for (int i = 0; i < 8; ++i) {
    edges.push_back(6 * i);
    edges.push_back(6 * i + 3);
  }
  for (int i = 0; i + 1 < 8; ++i) edges.push_back(6 * 8 + i);
  TreeTransform unsat_tree = path_to_tree(unsat.instance, make_solution(edges));
  require(solve_minmax_exact(unsat.instance).value == 2, "unsat path optimum 2");
  require(solve_minmax_exact(unsat_tree.instance).value == 2, "unsat tree optimum 2");
}

// 8. The mean-scenario heuristic stays within K times the optimum.
void criterion_k_approximation() {
  for (int scenarios : {3, 5}) {
    Rng rng(1000 + static_cast<std::uint64_t>(scenarios));
    for (int trial = 0; trial < 100; ++trial) {
      RobustInstance inst = random_sp_instance(rng, Family::path, rng.uniform(1, 8),
                                               scenarios, 9);
      Cost exact = solve_minmax_exact(inst).value;
      Cost heuristic = mean_scenario_heuristic(inst).value;
      require(heuristic <= static_cast<Cost>(scenarios) * exact,
              "K=" + std::to_string(scenarios) + " trial " + std::to_string(trial) +
                  ": heuristic " + std::to_string(heuristic) + " > K * " +
                  std::to_string(exact));
    }
  }
}

// 9. Pareto DP equals brute force on random series-parallel instances,
//    both objectives.
void criterion_oracle_equivalence() {
  Rng rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    Family family = trial % 2 == 0 ? Family::path : Family::cut;
    RobustInstance inst = random_sp_instance(rng, family, rng.uniform(1, 12),
                                             rng.uniform(1, 4), 9);
    Cost brute_minmax = solve_minmax_exact(inst, SolveMethod::brute).value;
    Cost dp_minmax = solve_minmax_exact(inst, SolveMethod::pareto_dp).value;
    require(brute_minmax == dp_minmax,
            "minmax mismatch on trial " + std::to_string(trial) + ": brute " +
                std::to_string(brute_minmax) + " vs dp " + std::to_string(dp_minmax));
    Cost brute_regret = solve_regret_exact(inst, SolveMethod::brute).value;
    Cost dp_regret = solve_regret_exact(inst, SolveMethod::pareto_dp).value;
    require(brute_regret == dp_regret,
            "regret mismatch on trial " + std::to_string(trial));
  }
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "figure 2 reproduction (path reduction, exact table)", 1.0, criterion_fig2_reproduction},
      {2, "figure 4 reproduction (cut reduction, exact table)", 1.0, criterion_fig4_reproduction},
      {3, "level-0 gap: SAT optima 1, UNSAT optimum 2 (brute force)", 10.0, criterion_level0_gap},
      {4, "level-1: 400 edges / 216 scenarios, exact optimum 1, UNSAT bound >= 4", 300.0,
       criterion_level1},
      {5, "level-2: 6^7 scenarios, 10000 sampled implicit lookups agree", 300.0, criterion_level2},
      {6, "regret identity: F* = 0 and regret = minmax across the corpus", 60.0,
       criterion_regret_identity},
      {7, "tree transform: cost-preserving, optima match on both fixtures", 30.0,
       criterion_tree_transform},
      {8, "K-approximation: heuristic <= K * exact on 200 random instances", 120.0,
       criterion_k_approximation},
      {9, "oracle equivalence: pareto_dp = brute on 200 instances, both objectives", 120.0,
       criterion_oracle_equivalence},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    auto started = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.run();
    } catch (const Failure& f) {
      failure = f.message;
    } catch (const std::exception& e) {
      failure = e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (failure.empty() && seconds > criterion.budget_seconds)
      failure = "exceeded time budget of " + std::to_string(criterion.budget_seconds) + " s";
    if (failure.empty()) {
      std::printf("criterion %d: PASS (%.2f s) - %s\n", criterion.id, seconds, criterion.title);
    } else {
      std::printf("criterion %d: FAIL (%.2f s) - %s: %s\n", criterion.id, seconds,
                  criterion.title, failure.c_str());
      ++failures;
    }
  }
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
