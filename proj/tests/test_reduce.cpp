#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "helpers.hpp"
#include "robustnet/detsolve.hpp"
#include "robustnet/reduce.hpp"
#include "robustnet/robust.hpp"
#include "robustnet/verify.hpp"

using namespace robustnet;

namespace {

CnfFormula fig2() { return parse_dimacs(testhelpers::fig2_dimacs()); }

CnfFormula random_3sat(Rng& rng, int variables, int clauses) {
  CnfFormula cnf;
  cnf.variable_count = variables;
  for (int c = 0; c < clauses; ++c) {
    std::array<int, 3> clause{};
    for (int j = 0; j < 3; ++j) {
      while (true) {
        int lit = (rng.uniform(1, variables)) * (rng.coin() ? 1 : -1);
        bool duplicate = false;
        for (int k = 0; k < j; ++k)
          if (clause[static_cast<std::size_t>(k)] == lit) duplicate = true;
        if (!duplicate) {
          clause[static_cast<std::size_t>(j)] = lit;
          break;
        }
      }
    }
    cnf.clauses.push_back(clause);
  }
  return cnf;
}

}  // namespace

TEST_CASE("figure 2 table reproduces exactly") {
  Reduction red = sat_to_shortest_path(fig2());
  const RobustInstance& inst = red.instance;

  CHECK(inst.family == Family::path);
  CHECK(inst.graph.directed);
  CHECK(inst.graph.node_count == 15);
  CHECK(inst.graph.edge_count() == 20);  // 9 literal + 9 dummy + 2 connectors
  CHECK(inst.graph.source == 0);
  CHECK(inst.graph.sink == 14);
  CHECK(validate_instance(inst).ok());

  auto expected = testhelpers::fig2_path_pairs();
  REQUIRE(inst.scenarios.count() == 6);
  for (int s = 0; s < 6; ++s) {
    const auto& row = inst.scenarios.rows[static_cast<std::size_t>(s)].entries;
    REQUIRE(row.size() == 2);
    CHECK(row[0] == std::make_pair(expected[static_cast<std::size_t>(s)].first, Cost{1}));
    CHECK(row[1] == std::make_pair(expected[static_cast<std::size_t>(s)].second, Cost{1}));
  }
  CHECK(red.pairs.pairs == expected);

  REQUIRE(inst.sp_tree.has_value());
  std::vector<int> leaves;
  inst.sp_tree->collect_leaf_edges(leaves);
  CHECK(static_cast<int>(leaves.size()) == 20);
}

TEST_CASE("figure 4 cut table reproduces exactly") {
  Reduction red = sat_to_cut(fig2());
  const RobustInstance& inst = red.instance;

  CHECK(inst.family == Family::cut);
  CHECK(!inst.graph.directed);
  CHECK(inst.graph.node_count == 8);  // 2 + 2m
  CHECK(inst.graph.edge_count() == 9);
  CHECK(validate_instance(inst).ok());

  auto expected = testhelpers::fig4_cut_pairs();
  REQUIRE(inst.scenarios.count() == 6);
  CHECK(red.pairs.pairs == expected);
  for (int s = 0; s < 6; ++s) {
    const auto& row = inst.scenarios.rows[static_cast<std::size_t>(s)].entries;
    REQUIRE(row.size() == 2);
    CHECK(row[0].first == expected[static_cast<std::size_t>(s)].first);
    CHECK(row[1].first == expected[static_cast<std::size_t>(s)].second);
  }
}

TEST_CASE("degenerate formulas produce one all-zero scenario") {
  CnfFormula single = parse_dimacs("p cnf 3 1\n1 2 3 0\n");
  Reduction path = sat_to_shortest_path(single);
  CHECK(path.instance.graph.node_count == 5);
  CHECK(path.instance.graph.edge_count() == 6);
  REQUIRE(path.instance.scenarios.count() == 1);
  CHECK(path.instance.scenarios.rows[0].entries.empty());
  CHECK(path.pairs.count() == 0);

  // Variables appearing with a single polarity never contradict.
  CnfFormula one_polarity = parse_dimacs("p cnf 4 2\n1 2 3 0\n1 2 4 0\n");
  Reduction red = sat_to_shortest_path(one_polarity);
  REQUIRE(red.instance.scenarios.count() == 1);
  CHECK(red.instance.scenarios.rows[0].entries.empty());

  Reduction cut = sat_to_cut(single);
  CHECK(cut.instance.graph.node_count == 4);
  CHECK(cut.instance.graph.edge_count() == 3);
  CHECK(cut.instance.scenarios.count() == 1);
}

TEST_CASE("complementary pair within one clause spawns a scenario") {
  // x1 and ~x1 in the same clause are distinct literals; their pair gets a
  // scenario like any other, and a path can use at most one of the arcs.
  CnfFormula cnf = parse_dimacs("p cnf 2 1\n1 -1 2 0\n");
  Reduction red = sat_to_shortest_path(cnf);
  REQUIRE(red.instance.scenarios.count() == 1);
  std::vector<std::pair<int, Cost>> expected{{0, 1}, {1, 1}};
  CHECK(red.instance.scenarios.rows[0].entries == expected);
  CHECK(solve_minmax_exact(red.instance).value <= 1);
}

TEST_CASE("satisfying cut witness has minmax at most 1") {
  Reduction red = sat_to_cut(fig2());
  Solution witness = witness_cut(fig2(), {true, true, true});
  CHECK(minmax_value(red.instance, witness) <= 1);
}

TEST_CASE("generated scenarios map to contradictory literal pairs") {
  Rng rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    CnfFormula cnf = random_3sat(rng, rng.uniform(2, 5), rng.uniform(1, 6));
    Reduction red = sat_to_shortest_path(cnf);
    auto literal_of = [&](int edge) {
      return cnf.clauses[static_cast<std::size_t>(edge / 6)][static_cast<std::size_t>(edge % 6)];
    };
    std::size_t expected_pairs = 0;
    for (std::size_t a = 0; a < cnf.clauses.size() * 3; ++a)
      for (std::size_t b = a + 1; b < cnf.clauses.size() * 3; ++b) {
        int la = cnf.clauses[a / 3][a % 3];
        int lb = cnf.clauses[b / 3][b % 3];
        if (la == -lb) ++expected_pairs;
      }
    if (expected_pairs == 0) {
      CHECK(red.instance.scenarios.count() == 1);
      CHECK(red.instance.scenarios.rows[0].entries.empty());
      continue;
    }
    REQUIRE(red.pairs.pairs.size() == expected_pairs);
    for (int s = 0; s < red.instance.scenarios.count(); ++s) {
      const auto& row = red.instance.scenarios.rows[static_cast<std::size_t>(s)].entries;
      REQUIRE(row.size() == 2);
      CHECK(row[0].second == 1);
      CHECK(row[1].second == 1);
      CHECK(row[0].first % 6 < 3);  // literal arcs only
      CHECK(row[1].first % 6 < 3);
      CHECK(literal_of(row[0].first) == -literal_of(row[1].first));
    }
  }
}

TEST_CASE("amplification counts match the closed forms") {
  Reduction red = sat_to_shortest_path(fig2());

  SUBCASE("t = 0 is the identity") {
    AmplifyParams params;
    params.levels = 0;
    Amplified amp = amplify(red.instance, red.pairs, params);
    CHECK(amp.instance == red.instance);
    CHECK(amp.meta.expected_gap == 2);
  }

  SUBCASE("t = 1 faithful: |E|^2 edges, K^3 scenarios") {
    AmplifyParams params;
    params.levels = 1;
    Amplified amp = amplify(red.instance, red.pairs, params);
    CHECK(amp.instance.graph.edge_count() == 400);
    CHECK(amp.instance.scenarios.count() == 216);
    CHECK(amp.meta.expected_gap == 4);
    CHECK(amp.meta.max_row_nonzeros <= 4);  // 2^(t+1)
    CHECK(validate_instance(amp.instance).ok());
  }

  SUBCASE("t = 2 materialized and implicit counts agree") {
    AmplifyParams params;
    params.levels = 2;
    Amplified amp = amplify(red.instance, red.pairs, params);
    CHECK(amp.instance.graph.edge_count() == 8000);          // 20^3
    CHECK(amp.instance.scenarios.count() == 279936);         // 6^7 = K^(2^(t+1)-1)
    CHECK(amp.meta.max_row_nonzeros <= 8);

    ImplicitInstance implicit(red.instance, red.pairs, 2);
    CHECK(implicit.edge_count() == 8000);
    CHECK(implicit.scenario_count() == 279936);
    CHECK(implicit.expected_gap() == 8);
  }
}

TEST_CASE("amplified scenario layout matches hand-computed cells") {
  Reduction red = sat_to_shortest_path(fig2());
  AmplifyParams params;
  params.levels = 1;
  Amplified amp = amplify(red.instance, red.pairs, params);

  // Scenario (k=0, i=1, j=3): pair (0,6); inner rows {(1,1),(7,1)} and
  // {(2,1),(8,1)} land in the copies of arcs 0 and 6.
  const auto& row = amp.instance.scenarios.rows[0 * 36 + 1 * 6 + 3].entries;
  std::vector<std::pair<int, Cost>> expected{{1, 1}, {7, 1}, {122, 1}, {128, 1}};
  CHECK(row == expected);

  // Scenario (k=5, i=0, j=0): pair (6,12); inner row 0 is {(0,1),(6,1)}.
  const auto& row2 = amp.instance.scenarios.rows[5 * 36].entries;
  std::vector<std::pair<int, Cost>> expected2{{120, 1}, {126, 1}, {240, 1}, {246, 1}};
  CHECK(row2 == expected2);

  // Implicit lookups agree with the materialized rows.
  ImplicitInstance implicit(red.instance, red.pairs, 1);
  for (const auto& [e, c] : expected) CHECK(implicit.cost(e, 0 * 36 + 1 * 6 + 3) == c);
  CHECK(implicit.cost(0, 0 * 36 + 1 * 6 + 3) == 0);
  CHECK(implicit.cost(121, 5 * 36) == 0);
}

TEST_CASE("compressed mode is layout-equivalent to faithful") {
  Reduction red = sat_to_shortest_path(fig2());
  AmplifyParams faithful;
  faithful.levels = 1;
  AmplifyParams compressed;
  compressed.levels = 1;
  compressed.mode = AmplifyMode::compressed;

  Amplified f = amplify(red.instance, red.pairs, faithful);
  Amplified c = amplify(red.instance, red.pairs, compressed);

  CHECK(c.instance.graph.edge_count() == 9 * 20 + 11);  // charged copies + single arcs
  CHECK(c.instance.scenarios.count() == f.instance.scenarios.count());

  // Map faithful charged-copy edge ids onto compressed ids and compare rows.
  std::vector<char> charged(20, 0);
  for (const auto& [a, b] : red.pairs.pairs) charged[a] = charged[b] = 1;
  std::vector<int> offset(20, 0);
  int next = 0;
  for (int e = 0; e < 20; ++e) {
    offset[e] = next;
    next += charged[e] ? 20 : 1;
  }
  for (int s = 0; s < f.instance.scenarios.count(); ++s) {
    const auto& frow = f.instance.scenarios.rows[static_cast<std::size_t>(s)].entries;
    const auto& crow = c.instance.scenarios.rows[static_cast<std::size_t>(s)].entries;
    REQUIRE(frow.size() == crow.size());
    for (std::size_t i = 0; i < frow.size(); ++i) {
      int base_edge = frow[i].first / 20;
      int inner = frow[i].first % 20;
      REQUIRE(charged[base_edge] == 1);
      CHECK(crow[i].first == offset[base_edge] + inner);
      CHECK(crow[i].second == frow[i].second);
    }
  }

  // Same exact optimum either way.
  CHECK(solve_minmax_exact(f.instance).value == 1);
  CHECK(solve_minmax_exact(c.instance).value == 1);
}

TEST_CASE("amplification rejects unsuitable bases") {
  Reduction red = sat_to_shortest_path(parse_dimacs("p cnf 3 1\n1 2 3 0\n"));
  AmplifyParams params;
  params.levels = 1;
  CHECK_THROWS_AS(amplify(red.instance, red.pairs, params), Error);  // all-zero scenario
  CHECK_THROWS_AS(pairs_from_instance(red.instance), Error);

  Reduction good = sat_to_shortest_path(fig2());
  AmplifyParams huge;
  huge.levels = 6;
  CHECK_THROWS_AS(amplify(good.instance, good.pairs, huge), Refusal);  // over the caps
}

TEST_CASE("per-scenario optima stay zero after amplification") {
  Reduction red = sat_to_shortest_path(fig2());
  AmplifyParams params;
  params.levels = 1;
  Amplified amp = amplify(red.instance, red.pairs, params);
  auto fstar = per_scenario_optima(amp.instance);
  for (Cost v : fstar) CHECK(v == 0);
}

TEST_CASE("path to tree transform") {
  Reduction red = sat_to_shortest_path(fig2());
  Solution witness = witness_path(fig2(), {true, true, true});

  TreeTransform tree = path_to_tree(red.instance, witness);
  CHECK(tree.instance.family == Family::tree);
  CHECK(!tree.instance.graph.directed);
  CHECK(!tree.instance.graph.source.has_value());
  CHECK(tree.solution.size() == 14);  // |V| - 1 = 5*3 - 1
  CHECK(validate_instance(tree.instance).ok());

  // Cost preservation is per scenario, not just the max.
  auto path_costs = evaluate(red.instance, witness).per_scenario_costs;
  auto tree_costs = evaluate(tree.instance, tree.solution).per_scenario_costs;
  CHECK(path_costs == tree_costs);

  TreeTransform back = tree_to_path(tree.instance, tree.solution);
  CHECK(back.solution == witness);
  CHECK(back.instance == red.instance);

  SUBCASE("rejects non-image trees and wrong shapes") {
    Solution two_literals = tree.solution;
    two_literals.edge_ids.push_back(1);  // second literal in clause 0
    std::sort(two_literals.edge_ids.begin(), two_literals.edge_ids.end());
    CHECK_THROWS_AS(tree_to_path(tree.instance, two_literals), Error);

    RobustInstance not_level0 = tree.instance;
    not_level0.graph.edges[0].head = 2;
    CHECK_THROWS_AS(tree_to_path(not_level0, tree.solution), Error);

    CHECK_THROWS_AS(path_to_tree(red.instance, Solution{{0, 1, 2}}), Error);
  }
}

TEST_CASE("optimal tree value equals optimal path value") {
  // Satisfiable fixture: both optima are 1.
  Reduction path_red = sat_to_shortest_path(fig2());
  Solution any_path = witness_path(fig2(), {true, true, true});
  TreeTransform tree = path_to_tree(path_red.instance, any_path);
  CHECK(solve_minmax_exact(path_red.instance).value == 1);
  CHECK(solve_minmax_exact(tree.instance).value == 1);
}

TEST_CASE("witnesses and decoding") {
  CnfFormula cnf = fig2();
  Solution witness = witness_path(cnf, {true, true, true});
  // Lowest-indexed true literal per clause: x1 @ C1, x2 @ C2, x1 @ C3.
  CHECK(witness == make_solution({0, 3, 7, 10, 12, 15, 18, 19}));

  Reduction red = sat_to_shortest_path(cnf);
  CHECK(minmax_value(red.instance, witness) == 1);

  auto decoded = decode_assignment(cnf, witness);
  REQUIRE(decoded.size() == 3);
  CHECK(decoded[0] == true);
  CHECK(decoded[1] == true);
  CHECK(!decoded[2].has_value());

  // Any extension of the decoded partial assignment satisfies the formula.
  std::vector<bool> extended{*decoded[0], *decoded[1], false};
  CHECK(satisfies(cnf, extended));
  extended[2] = true;
  CHECK(satisfies(cnf, extended));

  CHECK_THROWS_AS(witness_path(cnf, {false, false, false}), Error);  // C3 unsatisfied

  Solution contradictory = make_solution({0, 3, 6, 9, 12, 15, 18, 19});  // x1 and ~x1
  CHECK_THROWS_AS(decode_assignment(cnf, contradictory), Error);
}

TEST_CASE("recursive witness stays within the bound at level 1") {
  CnfFormula cnf = fig2();
  Reduction red = sat_to_shortest_path(cnf);
  AmplifyParams params;
  params.levels = 1;
  Amplified amp = amplify(red.instance, red.pairs, params);

  Solution witness = witness_amplified(cnf, {true, true, true}, Family::path, 1);
  CHECK(witness.size() == 8 * 8);  // base witness edges times inner witness edges
  CHECK(minmax_value(amp.instance, witness) <= 1);
}
