#pragma once

// Constructive reductions: 3-SAT gadgets for shortest path and s-t cut,
// recursive gap amplification by edge substitution plus scenario tensor
// products, and the cost-preserving path <-> spanning tree transform.

#include <cstdint>

#include "robustnet/model.hpp"

namespace robustnet {

/// For every scenario of a base instance, the two unit-cost edges that
/// define it (edge_a < edge_b). Amplification requires this structure.
struct PairIndex {
  std::vector<std::pair<int, int>> pairs;

  int count() const { return static_cast<int>(pairs.size()); }
};

struct Reduction {
  RobustInstance instance;
  PairIndex pairs;
};

/// Clause gadget graph: per clause i, nodes s_i, v_1..v_3, t_i; literal
/// arcs (s_i, v_j) in clause-literal order, zero-cost dummy arcs
/// (v_j, t_i), connectors (t_i, s_{i+1}). One scenario per contradictory
/// literal-arc pair, sorted by (smaller edge id, larger edge id); when no
/// pair exists a single all-zero scenario is emitted. An sp_tree comes
/// attached. Edge ids: clause i owns 6i..6i+5 (literals then dummies),
/// connectors follow at 6m..
Reduction sat_to_shortest_path(const CnfFormula& cnf);

/// Cut gadget: m disjoint three-edge s-t paths, one per clause, edges in
/// clause-literal order; same canonical contradictory-pair scenarios.
Reduction sat_to_cut(const CnfFormula& cnf);

/// Derives the pair index from an instance whose every scenario has
/// exactly two unit-cost entries; throws otherwise.
PairIndex pairs_from_instance(const RobustInstance& inst);

enum class AmplifyMode { faithful, compressed };

const char* amplify_mode_name(AmplifyMode m);
std::optional<AmplifyMode> amplify_mode_from_name(const std::string& name);

struct AmplifyParams {
  int levels = 0;
  AmplifyMode mode = AmplifyMode::faithful;
  // Materialization refuses beyond these sizes; the implicit form has no cap.
  std::uint64_t max_scenarios = 5'000'000;
  std::uint64_t max_nonzeros = 50'000'000;
};

struct AmplifyMeta {
  int levels = 0;
  AmplifyMode mode = AmplifyMode::faithful;
  std::uint64_t expected_gap = 2;       // 2^(t+1)
  std::uint64_t edge_count = 0;
  std::uint64_t scenario_count = 0;
  std::uint64_t max_row_nonzeros = 0;   // 2^(t+1) for faithful
};

struct Amplified {
  RobustInstance instance;
  AmplifyMeta meta;
};

/// Level t built by substituting the level t-1 instance for every edge of
/// the level-0 base (faithful), or only for its charged edges
/// (compressed). Scenario (k, i, j) of level r+1 places inner scenario i
/// on the copy of pair(k).first and inner scenario j on the copy of
/// pair(k).second, flattened as k*K_r^2 + i*K_r + j. t = 0 returns the
/// base unchanged.
Amplified amplify(const RobustInstance& base, const PairIndex& pairs,
                  const AmplifyParams& params);

/// Amplified instance kept implicit: counts plus a pure cost callback,
/// for levels where materialization is wasteful or impossible.
class ImplicitInstance {
public:
  ImplicitInstance(RobustInstance base, PairIndex pairs, int levels);

  int levels() const { return levels_; }
  Family family() const { return base_.family; }
  const RobustInstance& base() const { return base_; }
  const PairIndex& pairs() const { return pairs_; }

  std::uint64_t edge_count() const;      // |E|^(t+1)
  std::uint64_t scenario_count() const;  // K^(2^(t+1)-1)
  std::uint64_t expected_gap() const;    // 2^(t+1)

  /// Cost of one edge under one scenario, resolved by recursive index
  /// decomposition down to the base rows.
  Cost cost(std::uint64_t edge, std::uint64_t scenario) const;

  /// Edge and scenario counts of every level 0..t.
  const std::vector<std::uint64_t>& level_edge_counts() const { return edge_counts_; }
  const std::vector<std::uint64_t>& level_scenario_counts() const { return scenario_counts_; }

private:
  RobustInstance base_;
  PairIndex pairs_;
  int levels_;
  std::vector<std::uint64_t> edge_counts_;
  std::vector<std::uint64_t> scenario_counts_;
};

struct TreeTransform {
  RobustInstance instance;
  Solution solution;
};

/// Undirected spanning-tree instance from a level-0 path instance: same
/// graph and scenarios, T = P's literal edges plus every dummy edge
/// (including connectors). Cost-preserving per scenario.
TreeTransform path_to_tree(const RobustInstance& path_instance, const Solution& path);

/// Inverse: recovers the path from the tree's literal edges.
TreeTransform tree_to_path(const RobustInstance& tree_instance, const Solution& tree);

/// Per clause, the arc of the lowest-indexed true literal plus its dummy
/// arc and the connectors. Throws if the assignment does not satisfy cnf.
Solution witness_path(const CnfFormula& cnf, const std::vector<bool>& assignment);

/// Cut analog: per clause path, the edge of the lowest-indexed true literal.
Solution witness_cut(const CnfFormula& cnf, const std::vector<bool>& assignment);

/// Witness at level t on faithful edge ids: every edge of the level-0
/// witness carries a recursively built copy of the witness.
Solution witness_amplified(const CnfFormula& cnf, const std::vector<bool>& assignment,
                           Family family, int levels);

/// Maps the path's literal arcs back to literals set true; unused
/// variables stay unassigned. Throws when contradictory literals appear.
std::vector<std::optional<bool>> decode_assignment(const CnfFormula& cnf, const Solution& path);

/// Number of clauses when the instance has the exact shape emitted by
/// sat_to_shortest_path (graph shape and scenarios on literal arcs only).
int level0_path_clause_count(const RobustInstance& inst);

}  // namespace robustnet
