#pragma once

// Exact and heuristic solvers for the minmax and minmax-regret objectives:
// feasible-set enumeration, brute-force search with incremental pruning,
// Pareto-label dynamic programming over series-parallel decompositions,
// and the mean-scenario K-approximation heuristic.

#include <cstddef>
#include <functional>

#include "robustnet/model.hpp"

namespace robustnet {

enum class Objective { minmax, regret };
enum class SolveMethod { automatic, brute, pareto_dp };

const char* objective_name(Objective o);
std::optional<Objective> objective_from_name(const std::string& name);

struct SolverResult {
  Solution solution;
  Cost value = 0;
  Objective objective = Objective::minmax;
  enum class Method { brute, pareto_dp, heuristic } method = Method::brute;
};

const char* method_name(SolverResult::Method m);

struct EnumerateOptions {
  std::uint64_t limit = 1u << 20;  // refuse beyond this many solutions/candidates
};

/// Streams every feasible solution exactly once in a deterministic order.
/// Throws Refusal when the candidate space exceeds the limit (never
/// truncates silently). Family-specific semantics: path = simple s-t
/// paths; cut = inclusion-minimal s-t cuts; tree = spanning trees;
/// assignment = perfect matchings (side <= 9).
void enumerate_feasible(const RobustInstance& inst,
                        const std::function<void(const Solution&)>& emit,
                        const EnumerateOptions& options = {});

std::vector<Solution> enumerate_feasible(const RobustInstance& inst,
                                         const EnumerateOptions& options = {});

struct DpOptions {
  std::size_t label_cap = 200000;  // per decomposition node, after pruning
  bool prune = true;               // disable only for dominance-soundness tests
};

struct DpStats {
  std::size_t root_labels = 0;
  std::size_t peak_labels = 0;
  std::size_t memo_hits = 0;
  std::size_t nodes_evaluated = 0;
};

/// Exact solve by Pareto-label DP over the instance's sp_tree. Families
/// path and cut only. Structurally identical subtrees (same shape and
/// per-leaf scenario columns) share memoized label sets.
SolverResult pareto_dp(const RobustInstance& inst, Objective objective,
                       const std::vector<Cost>* fstar = nullptr, const DpOptions& options = {},
                       DpStats* stats = nullptr);

/// Exact minmax optimum. Method automatic picks pareto_dp when an sp_tree
/// is present and the family is path or cut, brute search otherwise.
SolverResult solve_minmax_exact(const RobustInstance& inst,
                                SolveMethod method = SolveMethod::automatic,
                                const EnumerateOptions& enum_options = {},
                                const DpOptions& dp_options = {});

/// Exact minmax-regret optimum; computes F* via per_scenario_optima first.
SolverResult solve_regret_exact(const RobustInstance& inst,
                                SolveMethod method = SolveMethod::automatic,
                                const EnumerateOptions& enum_options = {},
                                const DpOptions& dp_options = {});

/// Optimal solution of the deterministic problem under summed scenario
/// costs, re-evaluated under the true objective.
SolverResult mean_scenario_heuristic(const RobustInstance& inst,
                                     Objective objective = Objective::minmax);

}  // namespace robustnet
