#pragma once

// Deterministic single-scenario subroutines: shortest path, minimum
// spanning tree, minimum s-t cut and minimum-cost perfect matching under
// one fixed cost vector. Used for F*(S), the mean-scenario heuristic and
// solver bounds.

#include "robustnet/model.hpp"

namespace robustnet {

/// One nonnegative cost per edge, indexed by edge id.
using CostVector = std::vector<Cost>;

struct DetResult {
  Solution solution;
  Cost value = 0;
};

/// Minimum-total-cost feasible solution for the family under the given
/// costs. Deterministic: ties are broken by fixed iteration order.
DetResult det_solve(Family family, const Graph& graph, const CostVector& costs);

/// F*(S) for every scenario: component s is det_solve under the dense
/// expansion of scenario row s.
std::vector<Cost> per_scenario_optima(const RobustInstance& inst);

/// Dense expansion of one scenario row (length = edge count).
CostVector dense_costs(const RobustInstance& inst, int scenario);

/// Sum of all scenario rows; same argmin as the K-scaled mean costs.
CostVector summed_costs(const RobustInstance& inst);

}  // namespace robustnet
