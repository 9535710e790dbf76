#include "robustnet/reduce.hpp"

#include <algorithm>
#include <limits>

namespace robustnet {

const char* amplify_mode_name(AmplifyMode m) {
  return m == AmplifyMode::faithful ? "faithful" : "compressed";
}

std::optional<AmplifyMode> amplify_mode_from_name(const std::string& name) {
  if (name == "faithful") return AmplifyMode::faithful;
  if (name == "compressed") return AmplifyMode::compressed;
  return std::nullopt;
}

namespace {

struct Occurrence {
  int edge_id;
  int literal;
};

// Scenarios from contradictory literal-occurrence pairs, in canonical
// (smaller edge id, larger edge id) lexicographic order. Falls back to a
// single all-zero scenario when no pair exists.
std::pair<ScenarioSet, PairIndex> pair_scenarios(const std::vector<Occurrence>& occurrences) {
  PairIndex pairs;
  for (std::size_t a = 0; a < occurrences.size(); ++a)
    for (std::size_t b = a + 1; b < occurrences.size(); ++b)
      if (occurrences[a].literal == -occurrences[b].literal)
        pairs.pairs.emplace_back(occurrences[a].edge_id, occurrences[b].edge_id);
  std::sort(pairs.pairs.begin(), pairs.pairs.end());

  ScenarioSet scenarios;
  if (pairs.pairs.empty()) {
    scenarios.rows.push_back(ScenarioRow{});  // keep K >= 1
    return {scenarios, pairs};
  }
  scenarios.rows.reserve(pairs.pairs.size());
  for (const auto& [a, b] : pairs.pairs) {
    ScenarioRow row;
    row.entries = {{a, 1}, {b, 1}};
    scenarios.rows.push_back(std::move(row));
  }
  return {scenarios, pairs};
}

void require_valid_cnf(const CnfFormula& cnf) {
  if (cnf.variable_count <= 0) throw Error("formula has no variables");
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) {
      int var = lit > 0 ? lit : -lit;
      if (var < 1 || var > cnf.variable_count)
        throw Error("literal " + std::to_string(lit) + " out of range");
    }
    if (clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2])
      throw Error("clause literals must be distinct");
  }
  if (cnf.clauses.empty()) throw Error("formula has no clauses");
}

SPTree leaf_with_terminals(int edge_id, int left, int right) {
  SPTree t = SPTree::leaf(edge_id);
  t.left_terminal = left;
  t.right_terminal = right;
  return t;
}

SPTree level0_path_sptree(int m) {
  std::vector<SPTree> chain;
  for (int i = 0; i < m; ++i) {
    std::vector<SPTree> branches;
    for (int j = 0; j < 3; ++j) {
      std::vector<SPTree> pairleaves;
      pairleaves.push_back(leaf_with_terminals(6 * i + j, 5 * i, 5 * i + 1 + j));
      pairleaves.push_back(leaf_with_terminals(6 * i + 3 + j, 5 * i + 1 + j, 5 * i + 4));
      SPTree branch = SPTree::series(std::move(pairleaves));
      branch.left_terminal = 5 * i;
      branch.right_terminal = 5 * i + 4;
      branches.push_back(std::move(branch));
    }
    SPTree gadget = SPTree::parallel(std::move(branches));
    gadget.left_terminal = 5 * i;
    gadget.right_terminal = 5 * i + 4;
    chain.push_back(std::move(gadget));
    if (i + 1 < m)
      chain.push_back(leaf_with_terminals(6 * m + i, 5 * i + 4, 5 * (i + 1)));
  }
  if (chain.size() == 1) return std::move(chain.front());
  SPTree root = SPTree::series(std::move(chain));
  root.left_terminal = 0;
  root.right_terminal = 5 * m - 1;
  return root;
}

}  // namespace

Reduction sat_to_shortest_path(const CnfFormula& cnf) {
  require_valid_cnf(cnf);
  int m = cnf.clause_count();

  Reduction out;
  RobustInstance& inst = out.instance;
  inst.family = Family::path;
  inst.graph.directed = true;
  inst.graph.node_count = 5 * m;
  inst.graph.source = 0;
  inst.graph.sink = 5 * m - 1;

  std::vector<Occurrence> occurrences;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < 3; ++j) {
      inst.graph.edges.push_back({6 * i + j, 5 * i, 5 * i + 1 + j});
      occurrences.push_back({6 * i + j, cnf.clauses[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
    }
    for (int j = 0; j < 3; ++j)
      inst.graph.edges.push_back({6 * i + 3 + j, 5 * i + 1 + j, 5 * i + 4});
  }
  for (int i = 0; i + 1 < m; ++i)
    inst.graph.edges.push_back({6 * m + i, 5 * i + 4, 5 * (i + 1)});

  auto [scenarios, pairs] = pair_scenarios(occurrences);
  inst.scenarios = std::move(scenarios);
  out.pairs = std::move(pairs);
  inst.sp_tree = level0_path_sptree(m);
  return out;
}

Reduction sat_to_cut(const CnfFormula& cnf) {
  require_valid_cnf(cnf);
  int m = cnf.clause_count();

  Reduction out;
  RobustInstance& inst = out.instance;
  inst.family = Family::cut;
  inst.graph.directed = false;
  inst.graph.node_count = 2 + 2 * m;
  inst.graph.source = 0;
  inst.graph.sink = 2 * m + 1;

  std::vector<Occurrence> occurrences;
  std::vector<SPTree> chains;
  for (int i = 0; i < m; ++i) {
    int v1 = 1 + 2 * i, v2 = 2 + 2 * i;
    inst.graph.edges.push_back({3 * i, 0, v1});
    inst.graph.edges.push_back({3 * i + 1, v1, v2});
    inst.graph.edges.push_back({3 * i + 2, v2, 2 * m + 1});
    for (int j = 0; j < 3; ++j)
      occurrences.push_back({3 * i + j, cnf.clauses[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
    std::vector<SPTree> leaves;
    leaves.push_back(leaf_with_terminals(3 * i, 0, v1));
    leaves.push_back(leaf_with_terminals(3 * i + 1, v1, v2));
    leaves.push_back(leaf_with_terminals(3 * i + 2, v2, 2 * m + 1));
    SPTree chain = SPTree::series(std::move(leaves));
    chain.left_terminal = 0;
    chain.right_terminal = 2 * m + 1;
    chains.push_back(std::move(chain));
  }

  auto [scenarios, pairs] = pair_scenarios(occurrences);
  inst.scenarios = std::move(scenarios);
  out.pairs = std::move(pairs);
  if (chains.size() == 1) {
    inst.sp_tree = std::move(chains.front());
  } else {
    SPTree root = SPTree::parallel(std::move(chains));
    root.left_terminal = 0;
    root.right_terminal = 2 * m + 1;
    inst.sp_tree = std::move(root);
  }
  return out;
}

PairIndex pairs_from_instance(const RobustInstance& inst) {
  PairIndex pairs;
  pairs.pairs.reserve(inst.scenarios.rows.size());
  for (int s = 0; s < inst.scenarios.count(); ++s) {
    const auto& entries = inst.scenarios.rows[static_cast<std::size_t>(s)].entries;
    if (entries.size() != 2 || entries[0].second != 1 || entries[1].second != 1)
      throw Error("scenario " + std::to_string(s) +
                  " must have exactly two unit-cost entries for amplification");
    pairs.pairs.emplace_back(entries[0].first, entries[1].first);
  }
  return pairs;
}

// ------------------------------------------------------------------
// Amplification
// ------------------------------------------------------------------

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw Refusal(std::string(what) + " overflows 64 bits");
  return a * b;
}

void check_pairs(const RobustInstance& base, const PairIndex& pairs) {
  if (pairs.count() != base.scenarios.count())
    throw Error("pair index size does not match scenario count");
  for (int s = 0; s < base.scenarios.count(); ++s) {
    const auto& entries = base.scenarios.rows[static_cast<std::size_t>(s)].entries;
    const auto& [a, b] = pairs.pairs[static_cast<std::size_t>(s)];
    if (a >= b) throw Error("pair index must store edge_a < edge_b");
    if (entries.size() != 2 || entries[0] != std::make_pair(a, Cost{1}) ||
        entries[1] != std::make_pair(b, Cost{1}))
      throw Error("scenario " + std::to_string(s) +
                  " must have exactly two unit-cost entries matching its pair");
  }
}

// Remaps one copy of the inner sp_tree: edge ids shift by `edge_offset`,
// node ids go through `node_map`.
SPTree remap_tree(const SPTree& t, int edge_offset, const std::vector<int>& node_map) {
  SPTree out;
  out.kind = t.kind;
  out.left_terminal = node_map[static_cast<std::size_t>(t.left_terminal)];
  out.right_terminal = node_map[static_cast<std::size_t>(t.right_terminal)];
  if (t.kind == SPTree::Kind::leaf) {
    out.edge_id = t.edge_id + edge_offset;
    return out;
  }
  out.children.reserve(t.children.size());
  for (const auto& c : t.children) out.children.push_back(remap_tree(c, edge_offset, node_map));
  return out;
}

SPTree substitute_tree(const SPTree& base_tree, const RobustInstance& inner,
                       const std::vector<int>& edge_offsets, const std::vector<char>& expanded,
                       const std::vector<std::vector<int>>& node_maps) {
  if (base_tree.kind == SPTree::Kind::leaf) {
    int e = base_tree.edge_id;
    if (!expanded[static_cast<std::size_t>(e)]) {
      SPTree leaf = SPTree::leaf(edge_offsets[static_cast<std::size_t>(e)]);
      leaf.left_terminal = base_tree.left_terminal;
      leaf.right_terminal = base_tree.right_terminal;
      return leaf;
    }
    return remap_tree(*inner.sp_tree, edge_offsets[static_cast<std::size_t>(e)],
                      node_maps[static_cast<std::size_t>(e)]);
  }
  SPTree out;
  out.kind = base_tree.kind;
  out.left_terminal = base_tree.left_terminal;
  out.right_terminal = base_tree.right_terminal;
  out.children.reserve(base_tree.children.size());
  for (const auto& c : base_tree.children)
    out.children.push_back(substitute_tree(c, inner, edge_offsets, expanded, node_maps));
  return out;
}

// One amplification step: substitute `inner` into every (faithful) or
// every charged (compressed) edge of `base`.
RobustInstance substitute(const RobustInstance& base, const PairIndex& pairs,
                          const RobustInstance& inner, AmplifyMode mode) {
  const Graph& bg = base.graph;
  const Graph& ig = inner.graph;
  int inner_edges = ig.edge_count();
  int inner_internal = ig.node_count - 2;  // nodes minus its two terminals

  std::vector<char> charged(static_cast<std::size_t>(bg.edge_count()), 0);
  if (mode == AmplifyMode::compressed) {
    for (const auto& [a, b] : pairs.pairs) {
      charged[static_cast<std::size_t>(a)] = 1;
      charged[static_cast<std::size_t>(b)] = 1;
    }
  } else {
    std::fill(charged.begin(), charged.end(), 1);
  }

  RobustInstance out;
  out.family = base.family;
  out.graph.directed = bg.directed;
  out.graph.source = bg.source;
  out.graph.sink = bg.sink;

  // Internal nodes of the inner graph in id order (terminals excluded).
  std::vector<int> internal_index(static_cast<std::size_t>(ig.node_count), -1);
  {
    int next = 0;
    for (int v = 0; v < ig.node_count; ++v) {
      if (v == *ig.source || v == *ig.sink) continue;
      internal_index[static_cast<std::size_t>(v)] = next++;
    }
  }

  std::vector<int> edge_offsets(static_cast<std::size_t>(bg.edge_count()), 0);
  std::vector<std::vector<int>> node_maps(static_cast<std::size_t>(bg.edge_count()));
  int next_edge = 0;
  int next_node = bg.node_count;
  for (const auto& be : bg.edges) {
    edge_offsets[static_cast<std::size_t>(be.id)] = next_edge;
    if (!charged[static_cast<std::size_t>(be.id)]) {
      out.graph.edges.push_back({next_edge, be.tail, be.head});
      ++next_edge;
      continue;
    }
    std::vector<int>& node_map = node_maps[static_cast<std::size_t>(be.id)];
    node_map.assign(static_cast<std::size_t>(ig.node_count), -1);
    for (int v = 0; v < ig.node_count; ++v) {
      if (v == *ig.source) {
        node_map[static_cast<std::size_t>(v)] = be.tail;
      } else if (v == *ig.sink) {
        node_map[static_cast<std::size_t>(v)] = be.head;
      } else {
        node_map[static_cast<std::size_t>(v)] =
            next_node + internal_index[static_cast<std::size_t>(v)];
      }
    }
    for (const auto& ie : ig.edges)
      out.graph.edges.push_back({next_edge + ie.id, node_map[static_cast<std::size_t>(ie.tail)],
                                 node_map[static_cast<std::size_t>(ie.head)]});
    next_edge += inner_edges;
    next_node += inner_internal;
  }
  out.graph.node_count = next_node;

  // Scenario (k, i, j) -> inner scenario i on the copy of pair(k).first,
  // inner scenario j on the copy of pair(k).second, zeros elsewhere.
  int inner_k = inner.scenarios.count();
  out.scenarios.rows.reserve(static_cast<std::size_t>(pairs.count()) *
                             static_cast<std::size_t>(inner_k) * static_cast<std::size_t>(inner_k));
  for (const auto& [a, b] : pairs.pairs) {
    int off_a = edge_offsets[static_cast<std::size_t>(a)];
    int off_b = edge_offsets[static_cast<std::size_t>(b)];
    for (int i = 0; i < inner_k; ++i) {
      const auto& row_i = inner.scenarios.rows[static_cast<std::size_t>(i)].entries;
      for (int j = 0; j < inner_k; ++j) {
        const auto& row_j = inner.scenarios.rows[static_cast<std::size_t>(j)].entries;
        ScenarioRow row;
        row.entries.reserve(row_i.size() + row_j.size());
        for (const auto& [e, c] : row_i) row.entries.emplace_back(e + off_a, c);
        for (const auto& [e, c] : row_j) row.entries.emplace_back(e + off_b, c);
        out.scenarios.rows.push_back(std::move(row));
      }
    }
  }

  if (!base.sp_tree || !inner.sp_tree) throw Error("amplification requires sp_trees");
  std::vector<char> expanded = charged;
  out.sp_tree = substitute_tree(*base.sp_tree, inner, edge_offsets, expanded, node_maps);
  return out;
}

}  // namespace

Amplified amplify(const RobustInstance& base, const PairIndex& pairs,
                  const AmplifyParams& params) {
  if (params.levels < 0) throw Error("levels must be nonnegative");
  if (params.levels > 0) {
    if (!base.sp_tree) throw Error("amplification requires the base sp_tree");
    check_pairs(base, pairs);
  }

  Amplified out;
  out.meta.levels = params.levels;
  out.meta.mode = params.mode;
  if (params.levels >= 62) throw Refusal("expected gap 2^(t+1) overflows 64 bits");
  out.meta.expected_gap = 1ull << (params.levels + 1);

  RobustInstance cur = base;
  std::uint64_t scenario_count = static_cast<std::uint64_t>(base.scenarios.count());
  for (int level = 1; level <= params.levels; ++level) {
    std::uint64_t next_scenarios =
        checked_mul(static_cast<std::uint64_t>(pairs.count()),
                    checked_mul(scenario_count, scenario_count, "scenario count"),
                    "scenario count");
    if (next_scenarios > params.max_scenarios)
      throw Refusal("level " + std::to_string(level) + " has " + std::to_string(next_scenarios) +
                    " scenarios, beyond materialization cap " +
                    std::to_string(params.max_scenarios) + "; use the implicit form");
    std::uint64_t next_nonzeros = 0;
    std::uint64_t max_row = 0;
    for (const auto& row : cur.scenarios.rows)
      max_row = std::max<std::uint64_t>(max_row, row.entries.size());
    next_nonzeros = checked_mul(next_scenarios, 2 * std::max<std::uint64_t>(max_row, 1),
                                "scenario nonzeros");
    if (next_nonzeros > params.max_nonzeros)
      throw Refusal("level " + std::to_string(level) + " needs up to " +
                    std::to_string(next_nonzeros) + " stored costs, beyond cap " +
                    std::to_string(params.max_nonzeros) + "; use the implicit form");
    cur = substitute(base, pairs, cur, params.mode);
    scenario_count = static_cast<std::uint64_t>(cur.scenarios.count());
  }

  out.meta.edge_count = static_cast<std::uint64_t>(cur.graph.edge_count());
  out.meta.scenario_count = scenario_count;
  for (const auto& row : cur.scenarios.rows)
    out.meta.max_row_nonzeros = std::max<std::uint64_t>(out.meta.max_row_nonzeros,
                                                        row.entries.size());
  out.instance = std::move(cur);
  return out;
}

// ------------------------------------------------------------------
// Implicit amplified instances
// ------------------------------------------------------------------

ImplicitInstance::ImplicitInstance(RobustInstance base, PairIndex pairs, int levels)
    : base_(std::move(base)), pairs_(std::move(pairs)), levels_(levels) {
  if (levels_ < 0) throw Error("levels must be nonnegative");
  check_pairs(base_, pairs_);
  edge_counts_.resize(static_cast<std::size_t>(levels_) + 1);
  scenario_counts_.resize(static_cast<std::size_t>(levels_) + 1);
  edge_counts_[0] = static_cast<std::uint64_t>(base_.graph.edge_count());
  scenario_counts_[0] = static_cast<std::uint64_t>(base_.scenarios.count());
  for (int r = 1; r <= levels_; ++r) {
    edge_counts_[static_cast<std::size_t>(r)] =
        checked_mul(edge_counts_[0], edge_counts_[static_cast<std::size_t>(r - 1)], "edge count");
    scenario_counts_[static_cast<std::size_t>(r)] =
        checked_mul(scenario_counts_[0],
                    checked_mul(scenario_counts_[static_cast<std::size_t>(r - 1)],
                                scenario_counts_[static_cast<std::size_t>(r - 1)], "scenario count"),
                    "scenario count");
  }
}

std::uint64_t ImplicitInstance::edge_count() const {
  return edge_counts_[static_cast<std::size_t>(levels_)];
}

std::uint64_t ImplicitInstance::scenario_count() const {
  return scenario_counts_[static_cast<std::size_t>(levels_)];
}

std::uint64_t ImplicitInstance::expected_gap() const {
  if (levels_ >= 62) throw Refusal("expected gap 2^(t+1) overflows 64 bits");
  return 1ull << (levels_ + 1);
}

Cost ImplicitInstance::cost(std::uint64_t edge, std::uint64_t scenario) const {
  if (edge >= edge_count()) throw Error("edge index out of range");
  if (scenario >= scenario_count()) throw Error("scenario index out of range");
  for (int r = levels_; r >= 1; --r) {
    std::uint64_t inner_edges = edge_counts_[static_cast<std::size_t>(r - 1)];
    std::uint64_t inner_scenarios = scenario_counts_[static_cast<std::size_t>(r - 1)];
    std::uint64_t base_edge = edge / inner_edges;
    std::uint64_t inner_edge = edge % inner_edges;
    std::uint64_t square = inner_scenarios * inner_scenarios;
    std::uint64_t k = scenario / square;
    std::uint64_t rem = scenario % square;
    const auto& [a, b] = pairs_.pairs[static_cast<std::size_t>(k)];
    if (base_edge == static_cast<std::uint64_t>(a)) {
      edge = inner_edge;
      scenario = rem / inner_scenarios;
    } else if (base_edge == static_cast<std::uint64_t>(b)) {
      edge = inner_edge;
      scenario = rem % inner_scenarios;
    } else {
      return 0;
    }
  }
  const auto& entries = base_.scenarios.rows[static_cast<std::size_t>(scenario)].entries;
  auto it = std::lower_bound(entries.begin(), entries.end(),
                             std::make_pair(static_cast<int>(edge), Cost{0}),
                             [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
  if (it != entries.end() && it->first == static_cast<int>(edge)) return it->second;
  return 0;
}

// ------------------------------------------------------------------
// Path <-> tree transform
// ------------------------------------------------------------------

int level0_path_clause_count(const RobustInstance& inst) {
  const Graph& g = inst.graph;
  if (g.node_count % 5 != 0 || g.node_count == 0)
    throw Error("instance not level-0 shaped: node count not 5m");
  int m = g.node_count / 5;
  if (g.edge_count() != 7 * m - 1)
    throw Error("instance not level-0 shaped: edge count not 7m-1");
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Edge& lit = g.edges[static_cast<std::size_t>(6 * i + j)];
      if (lit.tail != 5 * i || lit.head != 5 * i + 1 + j)
        throw Error("instance not level-0 shaped: literal arc " + std::to_string(lit.id));
      const Edge& dummy = g.edges[static_cast<std::size_t>(6 * i + 3 + j)];
      if (dummy.tail != 5 * i + 1 + j || dummy.head != 5 * i + 4)
        throw Error("instance not level-0 shaped: dummy arc " + std::to_string(dummy.id));
    }
  }
  for (int i = 0; i + 1 < m; ++i) {
    const Edge& conn = g.edges[static_cast<std::size_t>(6 * m + i)];
    if (conn.tail != 5 * i + 4 || conn.head != 5 * (i + 1))
      throw Error("instance not level-0 shaped: connector " + std::to_string(conn.id));
  }
  for (int s = 0; s < inst.scenarios.count(); ++s) {
    for (const auto& [e, c] : inst.scenarios.rows[static_cast<std::size_t>(s)].entries) {
      bool literal = e < 6 * m && e % 6 < 3;
      if (!literal || c != 1)
        throw Error("instance not level-0 shaped: scenario " + std::to_string(s) +
                    " charges non-literal arc or non-unit cost");
    }
  }
  return m;
}

namespace {

// Per-clause literal choice of a feasible level-0 path; throws otherwise.
std::vector<int> path_literal_choices(const Solution& path, int m) {
  std::vector<int> choice(static_cast<std::size_t>(m), -1);
  std::size_t expected = static_cast<std::size_t>(2 * m + (m - 1));
  if (path.edge_ids.size() != expected)
    throw Error("solution is not a feasible level-0 path (wrong size)");
  for (int e : path.edge_ids) {
    if (e >= 6 * m) continue;  // connector
    int clause = e / 6;
    int pos = e % 6;
    if (pos < 3) {
      if (choice[static_cast<std::size_t>(clause)] != -1)
        throw Error("solution uses two literal arcs in clause " + std::to_string(clause));
      choice[static_cast<std::size_t>(clause)] = pos;
    }
  }
  for (int i = 0; i < m; ++i) {
    int j = choice[static_cast<std::size_t>(i)];
    if (j == -1) throw Error("solution misses clause " + std::to_string(i));
    if (!path.contains(6 * i + 3 + j))
      throw Error("solution literal arc and dummy arc mismatch in clause " + std::to_string(i));
  }
  for (int i = 0; i + 1 < m; ++i)
    if (!path.contains(6 * m + i)) throw Error("solution misses connector " + std::to_string(i));
  return choice;
}

Solution assemble_level0_path(int m, const std::vector<int>& choices) {
  std::vector<int> edges;
  for (int i = 0; i < m; ++i) {
    edges.push_back(6 * i + choices[static_cast<std::size_t>(i)]);
    edges.push_back(6 * i + 3 + choices[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i + 1 < m; ++i) edges.push_back(6 * m + i);
  return make_solution(std::move(edges));
}

}  // namespace

TreeTransform path_to_tree(const RobustInstance& path_instance, const Solution& path) {
  if (path_instance.family != Family::path)
    throw Error("path_to_tree expects a path instance");
  if (!path_instance.graph.directed)
    throw Error("path_to_tree expects the directed level-0 instance");
  int m = level0_path_clause_count(path_instance);
  auto choices = path_literal_choices(path, m);

  TreeTransform out;
  out.instance = path_instance;
  out.instance.family = Family::tree;
  out.instance.graph.directed = false;
  out.instance.graph.source.reset();
  out.instance.graph.sink.reset();
  out.instance.sp_tree.reset();

  std::vector<int> edges;
  for (int i = 0; i < m; ++i) {
    edges.push_back(6 * i + choices[static_cast<std::size_t>(i)]);
    for (int j = 0; j < 3; ++j) edges.push_back(6 * i + 3 + j);
  }
  for (int i = 0; i + 1 < m; ++i) edges.push_back(6 * m + i);
  out.solution = make_solution(std::move(edges));
  return out;
}

TreeTransform tree_to_path(const RobustInstance& tree_instance, const Solution& tree) {
  if (tree_instance.family != Family::tree)
    throw Error("tree_to_path expects a tree instance");
  int m = level0_path_clause_count(tree_instance);
  if (tree.size() != 5 * m - 1)
    throw Error("solution is not a spanning tree of the level-0 graph");
  std::vector<int> choices(static_cast<std::size_t>(m), -1);
  for (int e : tree.edge_ids) {
    if (e >= 6 * m) continue;
    int clause = e / 6;
    int pos = e % 6;
    if (pos < 3) {
      if (choices[static_cast<std::size_t>(clause)] != -1)
        throw Error("tree uses two literal edges in clause " + std::to_string(clause) +
                    "; not in the transform image");
      choices[static_cast<std::size_t>(clause)] = pos;
    }
  }
  for (int i = 0; i < m; ++i)
    if (choices[static_cast<std::size_t>(i)] == -1)
      throw Error("tree misses a literal edge in clause " + std::to_string(i));

  TreeTransform out;
  out.instance = tree_instance;
  out.instance.family = Family::path;
  out.instance.graph.directed = true;
  out.instance.graph.source = 0;
  out.instance.graph.sink = 5 * m - 1;
  out.instance.sp_tree = level0_path_sptree(m);
  out.solution = assemble_level0_path(m, choices);
  return out;
}

// ------------------------------------------------------------------
// Witnesses
// ------------------------------------------------------------------

namespace {

std::vector<int> true_literal_choices(const CnfFormula& cnf, const std::vector<bool>& assignment) {
  if (static_cast<int>(assignment.size()) != cnf.variable_count)
    throw Error("assignment length does not match variable count");
  std::vector<int> choices;
  choices.reserve(cnf.clauses.size());
  for (std::size_t i = 0; i < cnf.clauses.size(); ++i) {
    int chosen = -1;
    for (int j = 0; j < 3; ++j) {
      int lit = cnf.clauses[i][static_cast<std::size_t>(j)];
      int var = lit > 0 ? lit : -lit;
      bool value = assignment[static_cast<std::size_t>(var - 1)];
      if ((lit > 0) == value) {
        chosen = j;
        break;
      }
    }
    if (chosen == -1)
      throw Error("assignment does not satisfy clause " + std::to_string(i));
    choices.push_back(chosen);
  }
  return choices;
}

}  // namespace

Solution witness_path(const CnfFormula& cnf, const std::vector<bool>& assignment) {
  require_valid_cnf(cnf);
  auto choices = true_literal_choices(cnf, assignment);
  return assemble_level0_path(cnf.clause_count(), choices);
}

Solution witness_cut(const CnfFormula& cnf, const std::vector<bool>& assignment) {
  require_valid_cnf(cnf);
  auto choices = true_literal_choices(cnf, assignment);
  std::vector<int> edges;
  for (int i = 0; i < cnf.clause_count(); ++i)
    edges.push_back(3 * i + choices[static_cast<std::size_t>(i)]);
  return make_solution(std::move(edges));
}

Solution witness_amplified(const CnfFormula& cnf, const std::vector<bool>& assignment,
                           Family family, int levels) {
  if (family != Family::path && family != Family::cut)
    throw Error("witness_amplified supports families path and cut only");
  Solution base = family == Family::path ? witness_path(cnf, assignment)
                                         : witness_cut(cnf, assignment);
  int m = cnf.clause_count();
  std::uint64_t base_edges = family == Family::path
                                 ? static_cast<std::uint64_t>(7 * m - 1)
                                 : static_cast<std::uint64_t>(3 * m);
  std::vector<int> current = base.edge_ids;
  std::uint64_t inner_count = base_edges;
  for (int r = 1; r <= levels; ++r) {
    std::uint64_t total = checked_mul(base_edges, inner_count, "edge count");
    if (total > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
      throw Refusal("witness at level " + std::to_string(r) + " has too many edges to list");
    std::vector<int> next;
    next.reserve(base.edge_ids.size() * current.size());
    for (int e : base.edge_ids)
      for (int f : current)
        next.push_back(static_cast<int>(static_cast<std::uint64_t>(e) * inner_count +
                                        static_cast<std::uint64_t>(f)));
    current = std::move(next);
    inner_count = total;
  }
  return make_solution(std::move(current));
}

std::vector<std::optional<bool>> decode_assignment(const CnfFormula& cnf, const Solution& path) {
  require_valid_cnf(cnf);
  int m = cnf.clause_count();
  std::vector<std::optional<bool>> assignment(static_cast<std::size_t>(cnf.variable_count));
  for (int e : path.edge_ids) {
    if (e >= 6 * m || e % 6 >= 3) continue;
    int lit = cnf.clauses[static_cast<std::size_t>(e / 6)][static_cast<std::size_t>(e % 6)];
    int var = lit > 0 ? lit : -lit;
    bool value = lit > 0;
    auto& slot = assignment[static_cast<std::size_t>(var - 1)];
    if (slot && *slot != value)
      throw Error("path uses contradictory literals for variable " + std::to_string(var));
    slot = value;
  }
  return assignment;
}

}  // namespace robustnet
