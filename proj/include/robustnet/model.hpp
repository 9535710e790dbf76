#pragma once

// Core data model for discrete-scenario robust network optimization:
// graphs, explicit scenario sets, instances, solutions, evaluation, and
// the text formats used by the tools.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace robustnet {

using Cost = std::int64_t;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (instance files, DIMACS, solution files).
class ParseError : public Error {
public:
  using Error::Error;
};

/// A size or budget cap was hit; the operation refuses rather than
/// silently truncating or approximating.
class Refusal : public Error {
public:
  using Error::Error;
};

enum class Family { path, tree, cut, assignment };

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

/// Path and cut instances carry designated source/sink nodes.
bool family_needs_terminals(Family f);

struct Edge {
  int id = 0;
  int tail = 0;
  int head = 0;

  bool operator==(const Edge&) const = default;
};

struct Graph {
  bool directed = false;
  int node_count = 0;
  std::vector<Edge> edges;
  std::optional<int> source;
  std::optional<int> sink;

  int edge_count() const { return static_cast<int>(edges.size()); }
  bool operator==(const Graph&) const = default;
};

/// One scenario's nonzero edge costs, sorted by edge id. Zero costs are
/// implicit: an edge absent from the row costs 0 under the scenario.
struct ScenarioRow {
  std::vector<std::pair<int, Cost>> entries;

  bool operator==(const ScenarioRow&) const = default;
};

struct ScenarioSet {
  std::vector<ScenarioRow> rows;

  int count() const { return static_cast<int>(rows.size()); }
  bool operator==(const ScenarioSet&) const = default;
};

/// Series-parallel decomposition of the edge set between source and sink.
/// Terminals are resolved against the graph (see resolve_sp_terminals).
struct SPTree {
  enum class Kind { leaf, series, parallel };

  Kind kind = Kind::leaf;
  int edge_id = -1;              // leaf only
  std::vector<SPTree> children;  // series/parallel only
  int left_terminal = -1;
  int right_terminal = -1;

  static SPTree leaf(int edge_id);
  static SPTree series(std::vector<SPTree> children);
  static SPTree parallel(std::vector<SPTree> children);

  int leaf_count() const;
  void collect_leaf_edges(std::vector<int>& out) const;

  bool operator==(const SPTree&) const = default;
};

/// A claimed-feasible edge set; ids are kept sorted and unique.
struct Solution {
  std::vector<int> edge_ids;

  bool contains(int edge_id) const;
  int size() const { return static_cast<int>(edge_ids.size()); }
  bool operator==(const Solution&) const = default;
};

Solution make_solution(std::vector<int> edge_ids);

struct RobustInstance {
  Family family = Family::path;
  Graph graph;
  ScenarioSet scenarios;
  std::optional<SPTree> sp_tree;

  bool operator==(const RobustInstance&) const = default;
};

struct EvalReport {
  std::vector<Cost> per_scenario_costs;
  Cost minmax_value = 0;
  std::optional<Cost> regret_value;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// A 3-SAT formula. A literal is a signed 1-based variable index; every
/// clause has exactly three pairwise distinct literals (x and ~x count as
/// distinct).
struct CnfFormula {
  int variable_count = 0;
  std::vector<std::array<int, 3>> clauses;

  int clause_count() const { return static_cast<int>(clauses.size()); }
  bool operator==(const CnfFormula&) const = default;
};

bool clause_satisfied(const std::array<int, 3>& clause, const std::vector<bool>& assignment);
bool satisfies(const CnfFormula& cnf, const std::vector<bool>& assignment);

// ---------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------

/// Reports every violated invariant; an empty report means valid.
ValidationReport validate_instance(const RobustInstance& inst);

/// F(X,S): sum of scenario `s` costs over the edges of `x`.
Cost cost(const RobustInstance& inst, const Solution& x, int scenario);

/// max_s F(X,S_s).
Cost minmax_value(const RobustInstance& inst, const Solution& x);

/// max_s (F(X,S_s) - fstar[s]); fstar must have one entry per scenario.
Cost regret_value(const RobustInstance& inst, const Solution& x, const std::vector<Cost>& fstar);

/// Per-scenario costs plus the minmax value; regret filled when fstar given.
EvalReport evaluate(const RobustInstance& inst, const Solution& x, const std::vector<Cost>* fstar = nullptr);

// ---------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------

/// Parses the ROBUSTNET 1 instance format ('#' starts a line comment).
/// Rejects malformed headers, wrong counts, and negative costs; zero-cost
/// scenario entries are dropped (canonical form keeps nonzeros only).
RobustInstance parse_instance(const std::string& text);

/// Canonical serialization; parse(serialize(x)) == x.
std::string serialize_instance(const RobustInstance& inst);

struct SolutionFile {
  Cost value = 0;
  Solution solution;
};

SolutionFile parse_solution(const std::string& text);
std::string serialize_solution(Cost value, const Solution& s);

/// Standard DIMACS CNF; every clause must have exactly 3 distinct literals.
CnfFormula parse_dimacs(const std::string& text);

/// Parses the parenthesized sptree expression, e.g. (S (P (L 0) (L 1)) (L 2)).
SPTree parse_sp_expression(const std::string& text);
std::string serialize_sp_expression(const SPTree& tree);

/// Infers and stores terminal nodes for every decomposition node, checking
/// that leaves chain/stack consistently and the root spans source -> sink.
/// Throws Error when the tree does not fit the graph.
void resolve_sp_terminals(const Graph& graph, SPTree& tree);

}  // namespace robustnet
