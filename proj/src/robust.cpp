#include "robustnet/robust.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include "robustnet/detsolve.hpp"

namespace robustnet {

const char* objective_name(Objective o) {
  return o == Objective::minmax ? "minmax" : "regret";
}

std::optional<Objective> objective_from_name(const std::string& name) {
  if (name == "minmax") return Objective::minmax;
  if (name == "regret") return Objective::regret;
  return std::nullopt;
}

const char* method_name(SolverResult::Method m) {
  switch (m) {
    case SolverResult::Method::brute: return "brute";
    case SolverResult::Method::pareto_dp: return "pareto_dp";
    case SolverResult::Method::heuristic: return "heuristic";
  }
  return "?";
}

namespace {

// Per-edge scenario columns: edge id -> sorted (scenario, cost) entries.
std::vector<std::vector<std::pair<int, Cost>>> edge_columns(const RobustInstance& inst) {
  std::vector<std::vector<std::pair<int, Cost>>> col(
      static_cast<std::size_t>(inst.graph.edge_count()));
  for (int s = 0; s < inst.scenarios.count(); ++s)
    for (const auto& [edge_id, c] : inst.scenarios.rows[static_cast<std::size_t>(s)].entries)
      col[static_cast<std::size_t>(edge_id)].emplace_back(s, c);
  return col;
}

struct Arc {
  int to;
  int edge_id;
};

std::vector<std::vector<Arc>> adjacency(const Graph& g) {
  std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(g.node_count));
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.tail)].push_back({e.head, e.id});
    if (!g.directed) adj[static_cast<std::size_t>(e.head)].push_back({e.tail, e.id});
  }
  for (auto& list : adj)
    std::sort(list.begin(), list.end(),
              [](const Arc& a, const Arc& b) { return a.edge_id < b.edge_id; });
  return adj;
}

// ------------------------------------------------------------------
// Feasible-set enumeration
// ------------------------------------------------------------------

struct PathEnumerator {
  const Graph& g;
  std::vector<std::vector<Arc>> adj;
  std::uint64_t limit;
  std::uint64_t emitted = 0;
  std::vector<char> visited;
  std::vector<int> stack_edges;
  const std::function<void(const Solution&)>& emit;

  PathEnumerator(const Graph& graph, std::uint64_t lim,
                 const std::function<void(const Solution&)>& out)
      : g(graph), adj(adjacency(graph)), limit(lim),
        visited(static_cast<std::size_t>(graph.node_count), 0), emit(out) {}

  void run() {
    if (!g.source || !g.sink) throw Error("path family requires source and sink");
    visited[static_cast<std::size_t>(*g.source)] = 1;
    dfs(*g.source);
  }

  void dfs(int u) {
    if (u == *g.sink) {
      if (++emitted > limit)
        throw Refusal("path enumeration exceeds limit of " + std::to_string(limit));
      emit(make_solution(stack_edges));
      return;
    }
    for (const Arc& a : adj[static_cast<std::size_t>(u)]) {
      if (visited[static_cast<std::size_t>(a.to)]) continue;
      visited[static_cast<std::size_t>(a.to)] = 1;
      stack_edges.push_back(a.edge_id);
      dfs(a.to);
      stack_edges.pop_back();
      visited[static_cast<std::size_t>(a.to)] = 0;
    }
  }
};

void bfs_region(const std::vector<std::vector<Arc>>& adj, const std::vector<char>& blocked_edge,
                int start, std::vector<char>& out) {
  std::fill(out.begin(), out.end(), 0);
  out[static_cast<std::size_t>(start)] = 1;
  std::queue<int> queue;
  queue.push(start);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    for (const Arc& a : adj[static_cast<std::size_t>(u)]) {
      if (blocked_edge[static_cast<std::size_t>(a.edge_id)]) continue;
      if (!out[static_cast<std::size_t>(a.to)]) {
        out[static_cast<std::size_t>(a.to)] = 1;
        queue.push(a.to);
      }
    }
  }
}

void enumerate_minimal_cuts(const RobustInstance& inst,
                            const std::function<void(const Solution&)>& emit,
                            std::uint64_t limit) {
  const Graph& g = inst.graph;
  if (!g.source || !g.sink) throw Error("cut family requires source and sink");
  std::vector<int> free_nodes;
  for (int v = 0; v < g.node_count; ++v)
    if (v != *g.source && v != *g.sink) free_nodes.push_back(v);
  if (free_nodes.size() >= 63 || (1ull << free_nodes.size()) > limit)
    throw Refusal("cut enumeration candidate space 2^" + std::to_string(free_nodes.size()) +
                  " exceeds limit of " + std::to_string(limit));

  auto fwd = adjacency(g);
  Graph reversed = g;
  for (auto& e : reversed.edges) std::swap(e.tail, e.head);
  auto bwd = adjacency(reversed);

  std::vector<char> blocked(static_cast<std::size_t>(g.edge_count()), 0);
  std::vector<char> region_s(static_cast<std::size_t>(g.node_count), 0);
  std::vector<char> region_t(static_cast<std::size_t>(g.node_count), 0);
  std::set<std::vector<int>> seen;

  std::vector<char> side(static_cast<std::size_t>(g.node_count), 0);
  for (std::uint64_t mask = 0; mask < (1ull << free_nodes.size()); ++mask) {
    std::fill(side.begin(), side.end(), 0);
    side[static_cast<std::size_t>(*g.source)] = 1;
    for (std::size_t i = 0; i < free_nodes.size(); ++i)
      if (mask & (1ull << i)) side[static_cast<std::size_t>(free_nodes[i])] = 1;

    std::vector<int> crossing;
    for (const auto& e : g.edges) {
      bool st = side[static_cast<std::size_t>(e.tail)];
      bool sh = side[static_cast<std::size_t>(e.head)];
      bool crosses = g.directed ? (st && !sh) : (st != sh);
      if (crosses) crossing.push_back(e.id);
    }
    if (seen.count(crossing)) continue;

    std::fill(blocked.begin(), blocked.end(), 0);
    for (int id : crossing) blocked[static_cast<std::size_t>(id)] = 1;
    bfs_region(fwd, blocked, *g.source, region_s);
    if (region_s[static_cast<std::size_t>(*g.sink)]) continue;  // not a cut (directed corner cases)
    bfs_region(bwd, blocked, *g.sink, region_t);

    bool minimal = true;
    for (int id : crossing) {
      const Edge& e = g.edges[static_cast<std::size_t>(id)];
      bool needed;
      if (g.directed) {
        needed = region_s[static_cast<std::size_t>(e.tail)] && region_t[static_cast<std::size_t>(e.head)];
      } else {
        needed = (region_s[static_cast<std::size_t>(e.tail)] && region_t[static_cast<std::size_t>(e.head)]) ||
                 (region_s[static_cast<std::size_t>(e.head)] && region_t[static_cast<std::size_t>(e.tail)]);
      }
      if (!needed) {
        minimal = false;
        break;
      }
    }
    if (!minimal) continue;
    if (seen.size() + 1 > limit)
      throw Refusal("cut enumeration exceeds limit of " + std::to_string(limit));
    seen.insert(crossing);
  }
  for (const auto& cut : seen) emit(Solution{cut});
}

struct TreeEnumerator {
  const Graph& g;
  std::uint64_t limit;
  std::uint64_t emitted = 0;
  std::vector<int> parent;
  std::vector<int> size;
  std::vector<int> chosen;
  const std::function<void(const Solution&)>& emit;

  TreeEnumerator(const Graph& graph, std::uint64_t lim,
                 const std::function<void(const Solution&)>& out)
      : g(graph), limit(lim), parent(static_cast<std::size_t>(graph.node_count)),
        size(static_cast<std::size_t>(graph.node_count), 1), emit(out) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) const {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  }

  void run() { rec(0); }

  void rec(std::size_t idx) {
    if (static_cast<int>(chosen.size()) == g.node_count - 1) {
      if (++emitted > limit)
        throw Refusal("spanning tree enumeration exceeds limit of " + std::to_string(limit));
      emit(Solution{chosen});  // chosen is ascending by construction
      return;
    }
    if (idx >= g.edges.size()) return;
    if (g.edges.size() - idx <
        static_cast<std::size_t>(g.node_count - 1) - chosen.size())
      return;
    const Edge& e = g.edges[idx];
    int ra = find(e.tail), rb = find(e.head);
    if (ra != rb) {
      if (size[static_cast<std::size_t>(ra)] < size[static_cast<std::size_t>(rb)]) std::swap(ra, rb);
      parent[static_cast<std::size_t>(rb)] = ra;
      size[static_cast<std::size_t>(ra)] += size[static_cast<std::size_t>(rb)];
      chosen.push_back(e.id);
      rec(idx + 1);
      chosen.pop_back();
      size[static_cast<std::size_t>(ra)] -= size[static_cast<std::size_t>(rb)];
      parent[static_cast<std::size_t>(rb)] = rb;
    }
    rec(idx + 1);
  }
};

struct AssignmentEnumerator {
  const Graph& g;
  std::uint64_t limit;
  std::uint64_t emitted = 0;
  std::vector<int> left;
  std::vector<std::vector<std::pair<int, int>>> incident;  // left index -> (right node, edge id)
  std::vector<char> used_right;
  std::vector<int> chosen;
  const std::function<void(const Solution&)>& emit;

  AssignmentEnumerator(const RobustInstance& inst, std::uint64_t lim,
                       const std::function<void(const Solution&)>& out)
      : g(inst.graph), limit(lim), used_right(static_cast<std::size_t>(g.node_count), 0),
        emit(out) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.node_count));
    for (const auto& e : g.edges) {
      adj[static_cast<std::size_t>(e.tail)].push_back(e.head);
      adj[static_cast<std::size_t>(e.head)].push_back(e.tail);
    }
    std::vector<int> color(static_cast<std::size_t>(g.node_count), -1);
    for (int start = 0; start < g.node_count; ++start) {
      if (color[static_cast<std::size_t>(start)] != -1) continue;
      color[static_cast<std::size_t>(start)] = 0;
      std::vector<int> stack{start};
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<std::size_t>(u)]) {
          if (color[static_cast<std::size_t>(v)] == -1) {
            color[static_cast<std::size_t>(v)] = 1 - color[static_cast<std::size_t>(u)];
            stack.push_back(v);
          } else if (color[static_cast<std::size_t>(v)] == color[static_cast<std::size_t>(u)]) {
            throw Error("graph not bipartite");
          }
        }
      }
    }
    for (int v = 0; v < g.node_count; ++v)
      if (color[static_cast<std::size_t>(v)] == 0) left.push_back(v);
    if (left.size() > 9)
      throw Refusal("assignment enumeration requires side <= 9, got " +
                    std::to_string(left.size()));
    incident.resize(left.size());
    std::vector<int> lindex(static_cast<std::size_t>(g.node_count), -1);
    for (std::size_t i = 0; i < left.size(); ++i)
      lindex[static_cast<std::size_t>(left[i])] = static_cast<int>(i);
    for (const auto& e : g.edges) {
      int li = lindex[static_cast<std::size_t>(e.tail)];
      int r = e.head;
      if (li == -1) {
        li = lindex[static_cast<std::size_t>(e.head)];
        r = e.tail;
      }
      if (li != -1) incident[static_cast<std::size_t>(li)].emplace_back(r, e.id);
    }
    for (auto& list : incident)
      std::sort(list.begin(), list.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
  }

  void run() {
    if (2 * left.size() != static_cast<std::size_t>(g.node_count))
      throw Error("bipartite sides unequal");
    rec(0);
  }

  void rec(std::size_t i) {
    if (i == left.size()) {
      if (++emitted > limit)
        throw Refusal("assignment enumeration exceeds limit of " + std::to_string(limit));
      emit(make_solution(chosen));
      return;
    }
    for (const auto& [r, edge_id] : incident[i]) {
      if (used_right[static_cast<std::size_t>(r)]) continue;
      used_right[static_cast<std::size_t>(r)] = 1;
      chosen.push_back(edge_id);
      rec(i + 1);
      chosen.pop_back();
      used_right[static_cast<std::size_t>(r)] = 0;
    }
  }
};

}  // namespace

void enumerate_feasible(const RobustInstance& inst,
                        const std::function<void(const Solution&)>& emit,
                        const EnumerateOptions& options) {
  switch (inst.family) {
    case Family::path: {
      PathEnumerator e(inst.graph, options.limit, emit);
      e.run();
      return;
    }
    case Family::cut:
      enumerate_minimal_cuts(inst, emit, options.limit);
      return;
    case Family::tree: {
      TreeEnumerator e(inst.graph, options.limit, emit);
      e.run();
      return;
    }
    case Family::assignment: {
      AssignmentEnumerator e(inst, options.limit, emit);
      e.run();
      return;
    }
  }
  throw Error("unknown family");
}

std::vector<Solution> enumerate_feasible(const RobustInstance& inst,
                                         const EnumerateOptions& options) {
  std::vector<Solution> out;
  enumerate_feasible(inst, [&](const Solution& s) { out.push_back(s); }, options);
  return out;
}

// ------------------------------------------------------------------
// Brute-force exact solvers
// ------------------------------------------------------------------

namespace {

Cost objective_of(const std::vector<Cost>& acc, Objective objective,
                  const std::vector<Cost>* fstar) {
  Cost worst = std::numeric_limits<Cost>::min();
  for (std::size_t s = 0; s < acc.size(); ++s) {
    Cost v = acc[s];
    if (objective == Objective::regret) v -= (*fstar)[s];
    worst = std::max(worst, v);
  }
  return worst;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Branch-and-prune spanning tree search: edges in id order, include
// branch first, partial objective pruning against the incumbent. Seeded
// with the summed-cost greedy tree.
struct TreeSearch {
  const RobustInstance& inst;
  Objective objective;
  const std::vector<Cost>* fstar;
  std::vector<std::vector<std::pair<int, Cost>>> columns;
  std::vector<Cost> acc;
  std::vector<int> parent, size, chosen;
  Cost best_value;
  std::vector<int> best_edges;
  std::uint64_t nodes = 0;
  std::uint64_t node_budget;

  TreeSearch(const RobustInstance& instance, Objective obj, const std::vector<Cost>* fs,
             std::uint64_t budget)
      : inst(instance), objective(obj), fstar(fs), columns(edge_columns(instance)),
        acc(static_cast<std::size_t>(instance.scenarios.count()), 0),
        parent(static_cast<std::size_t>(instance.graph.node_count)),
        size(static_cast<std::size_t>(instance.graph.node_count), 1), node_budget(budget) {
    std::iota(parent.begin(), parent.end(), 0);
    DetResult seed = det_solve(Family::tree, inst.graph, summed_costs(inst));
    best_edges = seed.solution.edge_ids;
    best_value = objective == Objective::minmax
                     ? minmax_value(inst, seed.solution)
                     : regret_value(inst, seed.solution, *fstar);
  }

  int find(int x) const {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  }

  Cost partial() const { return objective_of(acc, objective, fstar); }

  void run() { rec(0); }

  void rec(std::size_t idx) {
    if (++nodes > node_budget)
      throw Refusal("spanning tree search exceeds node budget of " + std::to_string(node_budget));
    if (partial() >= best_value) return;
    if (static_cast<int>(chosen.size()) == inst.graph.node_count - 1) {
      best_value = partial();
      best_edges = chosen;
      return;
    }
    if (idx >= inst.graph.edges.size()) return;
    if (inst.graph.edges.size() - idx <
        static_cast<std::size_t>(inst.graph.node_count - 1) - chosen.size())
      return;
    const Edge& e = inst.graph.edges[idx];
    int ra = find(e.tail), rb = find(e.head);
    if (ra != rb) {
      if (size[static_cast<std::size_t>(ra)] < size[static_cast<std::size_t>(rb)]) std::swap(ra, rb);
      parent[static_cast<std::size_t>(rb)] = ra;
      size[static_cast<std::size_t>(ra)] += size[static_cast<std::size_t>(rb)];
      chosen.push_back(e.id);
      for (const auto& [s, c] : columns[idx]) acc[static_cast<std::size_t>(s)] += c;
      rec(idx + 1);
      for (const auto& [s, c] : columns[idx]) acc[static_cast<std::size_t>(s)] -= c;
      chosen.pop_back();
      size[static_cast<std::size_t>(ra)] -= size[static_cast<std::size_t>(rb)];
      parent[static_cast<std::size_t>(rb)] = rb;
    }
    rec(idx + 1);
  }
};

SolverResult solve_brute(const RobustInstance& inst, Objective objective,
                         const std::vector<Cost>* fstar, const EnumerateOptions& options) {
  if (inst.family == Family::tree) {
    TreeSearch search(inst, objective, fstar, 200'000'000ull);
    search.run();
    SolverResult result;
    result.solution = Solution{search.best_edges};
    result.objective = objective;
    result.method = SolverResult::Method::brute;
    result.value = objective == Objective::minmax
                       ? minmax_value(inst, result.solution)
                       : regret_value(inst, result.solution, *fstar);
    return result;
  }

  auto columns = edge_columns(inst);
  std::vector<Cost> acc(static_cast<std::size_t>(inst.scenarios.count()));
  bool found = false;
  Cost best_value = 0;
  Solution best;
  enumerate_feasible(
      inst,
      [&](const Solution& x) {
        std::fill(acc.begin(), acc.end(), 0);
        for (int e : x.edge_ids)
          for (const auto& [s, c] : columns[static_cast<std::size_t>(e)])
            acc[static_cast<std::size_t>(s)] += c;
        Cost v = objective_of(acc, objective, fstar);
        if (!found || v < best_value ||
            (v == best_value && lex_less(x.edge_ids, best.edge_ids))) {
          found = true;
          best_value = v;
          best = x;
        }
      },
      options);
  if (!found) throw Error("no feasible solution exists");
  return {best, best_value, objective, SolverResult::Method::brute};
}

// ------------------------------------------------------------------
// Pareto-label dynamic programming
// ------------------------------------------------------------------

struct DpLabel {
  std::vector<Cost> costs;      // dense per-scenario vector
  std::vector<int> leaves;      // sorted positions in subtree leaf order
};

struct DpNodeResult {
  std::vector<DpLabel> labels;
  int leaf_count = 0;
};

struct DpContext {
  const RobustInstance& inst;
  const DpOptions& options;
  DpStats stats;
  std::vector<std::vector<std::pair<int, Cost>>> columns;
  std::unordered_map<std::string, std::shared_ptr<const DpNodeResult>> memo;
  bool cross_on_series;  // path: series multiplies; cut: parallel multiplies
  Objective objective = Objective::minmax;
  const std::vector<Cost>* fstar = nullptr;
  std::optional<Cost> upper_bound;  // any feasible solution's value; labels above it die

  DpContext(const RobustInstance& instance, const DpOptions& opts)
      : inst(instance), options(opts), columns(edge_columns(instance)),
        cross_on_series(instance.family == Family::path) {}

  bool over_bound(const std::vector<Cost>& costs) const {
    if (!upper_bound) return false;
    Cost worst = std::numeric_limits<Cost>::min();
    for (std::size_t s = 0; s < costs.size(); ++s) {
      Cost v = costs[s];
      if (objective == Objective::regret) v -= (*fstar)[s];
      worst = std::max(worst, v);
    }
    return worst > *upper_bound;
  }
};

bool dominates(const std::vector<Cost>& a, const std::vector<Cost>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

void prune_labels(std::vector<DpLabel>& labels) {
  std::sort(labels.begin(), labels.end(), [](const DpLabel& a, const DpLabel& b) {
    Cost sa = std::accumulate(a.costs.begin(), a.costs.end(), Cost{0});
    Cost sb = std::accumulate(b.costs.begin(), b.costs.end(), Cost{0});
    if (sa != sb) return sa < sb;
    if (a.costs != b.costs) return a.costs < b.costs;
    return a.leaves < b.leaves;
  });
  std::vector<DpLabel> kept;
  kept.reserve(labels.size());
  for (auto& label : labels) {
    bool dominated = false;
    for (const auto& k : kept) {
      if (dominates(k.costs, label.costs)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(label));
  }
  labels = std::move(kept);
}

void enforce_cap(const std::vector<DpLabel>& labels, const DpOptions& options) {
  if (labels.size() > options.label_cap)
    throw Refusal("label set of size " + std::to_string(labels.size()) +
                  " exceeds cap of " + std::to_string(options.label_cap));
}

// Returns the structural key (shape + per-leaf scenario columns) and the
// label set computed for the subtree, with leaf references positional.
std::pair<std::string, std::shared_ptr<const DpNodeResult>> dp_eval(DpContext& ctx,
                                                                    const SPTree& node) {
  ++ctx.stats.nodes_evaluated;
  std::string key;
  std::shared_ptr<const DpNodeResult> result;

  if (node.kind == SPTree::Kind::leaf) {
    key = "L";
    for (const auto& [s, c] : ctx.columns[static_cast<std::size_t>(node.edge_id)])
      key += std::to_string(s) + ":" + std::to_string(c) + ",";
    auto it = ctx.memo.find(key);
    if (it != ctx.memo.end()) {
      ++ctx.stats.memo_hits;
      return {key, it->second};
    }
    DpNodeResult r;
    r.leaf_count = 1;
    DpLabel label;
    label.costs.assign(static_cast<std::size_t>(ctx.inst.scenarios.count()), 0);
    for (const auto& [s, c] : ctx.columns[static_cast<std::size_t>(node.edge_id)])
      label.costs[static_cast<std::size_t>(s)] = c;
    label.leaves = {0};
    if (!(ctx.options.prune && ctx.over_bound(label.costs))) r.labels.push_back(std::move(label));
    result = std::make_shared<DpNodeResult>(std::move(r));
    ctx.memo.emplace(key, result);
    return {key, result};
  }

  std::vector<std::pair<std::string, std::shared_ptr<const DpNodeResult>>> children;
  children.reserve(node.children.size());
  for (const auto& c : node.children) children.push_back(dp_eval(ctx, c));

  key = node.kind == SPTree::Kind::series ? "S(" : "P(";
  for (const auto& [ck, _] : children) key += ck + ";";
  key += ")";
  auto it = ctx.memo.find(key);
  if (it != ctx.memo.end()) {
    ++ctx.stats.memo_hits;
    return {key, it->second};
  }

  bool cross = (node.kind == SPTree::Kind::series) == ctx.cross_on_series;
  DpNodeResult r;
  if (cross) {
    // Combination: one label per child, vectors added, leaf positions offset.
    std::vector<DpLabel> acc = children.front().second->labels;
    int offset = children.front().second->leaf_count;
    for (std::size_t i = 1; i < children.size(); ++i) {
      const auto& next = *children[i].second;
      std::vector<DpLabel> merged;
      merged.reserve(acc.size() * next.labels.size());
      for (const auto& a : acc) {
        for (const auto& b : next.labels) {
          DpLabel m;
          m.costs.resize(a.costs.size());
          for (std::size_t s = 0; s < a.costs.size(); ++s) m.costs[s] = a.costs[s] + b.costs[s];
          if (ctx.options.prune && ctx.over_bound(m.costs)) continue;
          m.leaves = a.leaves;
          for (int leaf : b.leaves) m.leaves.push_back(leaf + offset);
          merged.push_back(std::move(m));
          if (merged.size() > ctx.options.label_cap * 4 && ctx.options.prune) {
            prune_labels(merged);
            enforce_cap(merged, ctx.options);
          }
        }
      }
      if (ctx.options.prune) prune_labels(merged);
      enforce_cap(merged, ctx.options);
      acc = std::move(merged);
      offset += next.leaf_count;
    }
    r.labels = std::move(acc);
    r.leaf_count = offset;
  } else {
    // Alternative: any child's label, leaf positions offset per child.
    int offset = 0;
    for (const auto& [_, childr] : children) {
      for (const auto& label : childr->labels) {
        if (ctx.options.prune && ctx.over_bound(label.costs)) continue;
        DpLabel m = label;
        for (int& leaf : m.leaves) leaf += offset;
        r.labels.push_back(std::move(m));
      }
      offset += childr->leaf_count;
    }
    if (ctx.options.prune) prune_labels(r.labels);
    enforce_cap(r.labels, ctx.options);
    r.leaf_count = offset;
  }
  ctx.stats.peak_labels = std::max(ctx.stats.peak_labels, r.labels.size());
  result = std::make_shared<DpNodeResult>(std::move(r));
  ctx.memo.emplace(key, result);
  return {key, result};
}

}  // namespace

SolverResult pareto_dp(const RobustInstance& inst, Objective objective,
                       const std::vector<Cost>* fstar, const DpOptions& options,
                       DpStats* stats) {
  if (inst.family != Family::path && inst.family != Family::cut)
    throw Error("pareto_dp supports families path and cut only");
  if (!inst.sp_tree) throw Error("pareto_dp requires an sp_tree");
  std::vector<Cost> computed_fstar;
  if (objective == Objective::regret && !fstar) {
    computed_fstar = per_scenario_optima(inst);
    fstar = &computed_fstar;
  }
  if (objective == Objective::regret &&
      static_cast<int>(fstar->size()) != inst.scenarios.count())
    throw Error("fstar length mismatch");

  DpContext ctx(inst, options);
  ctx.objective = objective;
  ctx.fstar = fstar;
  if (options.prune) {
    // Any feasible solution bounds the optimum; the mean-scenario solution
    // is cheap and usually tight on the generated instances.
    try {
      DetResult det = det_solve(inst.family, inst.graph, summed_costs(inst));
      ctx.upper_bound = objective == Objective::minmax
                            ? minmax_value(inst, det.solution)
                            : regret_value(inst, det.solution, *fstar);
    } catch (const Error&) {
      ctx.upper_bound.reset();
    }
  }
  auto [key, root] = dp_eval(ctx, *inst.sp_tree);
  (void)key;
  ctx.stats.root_labels = root->labels.size();
  if (stats) *stats = ctx.stats;
  if (root->labels.empty()) throw Error("no feasible solution exists");

  std::vector<int> leaf_edges;
  inst.sp_tree->collect_leaf_edges(leaf_edges);

  const DpLabel* best = nullptr;
  Cost best_value = 0;
  std::vector<int> best_edges;
  for (const auto& label : root->labels) {
    Cost v = objective_of(label.costs, objective, fstar);
    std::vector<int> edges;
    edges.reserve(label.leaves.size());
    for (int leaf : label.leaves) edges.push_back(leaf_edges[static_cast<std::size_t>(leaf)]);
    std::sort(edges.begin(), edges.end());
    if (!best || v < best_value || (v == best_value && lex_less(edges, best_edges))) {
      best = &label;
      best_value = v;
      best_edges = std::move(edges);
    }
  }

  SolverResult result;
  result.solution = make_solution(best_edges);
  result.objective = objective;
  result.method = SolverResult::Method::pareto_dp;
  result.value = objective == Objective::minmax ? minmax_value(inst, result.solution)
                                                : regret_value(inst, result.solution, *fstar);
  if (result.value != best_value)
    throw Error("pareto_dp internal inconsistency: label value " + std::to_string(best_value) +
                " vs re-evaluation " + std::to_string(result.value));
  return result;
}

namespace {

SolverResult solve_exact(const RobustInstance& inst, Objective objective, SolveMethod method,
                         const EnumerateOptions& enum_options, const DpOptions& dp_options) {
  std::vector<Cost> fstar;
  const std::vector<Cost>* fstar_ptr = nullptr;
  if (objective == Objective::regret) {
    fstar = per_scenario_optima(inst);
    fstar_ptr = &fstar;
  }
  SolveMethod resolved = method;
  if (resolved == SolveMethod::automatic) {
    bool dp_ok = inst.sp_tree && (inst.family == Family::path || inst.family == Family::cut);
    resolved = dp_ok ? SolveMethod::pareto_dp : SolveMethod::brute;
  }
  if (resolved == SolveMethod::pareto_dp)
    return pareto_dp(inst, objective, fstar_ptr, dp_options, nullptr);
  return solve_brute(inst, objective, fstar_ptr, enum_options);
}

}  // namespace

SolverResult solve_minmax_exact(const RobustInstance& inst, SolveMethod method,
                                const EnumerateOptions& enum_options,
                                const DpOptions& dp_options) {
  return solve_exact(inst, Objective::minmax, method, enum_options, dp_options);
}

SolverResult solve_regret_exact(const RobustInstance& inst, SolveMethod method,
                                const EnumerateOptions& enum_options,
                                const DpOptions& dp_options) {
  return solve_exact(inst, Objective::regret, method, enum_options, dp_options);
}

SolverResult mean_scenario_heuristic(const RobustInstance& inst, Objective objective) {
  DetResult det = det_solve(inst.family, inst.graph, summed_costs(inst));
  SolverResult result;
  result.solution = det.solution;
  result.objective = objective;
  result.method = SolverResult::Method::heuristic;
  if (objective == Objective::minmax) {
    result.value = minmax_value(inst, result.solution);
  } else {
    result.value = regret_value(inst, result.solution, per_scenario_optima(inst));
  }
  return result;
}

}  // namespace robustnet
