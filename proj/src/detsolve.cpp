#include "robustnet/detsolve.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace robustnet {

namespace {

constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;

void check_costs(const Graph& graph, const CostVector& costs) {
  if (static_cast<int>(costs.size()) != graph.edge_count())
    throw Error("cost vector length " + std::to_string(costs.size()) +
                " does not match edge count " + std::to_string(graph.edge_count()));
  for (Cost c : costs)
    if (c < 0) throw Error("negative edge cost");
}

struct Arc {
  int to;
  int edge_id;
};

// Adjacency with arcs sorted by edge id, so Dijkstra scans are deterministic.
std::vector<std::vector<Arc>> adjacency(const Graph& g, bool respect_direction) {
  std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(g.node_count));
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.tail)].push_back({e.head, e.id});
    if (!respect_direction || !g.directed)
      adj[static_cast<std::size_t>(e.head)].push_back({e.tail, e.id});
  }
  return adj;
}

std::vector<Cost> dijkstra(const Graph& g, const CostVector& costs,
                           const std::vector<std::vector<Arc>>& adj, int start) {
  std::vector<Cost> dist(static_cast<std::size_t>(g.node_count), kInf);
  using Item = std::pair<Cost, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[static_cast<std::size_t>(start)] = 0;
  queue.emplace(0, start);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d != dist[static_cast<std::size_t>(u)]) continue;
    for (const Arc& a : adj[static_cast<std::size_t>(u)]) {
      Cost nd = d + costs[static_cast<std::size_t>(a.edge_id)];
      if (nd < dist[static_cast<std::size_t>(a.to)]) {
        dist[static_cast<std::size_t>(a.to)] = nd;
        queue.emplace(nd, a.to);
      }
    }
  }
  return dist;
}

DetResult solve_path(const Graph& g, const CostVector& costs) {
  if (!g.source || !g.sink) throw Error("path family requires source and sink");
  auto adj = adjacency(g, true);

  // Reverse adjacency for distances to the sink.
  Graph reversed = g;
  for (auto& e : reversed.edges) std::swap(e.tail, e.head);
  auto radj = adjacency(reversed, true);

  auto dist_from = dijkstra(g, costs, adj, *g.source);
  auto dist_to = dijkstra(reversed, costs, radj, *g.sink);
  Cost best = dist_from[static_cast<std::size_t>(*g.sink)];
  if (best >= kInf) throw Error("no s-t path exists");

  // Greedy forward walk over tight arcs, smallest edge id first.
  std::vector<int> edges;
  std::vector<char> visited(static_cast<std::size_t>(g.node_count), 0);
  int u = *g.source;
  visited[static_cast<std::size_t>(u)] = 1;
  while (u != *g.sink) {
    int chosen = -1;
    int chosen_to = -1;
    for (const Arc& a : adj[static_cast<std::size_t>(u)]) {
      if (visited[static_cast<std::size_t>(a.to)]) continue;
      Cost c = costs[static_cast<std::size_t>(a.edge_id)];
      if (dist_from[static_cast<std::size_t>(u)] + c != dist_from[static_cast<std::size_t>(a.to)])
        continue;
      if (dist_from[static_cast<std::size_t>(a.to)] + dist_to[static_cast<std::size_t>(a.to)] != best)
        continue;
      if (chosen == -1 || a.edge_id < chosen) {
        chosen = a.edge_id;
        chosen_to = a.to;
      }
    }
    if (chosen == -1) throw Error("shortest-path reconstruction failed");
    edges.push_back(chosen);
    u = chosen_to;
    visited[static_cast<std::size_t>(u)] = 1;
  }
  return {make_solution(std::move(edges)), best};
}

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
};

DetResult solve_tree(const Graph& g, const CostVector& costs) {
  std::vector<int> order(static_cast<std::size_t>(g.edge_count()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return costs[static_cast<std::size_t>(a)] < costs[static_cast<std::size_t>(b)];
  });
  UnionFind uf(g.node_count);
  std::vector<int> chosen;
  Cost total = 0;
  for (int id : order) {
    const Edge& e = g.edges[static_cast<std::size_t>(id)];
    if (uf.unite(e.tail, e.head)) {
      chosen.push_back(id);
      total += costs[static_cast<std::size_t>(id)];
    }
  }
  if (static_cast<int>(chosen.size()) != g.node_count - 1) throw Error("graph disconnected");
  return {make_solution(std::move(chosen)), total};
}

// Max-flow / min-cut with BFS augmentation on integer capacities.
struct FlowNetwork {
  struct FlowArc {
    int to;
    Cost cap;
    int edge_id;
  };
  std::vector<FlowArc> arcs;
  std::vector<std::vector<int>> adj;

  explicit FlowNetwork(int n) : adj(static_cast<std::size_t>(n)) {}

  void add(int u, int v, Cost cap_forward, Cost cap_backward, int edge_id) {
    adj[static_cast<std::size_t>(u)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({v, cap_forward, edge_id});
    adj[static_cast<std::size_t>(v)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({u, cap_backward, edge_id});
  }
};

DetResult solve_cut(const Graph& g, const CostVector& costs) {
  if (!g.source || !g.sink) throw Error("cut family requires source and sink");
  FlowNetwork net(g.node_count);
  for (const auto& e : g.edges) {
    Cost c = costs[static_cast<std::size_t>(e.id)];
    net.add(e.tail, e.head, c, g.directed ? 0 : c, e.id);
  }
  int s = *g.source, t = *g.sink;

  std::vector<int> pred(static_cast<std::size_t>(g.node_count));
  Cost flow = 0;
  while (true) {
    std::fill(pred.begin(), pred.end(), -1);
    pred[static_cast<std::size_t>(s)] = -2;
    std::queue<int> queue;
    queue.push(s);
    while (!queue.empty() && pred[static_cast<std::size_t>(t)] == -1) {
      int u = queue.front();
      queue.pop();
      for (int arc_id : net.adj[static_cast<std::size_t>(u)]) {
        const auto& arc = net.arcs[static_cast<std::size_t>(arc_id)];
        if (arc.cap > 0 && pred[static_cast<std::size_t>(arc.to)] == -1) {
          pred[static_cast<std::size_t>(arc.to)] = arc_id;
          queue.push(arc.to);
        }
      }
    }
    if (pred[static_cast<std::size_t>(t)] == -1) break;
    Cost push = kInf;
    for (int v = t; v != s;) {
      int arc_id = pred[static_cast<std::size_t>(v)];
      push = std::min(push, net.arcs[static_cast<std::size_t>(arc_id)].cap);
      v = net.arcs[static_cast<std::size_t>(arc_id ^ 1)].to;
    }
    for (int v = t; v != s;) {
      int arc_id = pred[static_cast<std::size_t>(v)];
      net.arcs[static_cast<std::size_t>(arc_id)].cap -= push;
      net.arcs[static_cast<std::size_t>(arc_id ^ 1)].cap += push;
      v = net.arcs[static_cast<std::size_t>(arc_id ^ 1)].to;
    }
    flow += push;
  }

  // Source side of the final residual reachability partition.
  std::vector<char> reach(static_cast<std::size_t>(g.node_count), 0);
  std::queue<int> queue;
  reach[static_cast<std::size_t>(s)] = 1;
  queue.push(s);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    for (int arc_id : net.adj[static_cast<std::size_t>(u)]) {
      const auto& arc = net.arcs[static_cast<std::size_t>(arc_id)];
      if (arc.cap > 0 && !reach[static_cast<std::size_t>(arc.to)]) {
        reach[static_cast<std::size_t>(arc.to)] = 1;
        queue.push(arc.to);
      }
    }
  }
  std::vector<int> chosen;
  for (const auto& e : g.edges) {
    bool rt = reach[static_cast<std::size_t>(e.tail)];
    bool rh = reach[static_cast<std::size_t>(e.head)];
    bool crossing = g.directed ? (rt && !rh) : (rt != rh);
    if (crossing) chosen.push_back(e.id);
  }
  return {make_solution(std::move(chosen)), flow};
}

// Hungarian algorithm with potentials over an n x n matrix (kInf marks
// missing edges).
std::vector<int> hungarian(const std::vector<std::vector<Cost>>& a) {
  int n = static_cast<int>(a.size());
  std::vector<Cost> u(static_cast<std::size_t>(n + 1), 0), v(static_cast<std::size_t>(n + 1), 0);
  std::vector<int> match(static_cast<std::size_t>(n + 1), 0);  // 1-based: column -> row
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<Cost> minv(static_cast<std::size_t>(n + 1), kInf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    std::vector<int> way(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      int i0 = match[static_cast<std::size_t>(j0)];
      Cost delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        Cost cur = a[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                   u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      if (j1 == -1 || delta >= kInf / 2) throw Error("no perfect matching exists");
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (match[static_cast<std::size_t>(j)] > 0)
      row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return row_to_col;
}

// Two-colors the graph and balances the sides by flipping whole
// components where needed (subset-sum over component imbalances).
std::optional<std::vector<int>> try_two_color(const Graph& g) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.node_count));
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.tail)].push_back(e.head);
    adj[static_cast<std::size_t>(e.head)].push_back(e.tail);
  }
  std::vector<int> color(static_cast<std::size_t>(g.node_count), -1);
  std::vector<int> component(static_cast<std::size_t>(g.node_count), -1);
  int comp = 0;
  for (int start = 0; start < g.node_count; ++start) {
    if (color[static_cast<std::size_t>(start)] != -1) continue;
    color[static_cast<std::size_t>(start)] = 0;
    component[static_cast<std::size_t>(start)] = comp;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (color[static_cast<std::size_t>(v)] == -1) {
          color[static_cast<std::size_t>(v)] = 1 - color[static_cast<std::size_t>(u)];
          component[static_cast<std::size_t>(v)] = comp;
          stack.push_back(v);
        } else if (color[static_cast<std::size_t>(v)] == color[static_cast<std::size_t>(u)]) {
          return std::nullopt;
        }
      }
    }
    ++comp;
  }
  // Balance sides by optionally flipping whole components.
  std::vector<int> comp_diff(static_cast<std::size_t>(comp), 0);
  for (int v = 0; v < g.node_count; ++v)
    comp_diff[static_cast<std::size_t>(component[static_cast<std::size_t>(v)])] +=
        color[static_cast<std::size_t>(v)] == 0 ? 1 : -1;
  // Choose flips so the signed total becomes 0: DP over reachable sums.
  std::vector<std::vector<int>> reach(static_cast<std::size_t>(comp + 1));
  reach[0] = {0};
  for (int c = 0; c < comp; ++c) {
    std::vector<int> next;
    for (int sum : reach[static_cast<std::size_t>(c)]) {
      next.push_back(sum + comp_diff[static_cast<std::size_t>(c)]);
      next.push_back(sum - comp_diff[static_cast<std::size_t>(c)]);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    reach[static_cast<std::size_t>(c + 1)] = std::move(next);
  }
  const auto& final_sums = reach[static_cast<std::size_t>(comp)];
  if (!std::binary_search(final_sums.begin(), final_sums.end(), 0)) return std::nullopt;
  // Backtrack which components were flipped.
  std::vector<char> flip(static_cast<std::size_t>(comp), 0);
  int need = 0;
  for (int c = comp - 1; c >= 0; --c) {
    const auto& prev = reach[static_cast<std::size_t>(c)];
    int keep = need - comp_diff[static_cast<std::size_t>(c)];
    if (std::binary_search(prev.begin(), prev.end(), keep)) {
      need = keep;
    } else {
      flip[static_cast<std::size_t>(c)] = 1;
      need = need + comp_diff[static_cast<std::size_t>(c)];
    }
  }
  for (int v = 0; v < g.node_count; ++v)
    if (flip[static_cast<std::size_t>(component[static_cast<std::size_t>(v)])])
      color[static_cast<std::size_t>(v)] = 1 - color[static_cast<std::size_t>(v)];
  return color;
}

DetResult solve_assignment(const Graph& g, const CostVector& costs) {
  if (g.node_count % 2 != 0) throw Error("bipartite sides unequal");
  auto color = try_two_color(g);
  if (!color) throw Error("graph not bipartite");
  std::vector<int> left, right;
  for (int v = 0; v < g.node_count; ++v)
    ((*color)[static_cast<std::size_t>(v)] == 0 ? left : right).push_back(v);
  if (left.size() != right.size()) throw Error("bipartite sides unequal");
  int n = static_cast<int>(left.size());
  if (n == 0) throw Error("empty assignment instance");

  std::vector<int> side(static_cast<std::size_t>(g.node_count), -1);
  for (int i = 0; i < n; ++i) side[static_cast<std::size_t>(left[static_cast<std::size_t>(i)])] = i;
  std::vector<int> rindex(static_cast<std::size_t>(g.node_count), -1);
  for (int j = 0; j < n; ++j) rindex[static_cast<std::size_t>(right[static_cast<std::size_t>(j)])] = j;

  std::vector<std::vector<Cost>> matrix(static_cast<std::size_t>(n),
                                        std::vector<Cost>(static_cast<std::size_t>(n), kInf));
  std::vector<std::vector<int>> edge_of(static_cast<std::size_t>(n),
                                        std::vector<int>(static_cast<std::size_t>(n), -1));
  for (const auto& e : g.edges) {
    int li = side[static_cast<std::size_t>(e.tail)];
    int rj = rindex[static_cast<std::size_t>(e.head)];
    if (li == -1) {
      li = side[static_cast<std::size_t>(e.head)];
      rj = rindex[static_cast<std::size_t>(e.tail)];
    }
    if (li == -1 || rj == -1) continue;  // cannot happen on bipartite input
    Cost c = costs[static_cast<std::size_t>(e.id)];
    auto& cell = matrix[static_cast<std::size_t>(li)][static_cast<std::size_t>(rj)];
    if (c < cell || (c == cell && (edge_of[static_cast<std::size_t>(li)][static_cast<std::size_t>(rj)] == -1 ||
                                   e.id < edge_of[static_cast<std::size_t>(li)][static_cast<std::size_t>(rj)]))) {
      cell = c;
      edge_of[static_cast<std::size_t>(li)][static_cast<std::size_t>(rj)] = e.id;
    }
  }

  auto row_to_col = hungarian(matrix);
  std::vector<int> chosen;
  Cost total = 0;
  for (int i = 0; i < n; ++i) {
    int j = row_to_col[static_cast<std::size_t>(i)];
    if (j < 0 || matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] >= kInf)
      throw Error("no perfect matching exists");
    total += matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    chosen.push_back(edge_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  return {make_solution(std::move(chosen)), total};
}

}  // namespace

DetResult det_solve(Family family, const Graph& graph, const CostVector& costs) {
  check_costs(graph, costs);
  switch (family) {
    case Family::path: return solve_path(graph, costs);
    case Family::tree: return solve_tree(graph, costs);
    case Family::cut: return solve_cut(graph, costs);
    case Family::assignment: return solve_assignment(graph, costs);
  }
  throw Error("unknown family");
}

CostVector dense_costs(const RobustInstance& inst, int scenario) {
  if (scenario < 0 || scenario >= inst.scenarios.count())
    throw Error("scenario index out of range");
  CostVector costs(static_cast<std::size_t>(inst.graph.edge_count()), 0);
  for (const auto& [edge_id, c] : inst.scenarios.rows[static_cast<std::size_t>(scenario)].entries)
    costs[static_cast<std::size_t>(edge_id)] = c;
  return costs;
}

CostVector summed_costs(const RobustInstance& inst) {
  CostVector costs(static_cast<std::size_t>(inst.graph.edge_count()), 0);
  for (const auto& row : inst.scenarios.rows)
    for (const auto& [edge_id, c] : row.entries) costs[static_cast<std::size_t>(edge_id)] += c;
  return costs;
}

std::vector<Cost> per_scenario_optima(const RobustInstance& inst) {
  std::vector<Cost> out;
  out.reserve(static_cast<std::size_t>(inst.scenarios.count()));
  for (int s = 0; s < inst.scenarios.count(); ++s)
    out.push_back(det_solve(inst.family, inst.graph, dense_costs(inst, s)).value);
  return out;
}

}  // namespace robustnet
