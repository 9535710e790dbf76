#include "robustnet/model.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

namespace robustnet {

const char* family_name(Family f) {
  switch (f) {
    case Family::path: return "path";
    case Family::tree: return "tree";
    case Family::cut: return "cut";
    case Family::assignment: return "assignment";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
  if (name == "path") return Family::path;
  if (name == "tree") return Family::tree;
  if (name == "cut") return Family::cut;
  if (name == "assignment") return Family::assignment;
  return std::nullopt;
}

bool family_needs_terminals(Family f) {
  return f == Family::path || f == Family::cut;
}

SPTree SPTree::leaf(int edge_id) {
  SPTree t;
  t.kind = Kind::leaf;
  t.edge_id = edge_id;
  return t;
}

SPTree SPTree::series(std::vector<SPTree> children) {
  SPTree t;
  t.kind = Kind::series;
  t.children = std::move(children);
  return t;
}

SPTree SPTree::parallel(std::vector<SPTree> children) {
  SPTree t;
  t.kind = Kind::parallel;
  t.children = std::move(children);
  return t;
}

int SPTree::leaf_count() const {
  if (kind == Kind::leaf) return 1;
  int n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

void SPTree::collect_leaf_edges(std::vector<int>& out) const {
  if (kind == Kind::leaf) {
    out.push_back(edge_id);
    return;
  }
  for (const auto& c : children) c.collect_leaf_edges(out);
}

bool Solution::contains(int edge_id) const {
  return std::binary_search(edge_ids.begin(), edge_ids.end(), edge_id);
}

Solution make_solution(std::vector<int> edge_ids) {
  std::sort(edge_ids.begin(), edge_ids.end());
  edge_ids.erase(std::unique(edge_ids.begin(), edge_ids.end()), edge_ids.end());
  return Solution{std::move(edge_ids)};
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& v : violations) {
    out += v;
    out += '\n';
  }
  return out;
}

bool clause_satisfied(const std::array<int, 3>& clause, const std::vector<bool>& assignment) {
  for (int lit : clause) {
    int var = lit > 0 ? lit : -lit;
    bool value = assignment[static_cast<std::size_t>(var - 1)];
    if ((lit > 0) == value) return true;
  }
  return false;
}

bool satisfies(const CnfFormula& cnf, const std::vector<bool>& assignment) {
  if (static_cast<int>(assignment.size()) != cnf.variable_count) return false;
  for (const auto& c : cnf.clauses)
    if (!clause_satisfied(c, assignment)) return false;
  return true;
}

// ---------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------

namespace {

// Two-colors the graph ignoring edge direction; empty result if an odd
// cycle exists.
std::optional<std::vector<int>> two_color(const Graph& g) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.node_count));
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.tail)].push_back(e.head);
    adj[static_cast<std::size_t>(e.head)].push_back(e.tail);
  }
  std::vector<int> color(static_cast<std::size_t>(g.node_count), -1);
  std::vector<int> stack;
  for (int start = 0; start < g.node_count; ++start) {
    if (color[static_cast<std::size_t>(start)] != -1) continue;
    color[static_cast<std::size_t>(start)] = 0;
    stack.push_back(start);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (color[static_cast<std::size_t>(v)] == -1) {
          color[static_cast<std::size_t>(v)] = 1 - color[static_cast<std::size_t>(u)];
          stack.push_back(v);
        } else if (color[static_cast<std::size_t>(v)] == color[static_cast<std::size_t>(u)]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

}  // namespace

ValidationReport validate_instance(const RobustInstance& inst) {
  ValidationReport report;
  auto flag = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  const Graph& g = inst.graph;
  if (g.node_count <= 0) flag("node count must be positive");

  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.id != static_cast<int>(i))
      flag("edge ids must be 0..M-1 in list order (edge at position " + std::to_string(i) +
           " has id " + std::to_string(e.id) + ")");
    if (e.tail < 0 || e.tail >= g.node_count || e.head < 0 || e.head >= g.node_count)
      flag("edge " + std::to_string(e.id) + " has endpoint out of range");
    else if (e.tail == e.head)
      flag("edge " + std::to_string(e.id) + " is a self-loop");
  }

  if (family_needs_terminals(inst.family)) {
    if (!g.source) flag("source required for family " + std::string(family_name(inst.family)));
    if (!g.sink) flag("sink required for family " + std::string(family_name(inst.family)));
    if (g.source && (*g.source < 0 || *g.source >= g.node_count)) flag("source out of range");
    if (g.sink && (*g.sink < 0 || *g.sink >= g.node_count)) flag("sink out of range");
    if (g.source && g.sink && *g.source == *g.sink) flag("source equals sink");
  } else {
    if (g.source) flag("source not allowed for family " + std::string(family_name(inst.family)));
    if (g.sink) flag("sink not allowed for family " + std::string(family_name(inst.family)));
  }

  if (inst.scenarios.count() == 0) flag("at least one scenario required");
  for (int s = 0; s < inst.scenarios.count(); ++s) {
    const auto& row = inst.scenarios.rows[static_cast<std::size_t>(s)].entries;
    int prev = -1;
    for (const auto& [edge_id, c] : row) {
      if (edge_id < 0 || edge_id >= g.edge_count())
        flag("scenario " + std::to_string(s) + " references unknown edge " + std::to_string(edge_id));
      if (edge_id <= prev)
        flag("scenario " + std::to_string(s) + " entries not strictly increasing by edge id");
      if (c <= 0)
        flag("scenario " + std::to_string(s) + " stores non-positive cost on edge " +
             std::to_string(edge_id));
      prev = edge_id;
    }
  }

  if (inst.family == Family::assignment) {
    if (g.directed) flag("assignment family requires an undirected graph");
    if (!two_color(g)) flag("assignment family requires a bipartite graph");
  }

  if (inst.sp_tree) {
    if (!family_needs_terminals(inst.family)) {
      flag("sp_tree only applies to families with source/sink");
    } else if (g.source && g.sink) {
      std::vector<int> leaves;
      inst.sp_tree->collect_leaf_edges(leaves);
      std::vector<int> sorted = leaves;
      std::sort(sorted.begin(), sorted.end());
      bool partition = static_cast<int>(sorted.size()) == g.edge_count();
      for (std::size_t i = 0; partition && i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i)) partition = false;
      if (!partition) {
        flag("sp_tree leaves do not partition the edge set");
      } else {
        try {
          SPTree copy = *inst.sp_tree;
          resolve_sp_terminals(g, copy);
        } catch (const Error& e) {
          flag(std::string("sp_tree inconsistent: ") + e.what());
        }
      }
    }
  }

  return report;
}

// ---------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------

Cost cost(const RobustInstance& inst, const Solution& x, int scenario) {
  if (scenario < 0 || scenario >= inst.scenarios.count())
    throw Error("scenario index " + std::to_string(scenario) + " out of range (K=" +
                std::to_string(inst.scenarios.count()) + ")");
  const auto& row = inst.scenarios.rows[static_cast<std::size_t>(scenario)].entries;
  Cost total = 0;
  std::size_t i = 0, j = 0;
  while (i < row.size() && j < x.edge_ids.size()) {
    if (row[i].first < x.edge_ids[j]) {
      ++i;
    } else if (row[i].first > x.edge_ids[j]) {
      ++j;
    } else {
      total += row[i].second;
      ++i;
      ++j;
    }
  }
  return total;
}

Cost minmax_value(const RobustInstance& inst, const Solution& x) {
  if (inst.scenarios.count() == 0) throw Error("minmax undefined without scenarios");
  Cost worst = 0;
  for (int s = 0; s < inst.scenarios.count(); ++s) worst = std::max(worst, cost(inst, x, s));
  return worst;
}

Cost regret_value(const RobustInstance& inst, const Solution& x, const std::vector<Cost>& fstar) {
  if (static_cast<int>(fstar.size()) != inst.scenarios.count())
    throw Error("fstar length " + std::to_string(fstar.size()) + " does not match scenario count " +
                std::to_string(inst.scenarios.count()));
  if (inst.scenarios.count() == 0) throw Error("regret undefined without scenarios");
  Cost worst = cost(inst, x, 0) - fstar[0];
  for (int s = 1; s < inst.scenarios.count(); ++s)
    worst = std::max(worst, cost(inst, x, s) - fstar[static_cast<std::size_t>(s)]);
  return worst;
}

EvalReport evaluate(const RobustInstance& inst, const Solution& x, const std::vector<Cost>* fstar) {
  if (inst.scenarios.count() == 0) throw Error("evaluation undefined without scenarios");
  EvalReport report;
  report.per_scenario_costs.reserve(static_cast<std::size_t>(inst.scenarios.count()));
  for (int s = 0; s < inst.scenarios.count(); ++s)
    report.per_scenario_costs.push_back(cost(inst, x, s));
  report.minmax_value = *std::max_element(report.per_scenario_costs.begin(), report.per_scenario_costs.end());
  if (fstar) report.regret_value = regret_value(inst, x, *fstar);
  return report;
}

// ---------------------------------------------------------------------
// Tokenizer shared by the text formats
// ---------------------------------------------------------------------

namespace {

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) {}

  // Next whitespace-delimited token; '#' comments run to end of line.
  std::optional<std::string> next() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ >= text_.size()) return std::nullopt;
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '#')
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::string expect(const std::string& what) {
    auto tok = next();
    if (!tok) throw ParseError("unexpected end of input, expected " + what);
    return *tok;
  }

  void expect_keyword(const std::string& kw) {
    std::string tok = expect("keyword '" + kw + "'");
    if (tok != kw) throw ParseError("expected '" + kw + "', got '" + tok + "'");
  }

  long long expect_int(const std::string& what) {
    std::string tok = expect(what);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw ParseError("expected integer for " + what + ", got '" + tok + "'");
    return value;
  }

  std::optional<std::string> peek() {
    std::size_t saved = pos_;
    auto tok = next();
    pos_ = saved;
    return tok;
  }

private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

int checked_count(long long v, const std::string& what, long long cap = 1ll << 31) {
  if (v < 0) throw ParseError(what + " must be nonnegative, got " + std::to_string(v));
  if (v > cap) throw ParseError(what + " too large: " + std::to_string(v));
  return static_cast<int>(v);
}

}  // namespace

// ---------------------------------------------------------------------
// Instance format
// ---------------------------------------------------------------------

RobustInstance parse_instance(const std::string& text) {
  Lexer lex(text);
  lex.expect_keyword("ROBUSTNET");
  if (lex.expect_int("format version") != 1) throw ParseError("unsupported ROBUSTNET version");

  RobustInstance inst;
  lex.expect_keyword("problem");
  std::string fam = lex.expect("family");
  auto family = family_from_name(fam);
  if (!family) throw ParseError("unknown problem family '" + fam + "'");
  inst.family = *family;

  lex.expect_keyword("directed");
  long long directed = lex.expect_int("directed flag");
  if (directed != 0 && directed != 1) throw ParseError("directed flag must be 0 or 1");
  inst.graph.directed = directed == 1;

  lex.expect_keyword("nodes");
  inst.graph.node_count = checked_count(lex.expect_int("node count"), "node count");

  std::string tok = lex.expect("'source', 'sink' or 'edges'");
  if (tok == "source") {
    inst.graph.source = checked_count(lex.expect_int("source"), "source");
    tok = lex.expect("'sink' or 'edges'");
  }
  if (tok == "sink") {
    inst.graph.sink = checked_count(lex.expect_int("sink"), "sink");
    tok = lex.expect("'edges'");
  }
  if (tok != "edges") throw ParseError("expected 'edges', got '" + tok + "'");

  int edge_count = checked_count(lex.expect_int("edge count"), "edge count");
  inst.graph.edges.reserve(static_cast<std::size_t>(edge_count));
  for (int i = 0; i < edge_count; ++i) {
    lex.expect_keyword("e");
    Edge e;
    e.id = checked_count(lex.expect_int("edge id"), "edge id");
    if (e.id != i) throw ParseError("edge ids must appear in order 0..M-1; got " + std::to_string(e.id) +
                                    " at position " + std::to_string(i));
    e.tail = checked_count(lex.expect_int("edge tail"), "edge tail");
    e.head = checked_count(lex.expect_int("edge head"), "edge head");
    if (e.tail >= inst.graph.node_count || e.head >= inst.graph.node_count)
      throw ParseError("edge " + std::to_string(e.id) + " endpoint out of range");
    inst.graph.edges.push_back(e);
  }

  lex.expect_keyword("scenarios");
  int scenario_count = checked_count(lex.expect_int("scenario count"), "scenario count");
  inst.scenarios.rows.reserve(static_cast<std::size_t>(scenario_count));
  for (int s = 0; s < scenario_count; ++s) {
    lex.expect_keyword("s");
    int nnz = checked_count(lex.expect_int("nonzero count"), "nonzero count");
    ScenarioRow row;
    row.entries.reserve(static_cast<std::size_t>(nnz));
    for (int k = 0; k < nnz; ++k) {
      int edge_id = checked_count(lex.expect_int("scenario edge id"), "scenario edge id");
      if (edge_id >= edge_count)
        throw ParseError("scenario " + std::to_string(s) + " references unknown edge " +
                         std::to_string(edge_id));
      long long c = lex.expect_int("scenario cost");
      if (c < 0) throw ParseError("negative cost in scenario " + std::to_string(s));
      if (c > 0) row.entries.emplace_back(edge_id, static_cast<Cost>(c));
    }
    std::sort(row.entries.begin(), row.entries.end());
    for (std::size_t k = 1; k < row.entries.size(); ++k)
      if (row.entries[k].first == row.entries[k - 1].first)
        throw ParseError("scenario " + std::to_string(s) + " lists edge " +
                         std::to_string(row.entries[k].first) + " twice");
    inst.scenarios.rows.push_back(std::move(row));
  }

  tok = lex.expect("'sptree' or 'end'");
  if (tok == "sptree") {
    // The expression runs until the matching close paren; re-lex it raw.
    std::string expr;
    int depth = 0;
    bool started = false;
    while (!started || depth > 0) {
      std::string piece = lex.expect("sptree expression");
      for (char c : piece) {
        if (c == '(') ++depth, started = true;
        if (c == ')') --depth;
      }
      if (!started) throw ParseError("sptree expression must start with '('");
      expr += piece;
      expr += ' ';
      if (depth < 0) throw ParseError("unbalanced parentheses in sptree expression");
    }
    SPTree tree = parse_sp_expression(expr);
    resolve_sp_terminals(inst.graph, tree);
    inst.sp_tree = std::move(tree);
    tok = lex.expect("'end'");
  }
  if (tok != "end") throw ParseError("expected 'end', got '" + tok + "'");
  if (lex.peek()) throw ParseError("trailing content after 'end'");
  return inst;
}

std::string serialize_instance(const RobustInstance& inst) {
  std::ostringstream out;
  out << "ROBUSTNET 1\n";
  out << "problem " << family_name(inst.family) << '\n';
  out << "directed " << (inst.graph.directed ? 1 : 0) << '\n';
  out << "nodes " << inst.graph.node_count << '\n';
  if (inst.graph.source) out << "source " << *inst.graph.source << '\n';
  if (inst.graph.sink) out << "sink " << *inst.graph.sink << '\n';
  out << "edges " << inst.graph.edge_count() << '\n';
  for (const auto& e : inst.graph.edges)
    out << "e " << e.id << ' ' << e.tail << ' ' << e.head << '\n';
  out << "scenarios " << inst.scenarios.count() << '\n';
  for (const auto& row : inst.scenarios.rows) {
    out << "s " << row.entries.size();
    for (const auto& [edge_id, c] : row.entries) out << ' ' << edge_id << ' ' << c;
    out << '\n';
  }
  if (inst.sp_tree) out << "sptree " << serialize_sp_expression(*inst.sp_tree) << '\n';
  out << "end\n";
  return out.str();
}

// ---------------------------------------------------------------------
// Solution format
// ---------------------------------------------------------------------

SolutionFile parse_solution(const std::string& text) {
  Lexer lex(text);
  lex.expect_keyword("value");
  SolutionFile out;
  out.value = lex.expect_int("solution value");
  lex.expect_keyword("edges");
  std::vector<int> ids;
  while (auto tok = lex.next()) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok->data(), tok->data() + tok->size(), v);
    if (ec != std::errc{} || ptr != tok->data() + tok->size())
      throw ParseError("expected edge id, got '" + *tok + "'");
    ids.push_back(checked_count(v, "edge id"));
  }
  out.solution = make_solution(std::move(ids));
  return out;
}

std::string serialize_solution(Cost value, const Solution& s) {
  std::ostringstream out;
  out << "value " << value << '\n' << "edges";
  for (int id : s.edge_ids) out << ' ' << id;
  out << '\n';
  return out.str();
}

// ---------------------------------------------------------------------
// DIMACS CNF
// ---------------------------------------------------------------------

CnfFormula parse_dimacs(const std::string& text) {
  CnfFormula cnf;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  long long declared_clauses = 0;
  std::vector<int> current;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == 'c') continue;
    if (line[0] == '%') break;  // some distributions end with "%\n0"
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      long long n = 0, m = 0;
      if (!(ls >> p >> fmt >> n >> m) || fmt != "cnf")
        throw ParseError("malformed DIMACS header: '" + line + "'");
      if (n < 0 || m < 0) throw ParseError("negative counts in DIMACS header");
      cnf.variable_count = checked_count(n, "variable count");
      declared_clauses = m;
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause before DIMACS header");
    long long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        if (current.size() != 3)
          throw ParseError("clause must have exactly 3 literals, got " +
                           std::to_string(current.size()));
        std::array<int, 3> clause{current[0], current[1], current[2]};
        if (clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2])
          throw ParseError("clause literals must be distinct");
        cnf.clauses.push_back(clause);
        current.clear();
      } else {
        long long var = lit > 0 ? lit : -lit;
        if (var > cnf.variable_count)
          throw ParseError("literal " + std::to_string(lit) + " out of range (n=" +
                           std::to_string(cnf.variable_count) + ")");
        current.push_back(static_cast<int>(lit));
      }
    }
  }
  if (!have_header) throw ParseError("missing DIMACS header");
  if (!current.empty()) throw ParseError("unterminated clause at end of input");
  if (static_cast<long long>(cnf.clauses.size()) != declared_clauses)
    throw ParseError("clause count mismatch: header says " + std::to_string(declared_clauses) +
                     ", found " + std::to_string(cnf.clauses.size()));
  return cnf;
}

// ---------------------------------------------------------------------
// sptree expressions
// ---------------------------------------------------------------------

namespace {

struct SpExprParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of sptree expression");
    return text[pos];
  }

  void consume(char c) {
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "' in sptree expression");
    ++pos;
  }

  SPTree parse_node() {
    consume('(');
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of sptree expression");
    char op = text[pos++];
    if (op == 'L') {
      skip_ws();
      std::size_t start = pos;
      while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])))) ++pos;
      if (start == pos) throw ParseError("leaf requires an edge id");
      int id = std::stoi(text.substr(start, pos - start));
      consume(')');
      return SPTree::leaf(id);
    }
    if (op != 'S' && op != 'P') throw ParseError("sptree operator must be S, P or L");
    std::vector<SPTree> children;
    while (peek() != ')') children.push_back(parse_node());
    consume(')');
    if (children.empty()) throw ParseError("S/P nodes need at least one child");
    return op == 'S' ? SPTree::series(std::move(children)) : SPTree::parallel(std::move(children));
  }
};

void print_sp(const SPTree& t, std::string& out) {
  switch (t.kind) {
    case SPTree::Kind::leaf:
      out += "(L ";
      out += std::to_string(t.edge_id);
      out += ')';
      return;
    case SPTree::Kind::series:
      out += "(S";
      break;
    case SPTree::Kind::parallel:
      out += "(P";
      break;
  }
  for (const auto& c : t.children) {
    out += ' ';
    print_sp(c, out);
  }
  out += ')';
}

using Orientation = std::pair<int, int>;

// All (left, right) terminal pairs a subtree can realize. Undirected
// leaves may flip; everything else composes.
std::vector<Orientation> orientations(const Graph& g, const SPTree& t) {
  switch (t.kind) {
    case SPTree::Kind::leaf: {
      if (t.edge_id < 0 || t.edge_id >= g.edge_count())
        throw Error("sp_tree leaf references unknown edge " + std::to_string(t.edge_id));
      const Edge& e = g.edges[static_cast<std::size_t>(t.edge_id)];
      std::vector<Orientation> out{{e.tail, e.head}};
      if (!g.directed && e.tail != e.head) out.emplace_back(e.head, e.tail);
      return out;
    }
    case SPTree::Kind::series: {
      std::vector<Orientation> states = orientations(g, t.children.front());
      for (std::size_t i = 1; i < t.children.size(); ++i) {
        std::vector<Orientation> next_states;
        auto child = orientations(g, t.children[i]);
        for (const auto& [l, r] : states)
          for (const auto& [cl, cr] : child)
            if (cl == r) next_states.emplace_back(l, cr);
        std::sort(next_states.begin(), next_states.end());
        next_states.erase(std::unique(next_states.begin(), next_states.end()), next_states.end());
        states = std::move(next_states);
        if (states.empty()) throw Error("series children do not chain");
      }
      return states;
    }
    case SPTree::Kind::parallel: {
      std::vector<Orientation> common = orientations(g, t.children.front());
      for (std::size_t i = 1; i < t.children.size(); ++i) {
        auto child = orientations(g, t.children[i]);
        std::vector<Orientation> kept;
        for (const auto& o : common)
          if (std::find(child.begin(), child.end(), o) != child.end()) kept.push_back(o);
        common = std::move(kept);
        if (common.empty()) throw Error("parallel children do not share terminals");
      }
      return common;
    }
  }
  throw Error("corrupt sp_tree node");
}

// Second pass: fix one orientation per node given the root's choice.
void assign_terminals(const Graph& g, SPTree& t, Orientation o) {
  t.left_terminal = o.first;
  t.right_terminal = o.second;
  switch (t.kind) {
    case SPTree::Kind::leaf:
      return;
    case SPTree::Kind::series: {
      // Choose child orientations left to right; at each step prefer one
      // that lets the remaining suffix still reach the right terminal.
      int current = o.first;
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        auto options = orientations(g, t.children[i]);
        bool placed = false;
        for (const auto& opt : options) {
          if (opt.first != current) continue;
          // Check the suffix can end at o.second starting from opt.second.
          std::vector<int> reachable{opt.second};
          bool ok = true;
          for (std::size_t j = i + 1; j < t.children.size() && ok; ++j) {
            auto next_opts = orientations(g, t.children[j]);
            std::vector<int> next_reachable;
            for (int from : reachable)
              for (const auto& [cl, cr] : next_opts)
                if (cl == from) next_reachable.push_back(cr);
            std::sort(next_reachable.begin(), next_reachable.end());
            next_reachable.erase(std::unique(next_reachable.begin(), next_reachable.end()),
                                 next_reachable.end());
            reachable = std::move(next_reachable);
            ok = !reachable.empty();
          }
          if (ok && (i + 1 < t.children.size() ||
                     opt.second == o.second)) {
            if (i + 1 == t.children.size() && opt.second != o.second) continue;
            if (i + 1 < t.children.size() &&
                std::find(reachable.begin(), reachable.end(), o.second) == reachable.end())
              continue;
            assign_terminals(g, t.children[i], opt);
            current = opt.second;
            placed = true;
            break;
          }
        }
        if (!placed) throw Error("series children do not chain");
      }
      return;
    }
    case SPTree::Kind::parallel:
      for (auto& c : t.children) assign_terminals(g, c, o);
      return;
  }
}

}  // namespace

SPTree parse_sp_expression(const std::string& text) {
  SpExprParser parser{text};
  SPTree tree = parser.parse_node();
  parser.skip_ws();
  if (parser.pos != text.size()) throw ParseError("trailing content after sptree expression");
  return tree;
}

std::string serialize_sp_expression(const SPTree& tree) {
  std::string out;
  print_sp(tree, out);
  return out;
}

void resolve_sp_terminals(const Graph& graph, SPTree& tree) {
  auto opts = orientations(graph, tree);
  if (!graph.source || !graph.sink)
    throw Error("sp_tree resolution requires source and sink");
  Orientation want{*graph.source, *graph.sink};
  if (std::find(opts.begin(), opts.end(), want) == opts.end())
    throw Error("sp_tree does not span source -> sink");
  assign_terminals(graph, tree, want);
}

}  // namespace robustnet
