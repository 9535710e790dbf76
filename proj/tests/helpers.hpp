#pragma once

// Shared fixtures for the test suites.

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testhelpers {

inline std::string data_path(const std::string& name) {
  return std::string(RN_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline const char* fig2_dimacs() {
  return "c figure 2 formula\n"
         "p cnf 3 3\n"
         "1 -2 -3 0\n"
         "-1 2 3 0\n"
         "1 2 3 0\n";
}

inline const char* unsat8_dimacs() {
  return "p cnf 3 8\n"
         "1 2 3 0\n"
         "1 2 -3 0\n"
         "1 -2 3 0\n"
         "1 -2 -3 0\n"
         "-1 2 3 0\n"
         "-1 2 -3 0\n"
         "-1 -2 3 0\n"
         "-1 -2 -3 0\n";
}

// Figure 2 / Figure 4 scenario tables as (edge_a, edge_b) pairs in
// S1..S6 column order, frozen from the paper's tables under the
// generator's edge numbering.
inline std::vector<std::pair<int, int>> fig2_path_pairs() {
  return {{0, 6}, {1, 7}, {1, 13}, {2, 8}, {2, 14}, {6, 12}};
}

inline std::vector<std::pair<int, int>> fig4_cut_pairs() {
  return {{0, 3}, {1, 4}, {1, 7}, {2, 5}, {2, 8}, {3, 6}};
}

}  // namespace testhelpers
