// Command-line front end for the robustnet shared library. Talks to the
// C API only. Data goes to stdout (or --out files), diagnostics to
// stderr. Exit codes: 0 success/pass, 1 domain refusal or failed check,
// 2 usage or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robustnet.h"

namespace {

int exit_code_for(rn_status status) {
  return status == RN_PARSE_ERROR ? 2 : 1;
}

int fail(rn_status status, const std::string& context) {
  std::cerr << "error: " << context << ": " << rn_last_error() << "\n";
  return exit_code_for(status);
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return out.good();
}

int emit_data(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return 0;
  }
  if (!write_file(out_path, content)) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  return 0;
}

struct Managed {
  char* text = nullptr;
  ~Managed() { rn_string_free(text); }
};

struct CnfHandle {
  rn_cnf* cnf = nullptr;
  ~CnfHandle() { rn_cnf_free(cnf); }
};

struct InstanceHandle {
  rn_instance* inst = nullptr;
  ~InstanceHandle() { rn_instance_free(inst); }
};

struct ResultHandle {
  rn_result* result = nullptr;
  ~ResultHandle() { rn_result_free(result); }
};

struct ReportHandle {
  rn_gap_report* report = nullptr;
  ~ReportHandle() { rn_gap_report_free(report); }
};

int load_cnf(const std::string& path, CnfHandle& handle) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    return 2;
  }
  rn_status status = rn_cnf_parse_dimacs(text.c_str(), &handle.cnf);
  if (status != RN_OK) return fail(status, path);
  return 0;
}

int load_instance(const std::string& path, InstanceHandle& handle) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    return 2;
  }
  rn_status status = rn_instance_parse(text.c_str(), &handle.inst);
  if (status != RN_OK) return fail(status, path);
  Managed report;
  int valid = 0;
  status = rn_instance_validate(handle.inst, &report.text, &valid);
  if (status != RN_OK) return fail(status, path);
  if (!valid) {
    std::cerr << "error: invalid instance " << path << ":\n" << report.text;
    return 2;
  }
  return 0;
}

int load_solution(const std::string& path, int64_t& value, std::vector<int>& edges) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    return 2;
  }
  int* raw = nullptr;
  int count = 0;
  rn_status status = rn_solution_parse(text.c_str(), &value, &raw, &count);
  if (status != RN_OK) return fail(status, path);
  edges.assign(raw, raw + count);
  rn_ints_free(raw);
  return 0;
}

rn_family family_from_flag(const std::string& name) {
  if (name == "path") return RN_FAMILY_PATH;
  if (name == "tree") return RN_FAMILY_TREE;
  if (name == "cut") return RN_FAMILY_CUT;
  return RN_FAMILY_ASSIGNMENT;
}

// ---- reduce ---------------------------------------------------------

struct ReduceArgs {
  std::string cnf_path;
  std::string family = "path";
  int levels = 0;
  std::string mode = "faithful";
  std::string out;
  bool to_tree = false;
  bool to_path = false;
  std::string instance_path;
  std::string solution_path;
  std::string out_solution;
};

int run_reduce(const ReduceArgs& args) {
  if (args.to_tree || args.to_path) {
    if (args.instance_path.empty() || args.solution_path.empty()) {
      std::cerr << "error: --to-tree/--to-path need --instance and --solution\n";
      return 2;
    }
    if (args.out_solution.empty()) {
      std::cerr << "error: --to-tree/--to-path need --out-solution\n";
      return 2;
    }
    InstanceHandle inst;
    if (int rc = load_instance(args.instance_path, inst)) return rc;
    int64_t claimed_value = 0;
    std::vector<int> edges;
    if (int rc = load_solution(args.solution_path, claimed_value, edges)) return rc;

    InstanceHandle transformed;
    ResultHandle solution;
    rn_status status = args.to_tree
                           ? rn_path_to_tree(inst.inst, edges.data(),
                                             static_cast<int>(edges.size()), &transformed.inst,
                                             &solution.result)
                           : rn_tree_to_path(inst.inst, edges.data(),
                                             static_cast<int>(edges.size()), &transformed.inst,
                                             &solution.result);
    if (status != RN_OK) return fail(status, "transform");

    Managed solution_text;
    status = rn_result_solution_text(solution.result, &solution_text.text);
    if (status != RN_OK) return fail(status, "solution");
    if (!write_file(args.out_solution, solution_text.text)) {
      std::cerr << "error: cannot write " << args.out_solution << "\n";
      return 1;
    }
    Managed instance_text;
    status = rn_instance_serialize(transformed.inst, &instance_text.text);
    if (status != RN_OK) return fail(status, "serialize");
    std::cerr << "transformed: " << rn_instance_edge_count(transformed.inst) << " edges, value "
              << rn_result_value(solution.result) << "\n";
    return emit_data(args.out, instance_text.text);
  }

  if (args.cnf_path.empty()) {
    std::cerr << "error: reduce needs --cnf (or --to-tree/--to-path)\n";
    return 2;
  }
  if (args.family != "path" && args.family != "cut") {
    std::cerr << "error: reduce --family must be path or cut\n";
    return 2;
  }
  CnfHandle cnf;
  if (int rc = load_cnf(args.cnf_path, cnf)) return rc;

  InstanceHandle base;
  rn_status status = args.family == "path" ? rn_sat_to_path(cnf.cnf, &base.inst)
                                           : rn_sat_to_cut(cnf.cnf, &base.inst);
  if (status != RN_OK) return fail(status, "reduce");

  InstanceHandle amplified;
  Managed meta;
  rn_amplify_mode mode = args.mode == "compressed" ? RN_MODE_COMPRESSED : RN_MODE_FAITHFUL;
  status = rn_amplify(base.inst, args.levels, mode, &amplified.inst, &meta.text);
  if (status != RN_OK) return fail(status, "amplify");

  Managed text;
  status = rn_instance_serialize(amplified.inst, &text.text);
  if (status != RN_OK) return fail(status, "serialize");

  std::ostringstream out;
  out << "# robustnet reduce\n";
  out << "# formula: " << rn_cnf_variable_count(cnf.cnf) << " variables, "
      << rn_cnf_clause_count(cnf.cnf) << " clauses\n";
  out << meta.text << text.text;
  std::cerr << "reduced: " << rn_instance_edge_count(amplified.inst) << " edges, "
            << rn_instance_scenario_count(amplified.inst) << " scenarios\n";
  return emit_data(args.out, out.str());
}

// ---- solve ----------------------------------------------------------

struct SolveArgs {
  std::string instance_path;
  std::string objective = "minmax";
  std::string method = "auto";
  std::string out;
};

int run_solve(const SolveArgs& args) {
  InstanceHandle inst;
  if (int rc = load_instance(args.instance_path, inst)) return rc;

  rn_objective objective = RN_OBJECTIVE_MINMAX;
  if (args.objective == "regret") objective = RN_OBJECTIVE_REGRET;
  if (args.objective == "mean") objective = RN_OBJECTIVE_MEAN;
  rn_method method = RN_METHOD_AUTO;
  if (args.method == "brute") method = RN_METHOD_BRUTE;
  if (args.method == "dp") method = RN_METHOD_DP;

  ResultHandle result;
  rn_status status = rn_solve(inst.inst, objective, method, &result.result);
  if (status != RN_OK) return fail(status, "solve");

  std::cerr << "method: " << rn_result_method(result.result) << "\n";
  if (!args.out.empty()) {
    Managed text;
    status = rn_result_solution_text(result.result, &text.text);
    if (status != RN_OK) return fail(status, "solution");
    if (!write_file(args.out, text.text)) {
      std::cerr << "error: cannot write " << args.out << "\n";
      return 1;
    }
  }
  std::cout << rn_result_value(result.result) << "\n";
  return 0;
}

// ---- verify ----------------------------------------------------------

struct VerifyArgs {
  std::string cnf_path;
  std::string family = "path";
  int levels = 0;
  std::string mode = "faithful";
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  std::string csv;
  bool regret_identity = false;
  std::string instance_path;
};

int run_verify(const VerifyArgs& args) {
  if (args.regret_identity) {
    if (args.instance_path.empty()) {
      std::cerr << "error: --regret-identity needs --instance\n";
      return 2;
    }
    InstanceHandle inst;
    if (int rc = load_instance(args.instance_path, inst)) return rc;
    Managed text;
    int holds = 0;
    rn_status status = rn_regret_identity(inst.inst, &text.text, &holds);
    if (status != RN_OK) return fail(status, "regret identity");
    std::cout << text.text;
    return holds ? 0 : 1;
  }

  if (args.cnf_path.empty()) {
    std::cerr << "error: verify needs --cnf (or --regret-identity)\n";
    return 2;
  }
  if (args.family != "path" && args.family != "cut") {
    std::cerr << "error: verify --family must be path or cut\n";
    return 2;
  }
  CnfHandle cnf;
  if (int rc = load_cnf(args.cnf_path, cnf)) return rc;

  std::string id = args.cnf_path;
  auto slash = id.find_last_of('/');
  if (slash != std::string::npos) id = id.substr(slash + 1);

  ReportHandle report;
  rn_amplify_mode mode = args.mode == "compressed" ? RN_MODE_COMPRESSED : RN_MODE_FAITHFUL;
  rn_status status = rn_check_gap(cnf.cnf, id.c_str(), family_from_flag(args.family), args.levels,
                                  mode, args.samples, args.seed, &report.report);
  if (status != RN_OK) return fail(status, "check gap");

  Managed text;
  status = rn_gap_report_text(report.report, 0, &text.text);
  if (status != RN_OK) return fail(status, "report");
  std::cout << text.text;

  Managed timed;
  if (rn_gap_report_text(report.report, 1, &timed.text) == RN_OK) {
    std::string full = timed.text;
    auto pos = full.rfind("seconds:");
    if (pos != std::string::npos) std::cerr << full.substr(pos);
  }

  if (!args.csv.empty()) {
    std::ifstream probe(args.csv);
    bool need_header = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    probe.close();
    Managed row;
    status = rn_gap_report_csv(report.report, need_header ? 1 : 0, &row.text);
    if (status != RN_OK) return fail(status, "csv");
    std::ofstream out(args.csv, std::ios::app);
    if (!out) {
      std::cerr << "error: cannot write " << args.csv << "\n";
      return 1;
    }
    out << row.text;
  }
  return rn_gap_report_pass(report.report) ? 0 : 1;
}

// ---- bench -----------------------------------------------------------

struct BenchArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 1;
};

int run_bench(const BenchArgs& args) {
  std::string config;
  if (!read_file(args.config_path, config)) {
    std::cerr << "error: cannot read " << args.config_path << "\n";
    return 2;
  }
  Managed csv;
  int violated = 0;
  rn_status status = rn_bench(config.c_str(), args.seed, args.jobs, &csv.text, &violated);
  if (status != RN_OK) return fail(status, "bench");
  if (int rc = emit_data(args.out, csv.text)) return rc;
  if (violated) {
    std::cerr << "error: K-approximation bound violated in some trial\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust network optimization toolkit (minmax / minmax-regret)"};
  app.require_subcommand(1);

  ReduceArgs reduce_args;
  CLI::App* reduce = app.add_subcommand("reduce", "generate instances from 3-SAT formulas");
  reduce->add_option("--cnf", reduce_args.cnf_path, "DIMACS CNF input");
  reduce->add_option("--family", reduce_args.family, "path|cut")
      ->check(CLI::IsMember({"path", "cut"}));
  reduce->add_option("--levels", reduce_args.levels, "amplification levels t >= 0");
  reduce->add_option("--mode", reduce_args.mode, "faithful|compressed")
      ->check(CLI::IsMember({"faithful", "compressed"}));
  reduce->add_option("--out", reduce_args.out, "output instance file (default stdout)");
  reduce->add_flag("--to-tree", reduce_args.to_tree, "transform a level-0 path instance + path");
  reduce->add_flag("--to-path", reduce_args.to_path, "inverse of --to-tree");
  reduce->add_option("--instance", reduce_args.instance_path, "instance file for transforms");
  reduce->add_option("--solution", reduce_args.solution_path, "solution file for transforms");
  reduce->add_option("--out-solution", reduce_args.out_solution,
                     "output solution file for transforms");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("--instance", solve_args.instance_path, "instance file")->required();
  solve->add_option("--objective", solve_args.objective, "minmax|regret|mean")
      ->check(CLI::IsMember({"minmax", "regret", "mean"}));
  solve->add_option("--method", solve_args.method, "auto|brute|dp")
      ->check(CLI::IsMember({"auto", "brute", "dp"}));
  solve->add_option("--out", solve_args.out, "write the solution file here");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "certify gap properties");
  verify->add_option("--cnf", verify_args.cnf_path, "DIMACS CNF input");
  verify->add_option("--family", verify_args.family, "path|cut")
      ->check(CLI::IsMember({"path", "cut"}));
  verify->add_option("--levels", verify_args.levels, "amplification levels t >= 0");
  verify->add_option("--mode", verify_args.mode, "faithful|compressed")
      ->check(CLI::IsMember({"faithful", "compressed"}));
  verify->add_option("--samples", verify_args.samples, "sampled checks (default 10000)");
  verify->add_option("--seed", verify_args.seed, "seed for sampled checks");
  verify->add_option("--csv", verify_args.csv, "append the report CSV row to this file");
  verify->add_flag("--regret-identity", verify_args.regret_identity,
                   "check F* = 0 and regret = minmax on an instance");
  verify->add_option("--instance", verify_args.instance_path,
                     "instance file for --regret-identity");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "heuristic vs exact ratio harness");
  bench->add_option("--config", bench_args.config_path, "bench config file")->required();
  bench->add_option("--seed", bench_args.seed, "base seed");
  bench->add_option("--out", bench_args.out, "output CSV file (default stdout)");
  bench->add_option("--jobs", bench_args.jobs, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (reduce->parsed()) return run_reduce(reduce_args);
  if (solve->parsed()) return run_solve(solve_args);
  if (verify->parsed()) return run_verify(verify_args);
  if (bench->parsed()) return run_bench(bench_args);
  return 2;
}
