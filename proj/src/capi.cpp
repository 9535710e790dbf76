#include "robustnet.h"

#include <cstring>
#include <sstream>
#include <string>

#include "robustnet/detsolve.hpp"
#include "robustnet/model.hpp"
#include "robustnet/reduce.hpp"
#include "robustnet/robust.hpp"
#include "robustnet/verify.hpp"

namespace {

thread_local std::string g_last_error;

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
rn_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return RN_OK;
  } catch (const robustnet::Refusal& e) {
    g_last_error = e.what();
    return RN_REFUSED;
  } catch (const robustnet::ParseError& e) {
    g_last_error = e.what();
    return RN_PARSE_ERROR;
  } catch (const robustnet::Error& e) {
    g_last_error = e.what();
    return RN_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RN_ERROR;
  }
}

robustnet::Family to_family(rn_family f) {
  switch (f) {
    case RN_FAMILY_PATH: return robustnet::Family::path;
    case RN_FAMILY_TREE: return robustnet::Family::tree;
    case RN_FAMILY_CUT: return robustnet::Family::cut;
    case RN_FAMILY_ASSIGNMENT: return robustnet::Family::assignment;
  }
  throw robustnet::Error("unknown family code");
}

rn_family from_family(robustnet::Family f) {
  switch (f) {
    case robustnet::Family::path: return RN_FAMILY_PATH;
    case robustnet::Family::tree: return RN_FAMILY_TREE;
    case robustnet::Family::cut: return RN_FAMILY_CUT;
    case robustnet::Family::assignment: return RN_FAMILY_ASSIGNMENT;
  }
  return RN_FAMILY_PATH;
}

}  // namespace

struct rn_cnf {
  robustnet::CnfFormula formula;
};

struct rn_instance {
  robustnet::RobustInstance instance;
};

struct rn_result {
  robustnet::SolverResult result;
};

struct rn_gap_report {
  robustnet::GapReport report;
};

struct rn_implicit {
  robustnet::ImplicitInstance implicit;
};

extern "C" {

const char* rn_version(void) { return "1.0.0"; }

const char* rn_last_error(void) { return g_last_error.c_str(); }

void rn_string_free(char* text) { delete[] text; }

/* ---- 3-SAT formulas ------------------------------------------------ */

rn_status rn_cnf_parse_dimacs(const char* text, rn_cnf** out) {
  return guard([&] {
    if (!text || !out) throw robustnet::Error("null argument");
    *out = new rn_cnf{robustnet::parse_dimacs(text)};
  });
}

void rn_cnf_free(rn_cnf* cnf) { delete cnf; }

int rn_cnf_variable_count(const rn_cnf* cnf) { return cnf ? cnf->formula.variable_count : 0; }

int rn_cnf_clause_count(const rn_cnf* cnf) { return cnf ? cnf->formula.clause_count() : 0; }

/* ---- instances ------------------------------------------------------ */

rn_status rn_instance_parse(const char* text, rn_instance** out) {
  return guard([&] {
    if (!text || !out) throw robustnet::Error("null argument");
    *out = new rn_instance{robustnet::parse_instance(text)};
  });
}

rn_status rn_instance_serialize(const rn_instance* inst, char** out_text) {
  return guard([&] {
    if (!inst || !out_text) throw robustnet::Error("null argument");
    *out_text = copy_string(robustnet::serialize_instance(inst->instance));
  });
}

void rn_instance_free(rn_instance* inst) { delete inst; }

rn_status rn_instance_validate(const rn_instance* inst, char** report_out, int* valid_out) {
  return guard([&] {
    if (!inst) throw robustnet::Error("null argument");
    auto report = robustnet::validate_instance(inst->instance);
    if (report_out) *report_out = copy_string(report.to_string());
    if (valid_out) *valid_out = report.ok() ? 1 : 0;
  });
}

rn_family rn_instance_family(const rn_instance* inst) {
  return inst ? from_family(inst->instance.family) : RN_FAMILY_PATH;
}

int rn_instance_node_count(const rn_instance* inst) {
  return inst ? inst->instance.graph.node_count : 0;
}

int rn_instance_edge_count(const rn_instance* inst) {
  return inst ? inst->instance.graph.edge_count() : 0;
}

int rn_instance_scenario_count(const rn_instance* inst) {
  return inst ? inst->instance.scenarios.count() : 0;
}

/* ---- reductions and amplification ----------------------------------- */

rn_status rn_sat_to_path(const rn_cnf* cnf, rn_instance** out) {
  return guard([&] {
    if (!cnf || !out) throw robustnet::Error("null argument");
    *out = new rn_instance{robustnet::sat_to_shortest_path(cnf->formula).instance};
  });
}

rn_status rn_sat_to_cut(const rn_cnf* cnf, rn_instance** out) {
  return guard([&] {
    if (!cnf || !out) throw robustnet::Error("null argument");
    *out = new rn_instance{robustnet::sat_to_cut(cnf->formula).instance};
  });
}

rn_status rn_amplify(const rn_instance* base, int levels, rn_amplify_mode mode,
                     rn_instance** out, char** meta_out) {
  return guard([&] {
    if (!base || !out) throw robustnet::Error("null argument");
    robustnet::AmplifyParams params;
    params.levels = levels;
    params.mode = mode == RN_MODE_COMPRESSED ? robustnet::AmplifyMode::compressed
                                             : robustnet::AmplifyMode::faithful;
    robustnet::PairIndex pairs;
    if (levels > 0) pairs = robustnet::pairs_from_instance(base->instance);
    robustnet::Amplified amplified = robustnet::amplify(base->instance, pairs, params);
    if (meta_out) {
      std::ostringstream meta;
      meta << "# levels " << amplified.meta.levels << " mode "
           << robustnet::amplify_mode_name(amplified.meta.mode) << '\n';
      meta << "# expected-gap " << amplified.meta.expected_gap << '\n';
      meta << "# edges " << amplified.meta.edge_count << " scenarios "
           << amplified.meta.scenario_count << " max-row-nonzeros "
           << amplified.meta.max_row_nonzeros << '\n';
      *meta_out = copy_string(meta.str());
    }
    *out = new rn_instance{std::move(amplified.instance)};
  });
}

rn_status rn_implicit_create(const rn_instance* base, int levels, rn_implicit** out) {
  return guard([&] {
    if (!base || !out) throw robustnet::Error("null argument");
    auto pairs = robustnet::pairs_from_instance(base->instance);
    *out = new rn_implicit{robustnet::ImplicitInstance(base->instance, pairs, levels)};
  });
}

void rn_implicit_free(rn_implicit* implicit) { delete implicit; }

rn_status rn_implicit_counts(const rn_implicit* implicit, uint64_t* edges_out,
                             uint64_t* scenarios_out, uint64_t* expected_gap_out) {
  return guard([&] {
    if (!implicit) throw robustnet::Error("null argument");
    if (edges_out) *edges_out = implicit->implicit.edge_count();
    if (scenarios_out) *scenarios_out = implicit->implicit.scenario_count();
    if (expected_gap_out) *expected_gap_out = implicit->implicit.expected_gap();
  });
}

rn_status rn_implicit_cost(const rn_implicit* implicit, uint64_t edge, uint64_t scenario,
                           int64_t* cost_out) {
  return guard([&] {
    if (!implicit || !cost_out) throw robustnet::Error("null argument");
    *cost_out = implicit->implicit.cost(edge, scenario);
  });
}

rn_status rn_path_to_tree(const rn_instance* path_instance, const int* path_edges,
                          int path_edge_count, rn_instance** tree_out,
                          rn_result** tree_solution) {
  return guard([&] {
    if (!path_instance || !path_edges || !tree_out) throw robustnet::Error("null argument");
    robustnet::Solution path =
        robustnet::make_solution(std::vector<int>(path_edges, path_edges + path_edge_count));
    auto transform = robustnet::path_to_tree(path_instance->instance, path);
    if (tree_solution) {
      robustnet::SolverResult result;
      result.solution = transform.solution;
      result.value = robustnet::minmax_value(transform.instance, transform.solution);
      result.objective = robustnet::Objective::minmax;
      result.method = robustnet::SolverResult::Method::brute;
      *tree_solution = new rn_result{std::move(result)};
    }
    *tree_out = new rn_instance{std::move(transform.instance)};
  });
}

rn_status rn_tree_to_path(const rn_instance* tree_instance, const int* tree_edges,
                          int tree_edge_count, rn_instance** path_out,
                          rn_result** path_solution) {
  return guard([&] {
    if (!tree_instance || !tree_edges || !path_out) throw robustnet::Error("null argument");
    robustnet::Solution tree =
        robustnet::make_solution(std::vector<int>(tree_edges, tree_edges + tree_edge_count));
    auto transform = robustnet::tree_to_path(tree_instance->instance, tree);
    if (path_solution) {
      robustnet::SolverResult result;
      result.solution = transform.solution;
      result.value = robustnet::minmax_value(transform.instance, transform.solution);
      result.objective = robustnet::Objective::minmax;
      result.method = robustnet::SolverResult::Method::brute;
      *path_solution = new rn_result{std::move(result)};
    }
    *path_out = new rn_instance{std::move(transform.instance)};
  });
}

/* ---- solving --------------------------------------------------------- */

rn_status rn_solve(const rn_instance* inst, rn_objective objective, rn_method method,
                   rn_result** out) {
  return guard([&] {
    if (!inst || !out) throw robustnet::Error("null argument");
    auto report = robustnet::validate_instance(inst->instance);
    if (!report.ok()) throw robustnet::Error("invalid instance: " + report.violations.front());
    robustnet::SolveMethod solve_method = robustnet::SolveMethod::automatic;
    if (method == RN_METHOD_BRUTE) solve_method = robustnet::SolveMethod::brute;
    if (method == RN_METHOD_DP) solve_method = robustnet::SolveMethod::pareto_dp;
    robustnet::SolverResult result;
    switch (objective) {
      case RN_OBJECTIVE_MINMAX:
        result = robustnet::solve_minmax_exact(inst->instance, solve_method);
        break;
      case RN_OBJECTIVE_REGRET:
        result = robustnet::solve_regret_exact(inst->instance, solve_method);
        break;
      case RN_OBJECTIVE_MEAN:
        result = robustnet::mean_scenario_heuristic(inst->instance, robustnet::Objective::minmax);
        break;
      default:
        throw robustnet::Error("unknown objective code");
    }
    *out = new rn_result{std::move(result)};
  });
}

void rn_result_free(rn_result* result) { delete result; }

int64_t rn_result_value(const rn_result* result) { return result ? result->result.value : 0; }

const char* rn_result_method(const rn_result* result) {
  return result ? robustnet::method_name(result->result.method) : "?";
}

int rn_result_edge_count(const rn_result* result) {
  return result ? result->result.solution.size() : 0;
}

int rn_result_edge(const rn_result* result, int index) {
  if (!result || index < 0 || index >= result->result.solution.size()) return -1;
  return result->result.solution.edge_ids[static_cast<std::size_t>(index)];
}

rn_status rn_result_solution_text(const rn_result* result, char** out_text) {
  return guard([&] {
    if (!result || !out_text) throw robustnet::Error("null argument");
    *out_text =
        copy_string(robustnet::serialize_solution(result->result.value, result->result.solution));
  });
}

rn_status rn_solution_parse(const char* text, int64_t* value_out, int** edges_out,
                            int* edge_count_out) {
  return guard([&] {
    if (!text) throw robustnet::Error("null argument");
    auto file = robustnet::parse_solution(text);
    if (value_out) *value_out = file.value;
    if (edges_out && edge_count_out) {
      *edge_count_out = file.solution.size();
      *edges_out = new int[file.solution.edge_ids.size()];
      std::memcpy(*edges_out, file.solution.edge_ids.data(),
                  file.solution.edge_ids.size() * sizeof(int));
    }
  });
}

void rn_ints_free(int* values) { delete[] values; }

/* ---- verification ---------------------------------------------------- */

rn_status rn_check_gap(const rn_cnf* cnf, const char* formula_id, rn_family family, int levels,
                       rn_amplify_mode mode, uint64_t samples, uint64_t seed,
                       rn_gap_report** out) {
  return guard([&] {
    if (!cnf || !out) throw robustnet::Error("null argument");
    robustnet::CheckGapOptions options;
    if (samples > 0) options.samples = samples;
    options.seed = seed;
    robustnet::AmplifyMode amode = mode == RN_MODE_COMPRESSED
                                       ? robustnet::AmplifyMode::compressed
                                       : robustnet::AmplifyMode::faithful;
    *out = new rn_gap_report{robustnet::check_gap(cnf->formula,
                                                  formula_id ? formula_id : "formula",
                                                  to_family(family), levels, amode, options)};
  });
}

void rn_gap_report_free(rn_gap_report* report) { delete report; }

int rn_gap_report_pass(const rn_gap_report* report) {
  return report && report->report.pass ? 1 : 0;
}

rn_status rn_gap_report_text(const rn_gap_report* report, int include_timings, char** out_text) {
  return guard([&] {
    if (!report || !out_text) throw robustnet::Error("null argument");
    *out_text = copy_string(report->report.to_text(include_timings != 0));
  });
}

rn_status rn_gap_report_csv(const rn_gap_report* report, int include_header, char** out_text) {
  return guard([&] {
    if (!report || !out_text) throw robustnet::Error("null argument");
    std::string text;
    if (include_header) text = robustnet::GapReport::csv_header() + "\n";
    text += report->report.to_csv_row() + "\n";
    *out_text = copy_string(text);
  });
}

rn_status rn_regret_identity(const rn_instance* inst, char** report_out, int* holds_out) {
  return guard([&] {
    if (!inst) throw robustnet::Error("null argument");
    auto report = robustnet::check_regret_equals_minmax(inst->instance);
    if (report_out) *report_out = copy_string(report.to_text());
    if (holds_out) *holds_out = report.holds() ? 1 : 0;
  });
}

rn_status rn_bench(const char* config_text, uint64_t seed, int jobs, char** csv_out,
                   int* bound_violated_out) {
  return guard([&] {
    if (!config_text || !csv_out) throw robustnet::Error("null argument");
    auto config = robustnet::BenchConfig::parse(config_text);
    auto outcome = robustnet::empirical_ratios(config, seed, jobs);
    *csv_out = copy_string(outcome.csv);
    if (bound_violated_out) *bound_violated_out = outcome.bound_violated ? 1 : 0;
  });
}

}  // extern "C"
