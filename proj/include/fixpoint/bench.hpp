#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fixpoint/instance.hpp"
#include "fixpoint/session.hpp"

namespace fixpoint {

enum class SolverKind { LInfDecomp, L1Recursive, Banach, Grid };
std::string to_string(SolverKind solver);
SolverKind solver_from_string(const std::string& name);

struct ResultRow {
  std::string instance_id;
  SolverKind solver = SolverKind::Banach;
  int k = 0;
  double eps = 0.0;
  std::optional<double> gamma;
  NormKind norm = NormKind::LInf;
  long queries = 0;
  long rounds = 0;
  double wall_time_s = 0.0;
  double residual = 0.0;  // recomputed from one fresh oracle call
  bool pass = false;
  std::optional<DecompositionInfo> decomposition;

  std::string csv_line() const;
  std::string to_json() const;
};

// Fixed column order; every CSV starts with this line.
std::string csv_header();

// Dispatches by solver kind, re-verifies the residual with a fresh oracle
// evaluation, and fills the row. Incompatible solver/instance combinations
// (norm mismatch, banach without gamma, grid outside its scale guard) throw
// ContractViolation.
ResultRow run_solver(const InstanceFile& instance, SolverKind solver,
                     std::optional<double> eps_override = std::nullopt);

struct BenchmarkConfig {
  std::vector<Family> families;
  std::vector<int> ks;
  std::vector<double> eps_list;
  std::vector<double> gamma_list;
  NormKind norm = NormKind::LInf;
  std::vector<std::uint64_t> seeds;
  std::vector<SolverKind> solvers;
  std::string out_path;       // CSV destination; summary lands next to it
  long max_rows = 20000;      // cross-product cap
  int threads = 1;

  static BenchmarkConfig from_json(const std::string& json_text);
};

struct BenchResult {
  std::vector<ResultRow> rows;
  std::string summary_json;
  bool all_pass = false;
};

// Least-squares slope of log(queries) against log(log2(1/eps_eff)).
// Requires at least two distinct abscissae.
double fit_exponent(const std::vector<std::pair<double, long>>& eps_eff_queries);

// Runs the cross product, writes the CSV to config.out_path (when set) plus
// a ".summary.json" sibling; rows run in parallel when threads > 1.
BenchResult run_benchmark(const BenchmarkConfig& config);

}  // namespace fixpoint
