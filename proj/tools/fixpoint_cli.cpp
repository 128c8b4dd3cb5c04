// Command-line front end: instance generation, solving, verification, and
// scaling benchmarks. Exit codes: 0 pass, 1 usage error, 2 residual failure,
// 3 invariant breach.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fixpoint/bench.hpp"
#include "fixpoint/errors.hpp"
#include "fixpoint/instance.hpp"
#include "fixpoint/verify.hpp"

namespace {

using namespace fixpoint;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitResidual = 2;
constexpr int kExitBreach = 3;

int cmd_gen(const std::string& family_name, int k, double eps, double gamma,
            const std::string& norm_name, std::uint64_t seed, int count,
            const std::string& out_dir) {
  Family family = family_from_string(family_name);
  NormKind norm = norm_from_string(norm_name);
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    InstanceFile inst = generate_instance(seed + i, family, k, eps, gamma, norm);
    std::string path = out_dir + "/" + inst.id() + ".json";
    save_instance(inst, path);
    std::cout << inst.id() << " -> " << path << "\n";
  }
  return kExitPass;
}

int cmd_solve(const std::string& instance_path, const std::string& solver_name,
              double eps_override) {
  InstanceFile inst = load_instance(instance_path);
  SolverKind solver = solver_from_string(solver_name);
  std::optional<double> eps;
  if (eps_override > 0.0) eps = eps_override;
  ResultRow row = run_solver(inst, solver, eps);
  std::cout << row.to_json() << "\n";
  return row.pass ? kExitPass : kExitResidual;
}

int cmd_bench(const std::string& config_path, const std::string& out_override) {
  std::ifstream in(config_path);
  if (!in) throw ContractViolation("cannot open config file: " + config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  BenchmarkConfig config = BenchmarkConfig::from_json(buf.str());
  if (!out_override.empty()) config.out_path = out_override;
  BenchResult result = run_benchmark(config);
  std::cout << result.summary_json << "\n";
  return result.all_pass ? kExitPass : kExitResidual;
}

int cmd_verify(const std::string& instance_path, int n_pairs) {
  InstanceFile inst = load_instance(instance_path);
  MapFn f = [&inst](const Point& x) { return inst.map.evaluate(x); };
  const auto& prob = inst.problem;
  nlohmann::json report;
  report["instance_id"] = inst.id();

  auto certified = inst.map.lipschitz(prob.norm);
  double required_L = certified.value_or(1.0);
  report["certified_lipschitz"] = certified ? format_real(*certified) : "unknown";
  if (auto v = check_nonexpansive_pairs(f, prob.k, n_pairs, prob.norm, required_L)) {
    report["lipschitz_check"] = nlohmann::json::parse(v->to_json());
    std::cout << report.dump(2) << "\n";
    return kExitBreach;
  }
  report["lipschitz_check"] = "pass";

  if (inst.known_fixed_point) {
    double r = norm_distance(f(*inst.known_fixed_point), *inst.known_fixed_point,
                             prob.norm);
    report["known_fixed_point_residual"] = format_real(r);
    if (r > kSlack) {
      std::cout << report.dump(2) << "\n";
      return kExitBreach;
    }
  }

  if (prob.k <= 3 && 1.0 / prob.eps <= 4096.0) {
    Point g = grid_search_fixed_point(f, prob.eps, prob.k, prob.norm);
    double r = norm_distance(f(g), g, prob.norm);
    report["grid_residual"] = format_real(r);
    if (r > prob.eps + kSlack) {
      std::cout << report.dump(2) << "\n";
      return kExitResidual;
    }
  }

  if (prob.gamma) {
    auto outcome = banach_iterate(f, prob.eps, *prob.gamma, Point(prob.k, 0.5),
                                  prob.norm);
    report["banach_queries"] = outcome.result.stats.queries;
    if (outcome.violation) {
      report["banach_check"] = nlohmann::json::parse(outcome.violation->to_json());
      std::cout << report.dump(2) << "\n";
      return kExitBreach;
    }
    report["banach_check"] = "pass";
  }

  std::cout << report.dump(2) << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed-point solver toolkit"};
  app.require_subcommand(1);

  std::string family = "radial", norm = "linf", out, instance_path, solver,
              config_path;
  int k = 2, count = 1, n_pairs = 10000;
  double eps = 1e-3, gamma = 0.5, eps_override = 0.0;
  std::uint64_t seed = 1;

  auto* gen = app.add_subcommand("gen", "generate certified instance files");
  gen->add_option("--family", family, "radial | affine | shapley");
  gen->add_option("--k", k, "dimension");
  gen->add_option("--eps", eps, "target precision");
  gen->add_option("--gamma", gamma, "contraction margin; 0 means nonexpansive");
  gen->add_option("--norm", norm, "linf | l1");
  gen->add_option("--seed", seed, "base seed");
  gen->add_option("--count", count, "number of instances (seeds seed..seed+count-1)");
  gen->add_option("--out", out, "output directory")->required();

  auto* solve = app.add_subcommand("solve", "solve one instance file");
  solve->add_option("instance", instance_path, "instance JSON path")->required();
  solve->add_option("--solver", solver, "linf-decomp | l1-recursive | banach | grid")
      ->required();
  solve->add_option("--eps", eps_override, "override the instance's eps");

  auto* bench = app.add_subcommand("bench", "run a benchmark sweep");
  bench->add_option("--config", config_path, "benchmark config JSON")->required();
  bench->add_option("--out", out, "override the config's CSV output path");

  auto* verify = app.add_subcommand("verify", "run independent checkers on an instance");
  verify->add_option("instance", instance_path, "instance JSON path")->required();
  verify->add_option("--pairs", n_pairs, "sampled Lipschitz pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(family, k, eps, gamma, norm, seed, count, out);
    if (solve->parsed()) return cmd_solve(instance_path, solver, eps_override);
    if (bench->parsed()) return cmd_bench(config_path, out);
    if (verify->parsed()) return cmd_verify(instance_path, n_pairs);
  } catch (const fixpoint::ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fixpoint::InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return kExitBreach;
  } catch (const fixpoint::OracleContractViolation& e) {
    std::cerr << "oracle contract violation: " << e.what() << "\n";
    return kExitBreach;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
