#include "fixpoint/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fixpoint/errors.hpp"
#include "fixpoint/solver_l1.hpp"
#include "fixpoint/solver_linf.hpp"
#include "fixpoint/verify.hpp"

namespace fixpoint {

std::string to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::LInfDecomp: return "linf-decomp";
    case SolverKind::L1Recursive: return "l1-recursive";
    case SolverKind::Banach: return "banach";
    case SolverKind::Grid: return "grid";
  }
  throw ContractViolation("to_string: bad SolverKind");
}

SolverKind solver_from_string(const std::string& name) {
  if (name == "linf-decomp") return SolverKind::LInfDecomp;
  if (name == "l1-recursive") return SolverKind::L1Recursive;
  if (name == "banach") return SolverKind::Banach;
  if (name == "grid") return SolverKind::Grid;
  throw ContractViolation("unknown solver: " + name);
}

std::string csv_header() {
  return "instance_id,solver,k,eps,gamma,norm,queries,rounds,wall_time_s,residual,pass";
}

std::string ResultRow::csv_line() const {
  std::ostringstream out;
  out << instance_id << ',' << to_string(solver) << ',' << k << ','
      << format_real(eps) << ',' << (gamma ? format_real(*gamma) : "") << ','
      << to_string(norm) << ',' << queries << ',' << rounds << ','
      << format_real(wall_time_s) << ',' << format_real(residual) << ','
      << (pass ? "true" : "false");
  return out.str();
}

std::string ResultRow::to_json() const {
  nlohmann::json j;
  j["instance_id"] = instance_id;
  j["solver"] = to_string(solver);
  j["k"] = k;
  j["eps"] = format_real(eps);
  if (gamma) j["gamma"] = format_real(*gamma);
  j["norm"] = to_string(norm);
  j["queries"] = queries;
  j["rounds"] = rounds;
  j["wall_time_s"] = format_real(wall_time_s);
  j["residual"] = format_real(residual);
  j["pass"] = pass;
  if (decomposition) {
    j["decomposition"] = {{"q_a", decomposition->q_a},
                          {"q_b", decomposition->q_b},
                          {"q_total", decomposition->q_total},
                          {"product_bound_ok", decomposition->product_bound_ok}};
  }
  return j.dump();
}

ResultRow run_solver(const InstanceFile& instance, SolverKind solver,
                     std::optional<double> eps_override) {
  const auto& prob = instance.problem;
  const int k = prob.k;
  const double eps = eps_override.value_or(prob.eps);
  if (eps <= 0.0) throw ContractViolation("run_solver: eps must be positive");
  MapFn f = [&instance](const Point& x) { return instance.map.evaluate(x); };

  ResultRow row;
  row.instance_id = instance.id();
  row.solver = solver;
  row.k = k;
  row.eps = eps;
  row.gamma = prob.gamma;
  row.norm = prob.norm;

  SolveResult result;
  switch (solver) {
    case SolverKind::LInfDecomp:
      if (prob.norm != NormKind::LInf) {
        throw ContractViolation("linf-decomp requires an linf instance");
      }
      result = solve_linf_top(f, k, eps);
      break;
    case SolverKind::L1Recursive:
      if (prob.norm != NormKind::L1) {
        throw ContractViolation("l1-recursive requires an l1 instance");
      }
      result = prob.gamma ? solve_l1_contraction(f, k, eps, *prob.gamma)
                          : solve_l1_nonexp(f, k, eps);
      break;
    case SolverKind::Banach: {
      if (!prob.gamma) {
        throw ContractViolation("banach requires a contraction instance (gamma)");
      }
      auto outcome =
          banach_iterate(f, eps, *prob.gamma, Point(k, 0.5), prob.norm);
      result = std::move(outcome.result);
      if (outcome.violation) {
        throw InvariantBreach(outcome.violation->detail);
      }
      break;
    }
    case SolverKind::Grid: {
      auto t0 = std::chrono::steady_clock::now();
      long calls = 0;
      MapFn counted = [&](const Point& x) {
        ++calls;
        return f(x);
      };
      result.answer = grid_search_fixed_point(counted, eps, k, prob.norm);
      result.stats.queries = calls;
      result.stats.rounds = 1;
      result.stats.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      break;
    }
  }

  row.queries = result.stats.queries;
  row.rounds = result.stats.rounds;
  row.wall_time_s = result.stats.wall_time;
  row.decomposition = result.decomposition;
  row.residual = norm_distance(f(result.answer), result.answer, prob.norm);
  row.pass = row.residual <= eps + kSlack;
  return row;
}

double fit_exponent(const std::vector<std::pair<double, long>>& eps_eff_queries) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [eps_eff, q] : eps_eff_queries) {
    if (eps_eff <= 0.0 || eps_eff >= 1.0 || q < 1) {
      throw ContractViolation("fit_exponent: need eps in (0,1) and queries >= 1");
    }
    pts.emplace_back(std::log(std::log2(1.0 / eps_eff)),
                     std::log(static_cast<double>(q)));
  }
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (denom <= 0.0) {
    throw ContractViolation("fit_exponent: need two distinct abscissae");
  }
  return (n * sxy - sx * sy) / denom;
}

BenchmarkConfig BenchmarkConfig::from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  BenchmarkConfig cfg;
  for (const auto& s : j.at("families")) {
    cfg.families.push_back(family_from_string(s.get<std::string>()));
  }
  for (const auto& v : j.at("k")) cfg.ks.push_back(v.get<int>());
  for (const auto& v : j.at("eps")) cfg.eps_list.push_back(parse_real(v.get<std::string>()));
  if (j.contains("gamma")) {
    for (const auto& v : j.at("gamma")) {
      cfg.gamma_list.push_back(parse_real(v.get<std::string>()));
    }
  }
  cfg.norm = norm_from_string(j.at("norm").get<std::string>());
  for (const auto& v : j.at("seeds")) cfg.seeds.push_back(v.get<std::uint64_t>());
  for (const auto& s : j.at("solvers")) {
    cfg.solvers.push_back(solver_from_string(s.get<std::string>()));
  }
  if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
  if (j.contains("max_rows")) cfg.max_rows = j.at("max_rows").get<long>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (cfg.families.empty() || cfg.ks.empty() || cfg.eps_list.empty() ||
      cfg.seeds.empty() || cfg.solvers.empty()) {
    throw ContractViolation("benchmark config: all parameter lists must be non-empty");
  }
  return cfg;
}

BenchResult run_benchmark(const BenchmarkConfig& config) {
  struct Job {
    InstanceFile instance;
    SolverKind solver;
    double eps;
  };
  std::vector<Job> jobs;
  std::vector<double> gammas = config.gamma_list;
  if (gammas.empty()) gammas.push_back(0.0);  // 0 encodes "nonexpansive"
  for (Family family : config.families) {
    for (int k : config.ks) {
      for (double gamma : gammas) {
        for (std::uint64_t seed : config.seeds) {
          for (double eps : config.eps_list) {
            InstanceFile inst =
                generate_instance(seed, family, k, eps, gamma, config.norm);
            for (SolverKind solver : config.solvers) {
              jobs.push_back({inst, solver, eps});
            }
          }
        }
      }
    }
  }
  if (static_cast<long>(jobs.size()) > config.max_rows) {
    throw ContractViolation("benchmark config: cross product exceeds max_rows");
  }

  BenchResult out;
  out.rows.resize(jobs.size());
  auto worker = [&](size_t begin, size_t stride) {
    for (size_t i = begin; i < jobs.size(); i += stride) {
      out.rows[i] = run_solver(jobs[i].instance, jobs[i].solver, jobs[i].eps);
    }
  };
  int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::future<void>> futures;
    for (int t = 0; t < threads; ++t) {
      futures.push_back(std::async(std::launch::async, worker, t, threads));
    }
    for (auto& fu : futures) fu.get();
  }

  out.all_pass = true;
  // Fits group passing rows by (solver, k) over the per-row effective eps.
  std::map<std::pair<std::string, int>, std::vector<std::pair<double, long>>> groups;
  nlohmann::json decomposition_runs = nlohmann::json::array();
  for (const auto& row : out.rows) {
    if (!row.pass) {
      out.all_pass = false;
      continue;
    }
    groups[{to_string(row.solver), row.k}].emplace_back(row.eps, row.queries);
    if (row.decomposition) {
      decomposition_runs.push_back({{"instance_id", row.instance_id},
                                    {"eps", format_real(row.eps)},
                                    {"q_a", row.decomposition->q_a},
                                    {"q_b", row.decomposition->q_b},
                                    {"q_total", row.decomposition->q_total},
                                    {"product_bound_ok",
                                     row.decomposition->product_bound_ok}});
    }
  }
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& [key, pts] : groups) {
    std::set<double> distinct;
    for (const auto& [e, q] : pts) distinct.insert(e);
    if (distinct.size() < 2) continue;
    fits.push_back({{"solver", key.first},
                    {"k", key.second},
                    {"rows", pts.size()},
                    {"exponent", format_real(fit_exponent(pts))}});
  }
  nlohmann::json summary;
  summary["fits"] = fits;
  summary["decomposition_runs"] = decomposition_runs;
  summary["rows"] = out.rows.size();
  summary["all_pass"] = out.all_pass;
  out.summary_json = summary.dump(2);

  if (!config.out_path.empty()) {
    std::ofstream csv(config.out_path);
    if (!csv) throw ContractViolation("cannot open output path: " + config.out_path);
    csv << csv_header() << '\n';
    for (const auto& row : out.rows) csv << row.csv_line() << '\n';
    std::ofstream sj(config.out_path + ".summary.json");
    sj << out.summary_json << '\n';
  }
  return out;
}

}  // namespace fixpoint
