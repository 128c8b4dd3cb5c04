#include "fixpoint/solver_linf.hpp"

#include <algorithm>

#include "fixpoint/bisection.hpp"
#include "fixpoint/decompose.hpp"
#include "fixpoint/errors.hpp"
#include "fixpoint/planar.hpp"

namespace fixpoint {

std::unique_ptr<Session> make_linf_dagger_session(const BoxSpec& box, double eps) {
  const int k = box.dim();
  if (k == 1) {
    return std::make_unique<BisectionSession>(box.lower[0], box.upper[0], eps);
  }
  if (k == 2) {
    return std::make_unique<PlanarDaggerSession>(box, eps);
  }
  SessionFactory inner = [](const BoxSpec& b, double e) {
    return make_linf_dagger_session(b, e);
  };
  SessionFactory outer = [](const BoxSpec& b, double e) -> std::unique_ptr<Session> {
    return std::make_unique<PlanarDaggerSession>(b, e);
  };
  return std::make_unique<DecomposeSession>(box.slice(0, k - 2), box.slice(k - 2, k),
                                            eps, std::move(inner), std::move(outer));
}

std::string linf_block_structure(int k) {
  if (k <= 0) throw ContractViolation("linf_block_structure: k must be >= 1");
  if (k <= 2) return std::to_string(k);
  return "(" + linf_block_structure(k - 2) + "+2)";
}

static void fill_decomposition_info(Session& session, SolveResult& result) {
  auto* decomp = dynamic_cast<DecomposeSession*>(&session);
  if (decomp == nullptr) return;
  DecompositionInfo info;
  info.q_total = result.stats.queries;
  info.q_b = decomp->rounds();
  const auto& counts = decomp->inner_query_counts();
  info.q_a = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  info.product_bound_ok = info.q_total <= info.q_a * info.q_b;
  result.outer_transcript = decomp->outer_transcript();
  result.decomposition = info;
}

SolveResult solve_linf_top(const MapFn& f, int k, double eps) {
  auto session = make_linf_dagger_session(BoxSpec::unit(k), eps);
  SolveResult result = run_session(*session, f);
  fill_decomposition_info(*session, result);
  return result;
}

SolveResult solve_interval_dagger(const MapFn& f, const BoxSpec& box, double eps) {
  if (box.dim() != 1) throw ContractViolation("solve_interval_dagger: box must be 1D");
  BisectionSession session(box.lower[0], box.upper[0], eps);
  return run_session(session, f);
}

SolveResult solve_planar_nonexp(const MapFn& f, const BoxSpec& box, double eps) {
  PlanarDaggerSession session(box, eps);
  return run_session(session, f);
}

SolveResult solve_planar_dagger(const MapFn& f, const BoxSpec& box, double eps) {
  PlanarDaggerSession session(box, eps);
  return run_session(session, f);
}

}  // namespace fixpoint
