#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fixpoint/maps.hpp"
#include "fixpoint/session.hpp"
#include "fixpoint/transcript.hpp"

namespace fixpoint {

struct ViolationReport {
  enum class Kind { Lipschitz, TranscriptConsistency, Residual, RangeBox };
  Kind kind;
  Point witness_a, witness_b;  // offending pair (points or round payloads)
  int round_a = 0, round_b = 0;
  double measured = 0.0;
  double required = 0.0;
  std::string detail;

  std::string to_json() const;
};

struct BanachOutcome {
  SolveResult result;
  std::optional<ViolationReport> violation;  // iteration cap exceeded
};

// Value iteration x <- f(x) until the residual drops below eps. The cap is
// the closed-form geometric-convergence bound ceil(log(diam/eps) /
// -log(1-gamma)) + 2 with diam = k (l1) or 1 (linf).
BanachOutcome banach_iterate(const MapFn& f, double eps, double gamma,
                             const Point& x0, NormKind norm);

// Exhaustive lattice scan with spacing eps/4 (linf) or eps/(4k) (l1): the
// grid point nearest the true fixed point has residual at most
// 2 * (its distance to the fixed point) <= eps/2, so the argmin qualifies.
// Desk-scale guard: k <= 3 and 1/eps <= 4096.
Point grid_search_fixed_point(const MapFn& f, double eps, int k, NormKind norm);

// Sampled falsifier for the certified Lipschitz bound: seeded random pairs
// plus axis-aligned and near-boundary pairs. Passing proves nothing; a
// report is a definite witness.
std::optional<ViolationReport> check_nonexpansive_pairs(const MapFn& f, int k,
                                                        int n_pairs, NormKind norm,
                                                        double required_L,
                                                        std::uint64_t seed = 1);

// Pairwise outer-answer consistency of a decomposition transcript.
std::optional<ViolationReport> check_transcript_consistency(const Transcript& transcript);

}  // namespace fixpoint
