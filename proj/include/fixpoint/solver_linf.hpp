#pragma once

#include <memory>
#include <string>

#include "fixpoint/session.hpp"

namespace fixpoint {

// Dagger solver for an arbitrary sub-box of [0,1]^k under the linf norm:
// k = 1 bisection, k = 2 planar case analysis, k > 2 decomposition with the
// first k-2 coordinates inner (recursive) and the last 2 outer (planar).
std::unique_ptr<Session> make_linf_dagger_session(const BoxSpec& box, double eps);

// Recursion tree of the split, e.g. k = 5 -> "((1+2)+2)".
std::string linf_block_structure(int k);

// Top-level entry point: eps-fixed point of a nonexpansive linf map on
// [0,1]^k. Fills SolveResult::decomposition for k > 2.
SolveResult solve_linf_top(const MapFn& f, int k, double eps);

// 1-dimensional dagger solve on an explicit box.
SolveResult solve_interval_dagger(const MapFn& f, const BoxSpec& box, double eps);

// 2-dimensional solvers; `solve_planar_nonexp` expects range inside the box,
// `solve_planar_dagger` allows range in the inflated box.
SolveResult solve_planar_nonexp(const MapFn& f, const BoxSpec& box, double eps);
SolveResult solve_planar_dagger(const MapFn& f, const BoxSpec& box, double eps);

}  // namespace fixpoint
