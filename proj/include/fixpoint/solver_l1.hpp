#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "fixpoint/session.hpp"

namespace fixpoint {

struct DominatingCoordinate {
  int index;  // 0 or 1
  int sign;   // +1 if fx exceeds x on that coordinate, else -1
};

// Largest displacement among the first two coordinates; ties break to the
// smaller index. Throws InvariantBreach when both displacements vanish (the
// caller only asks after establishing residual > eps, so this signals a
// broken oracle).
DominatingCoordinate select_dominating_coordinate(const Point& x, const Point& fx);

// Dominating-coordinate window solver for a (1-gamma)-contraction on [0,1]^k
// under the l1 norm, k even. Each round fixes the first two coordinates at
// the window midpoint, recursively solves the remaining k-2 coordinates to
// precision eps*gamma/4, and on failure halves the window along a weakly
// dominating coordinate (offset by eps*gamma/8 so the true fixed point stays
// strictly inside).
class L1ContractionSession final : public Session {
 public:
  L1ContractionSession(int k, double eps, double gamma);

  long rounds() const override { return round_; }
  int recursion_depth() const override;
  const std::vector<std::pair<Point, Point>>& window_history() const {
    return history_;
  }

 private:
  SessionStatus advance(const std::optional<Point>& answer) override;
  SessionStatus begin_round();
  SessionStatus check_candidate(const Point& fx);

  int k_;
  double eps_, gamma_;
  Point pmin_, pmax_, pmid_;
  std::unique_ptr<L1ContractionSession> inner_;
  Point x_, pending_;
  std::map<Point, Point> seen_;  // full query -> answer, current round
  long round_ = 0;
  long cap_;
  std::vector<std::pair<Point, Point>> history_;
  int max_child_depth_ = 0;
  enum class Phase { Inner, Check };
  Phase phase_ = Phase::Check;
};

// Precision floor: recursion multiplies the target precision by gamma/4 per
// level, and the implementation refuses instances whose innermost precision
// would drop below 1e-9.
bool l1_precision_feasible(int k, double eps, double gamma);

// Contraction solver entry point; odd k is padded with a zero output
// coordinate and the projected answer re-verified with one oracle call.
SolveResult solve_l1_contraction(const MapFn& f, int k, double eps, double gamma);

// Nonexpansive entry point: scale into a (1 - eps/(2k'))-contraction, solve
// to eps/2, re-verify the answer on the original map.
SolveResult solve_l1_nonexp(const MapFn& f, int k, double eps);

// True when the scaled problem produced by solve_l1_nonexp clears the
// precision floor.
bool l1_nonexp_feasible(int k, double eps);

}  // namespace fixpoint
