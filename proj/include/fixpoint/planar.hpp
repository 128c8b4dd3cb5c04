#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>

#include "fixpoint/session.hpp"

namespace fixpoint {

enum class PlanarCase { None, Direct, Corner, RepairY, RepairYPrime };

// 2-dimensional dagger solver: truncate the oracle into the domain box, find
// an eps-fixed point x* of the truncated map with a 1+1 decomposition of
// bisections, then repair by case analysis when the raw residual at x* still
// exceeds eps. The write-up's "assume f(x*)_i >= x*_i" normalization is
// realized by reflecting coordinates (conjugating the oracle with
// x -> lower + upper - x) and reflecting the answer back.
//
// Every returned candidate has had its residual verified against a raw
// oracle value; if all candidates fail, CaseAnalysisExhausted is thrown.
//
// `injected_inner` replaces the inner solve with a caller-supplied eps-fixed
// point of the truncated map; used by tests to steer the case analysis.
class PlanarDaggerSession final : public Session {
 public:
  PlanarDaggerSession(BoxSpec box, double eps,
                      std::optional<Point> injected_inner = std::nullopt);

  long rounds() const override { return queries_; }
  int recursion_depth() const override;
  PlanarCase resolved_case() const { return case_; }

 private:
  SessionStatus advance(const std::optional<Point>& answer) override;
  SessionStatus analyze(const Point& fxstar);
  SessionStatus emit(Point original_frame_query);
  Point reflect(const Point& p) const;

  BoxSpec box_;
  double eps_;
  std::optional<Point> injected_;
  std::unique_ptr<Session> sub_;  // 1+1 decomposition on the truncated map
  std::map<Point, Point> seen_;   // raw oracle values by query point

  Point xstar_;
  std::array<bool, 2> refl_{false, false};
  Point y_, yprime_, corner_;
  Point pending_;
  long queries_ = 0;
  PlanarCase case_ = PlanarCase::None;

  enum class Phase { Sub, QueryXStar, QueryCorner, QueryY, QueryYPrime };
  Phase phase_ = Phase::Sub;
};

}  // namespace fixpoint
