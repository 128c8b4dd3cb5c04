#pragma once

#include "fixpoint/session.hpp"

namespace fixpoint {

// Binary search for the 1-dimensional dagger problem: f maps [lo, hi] into
// [lo - eps, hi + eps] and is nonexpansive; find x with |f(x) - x| <= eps.
//
// The loop keeps endpoints with known displacement sign (f(lo) > lo and
// f(hi) < hi) and bisects; every queried point whose residual is within eps
// is returned immediately. For a genuine oracle this uses at most
// ceil(log2(width / eps)) + 2 queries; the internal cap sits two iterations
// beyond that, and reaching it means the answers were not consistent with any
// nonexpansive map, reported as InvariantBreach.
class BisectionSession final : public Session {
 public:
  BisectionSession(double lo, double hi, double eps);

  long rounds() const override { return queries_; }

 private:
  SessionStatus advance(const std::optional<Point>& answer) override;

  enum class Phase { QueryLo, QueryHi, QueryMid };
  Phase phase_ = Phase::QueryLo;
  double lo_, hi_, eps_, mid_ = 0.0;
  long queries_ = 0;
  long cap_;
};

}  // namespace fixpoint
