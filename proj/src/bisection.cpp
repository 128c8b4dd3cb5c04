#include "fixpoint/bisection.hpp"

#include <cmath>

#include "fixpoint/errors.hpp"

namespace fixpoint {

BisectionSession::BisectionSession(double lo, double hi, double eps)
    : Session(BoxSpec({lo}, {hi}), inflate(BoxSpec({lo}, {hi}), eps)),
      lo_(lo),
      hi_(hi),
      eps_(eps) {
  if (eps <= 0.0) throw ContractViolation("bisection: eps must be positive");
  double w = hi_ - lo_;
  long mids = w > eps_ ? static_cast<long>(std::ceil(std::log2(w / eps_))) : 0;
  cap_ = mids + 4;
}

SessionStatus BisectionSession::advance(const std::optional<Point>& answer) {
  if (!answer.has_value()) {
    return SessionStatus::pending({lo_});
  }
  double fv = (*answer)[0];
  ++queries_;
  switch (phase_) {
    case Phase::QueryLo:
      if (std::abs(fv - lo_) <= eps_ + kSlack) return SessionStatus::done({lo_});
      // Range box forces fv >= lo - eps, so the displacement here is upward.
      phase_ = Phase::QueryHi;
      return SessionStatus::pending({hi_});
    case Phase::QueryHi:
      if (std::abs(fv - hi_) <= eps_ + kSlack) return SessionStatus::done({hi_});
      phase_ = Phase::QueryMid;
      break;
    case Phase::QueryMid:
      if (std::abs(fv - mid_) <= eps_ + kSlack) return SessionStatus::done({mid_});
      if (fv > mid_) {
        lo_ = mid_;
      } else {
        hi_ = mid_;
      }
      break;
  }
  if (queries_ >= cap_) {
    throw InvariantBreach(
        "bisection: window collapsed without an eps-fixed point; "
        "oracle is not nonexpansive");
  }
  mid_ = 0.5 * (lo_ + hi_);
  return SessionStatus::pending({mid_});
}

}  // namespace fixpoint
