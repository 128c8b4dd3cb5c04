#include "fixpoint/planar.hpp"

#include <cmath>

#include "fixpoint/bisection.hpp"
#include "fixpoint/decompose.hpp"
#include "fixpoint/errors.hpp"

namespace fixpoint {

namespace {
SessionFactory bisection_factory() {
  return [](const BoxSpec& box, double eps) -> std::unique_ptr<Session> {
    return std::make_unique<BisectionSession>(box.lower[0], box.upper[0], eps);
  };
}
}  // namespace

PlanarDaggerSession::PlanarDaggerSession(BoxSpec box, double eps,
                                         std::optional<Point> injected_inner)
    : Session(box, inflate(box, eps)),
      box_(std::move(box)),
      eps_(eps),
      injected_(std::move(injected_inner)) {
  if (box_.dim() != 2) throw ContractViolation("planar: box must be 2-dimensional");
  if (eps <= 0.0) throw ContractViolation("planar: eps must be positive");
  if (injected_ && !box_.contains(*injected_, kSlack)) {
    throw ContractViolation("planar: injected inner point outside the box");
  }
}

int PlanarDaggerSession::recursion_depth() const {
  return sub_ ? 1 + sub_->recursion_depth() : 1;
}

Point PlanarDaggerSession::reflect(const Point& p) const {
  Point out = p;
  for (int i = 0; i < 2; ++i) {
    if (refl_[i]) out[i] = box_.lower[i] + box_.upper[i] - p[i];
  }
  return out;
}

SessionStatus PlanarDaggerSession::emit(Point q) {
  pending_ = std::move(q);
  return SessionStatus::pending(pending_);
}

SessionStatus PlanarDaggerSession::advance(const std::optional<Point>& answer) {
  if (!answer.has_value()) {
    if (injected_) {
      xstar_ = *injected_;
      phase_ = Phase::QueryXStar;
      return emit(xstar_);
    }
    sub_ = std::make_unique<DecomposeSession>(box_.slice(0, 1), box_.slice(1, 2),
                                              eps_, bisection_factory(),
                                              bisection_factory());
    const SessionStatus& st = sub_->status();
    if (st.kind != SessionStatus::Kind::PendingQuery) {
      throw InvariantBreach("planar: inner decomposition did not start with a query");
    }
    return emit(st.point);
  }

  const Point& w = *answer;
  ++queries_;
  seen_[pending_] = w;

  switch (phase_) {
    case Phase::Sub: {
      const SessionStatus& st = sub_->step(box_.clamp(w));
      if (st.kind == SessionStatus::Kind::Failed) {
        throw InvariantBreach("planar: inner solve failed: " + st.reason);
      }
      if (st.kind == SessionStatus::Kind::PendingQuery) {
        return emit(st.point);
      }
      xstar_ = st.point;
      auto it = seen_.find(xstar_);
      if (it != seen_.end()) {
        return analyze(it->second);
      }
      phase_ = Phase::QueryXStar;
      return emit(xstar_);
    }
    case Phase::QueryXStar:
      return analyze(w);
    case Phase::QueryCorner: {
      Point fv = reflect(w);
      if (norm_distance(fv, corner_, NormKind::LInf) <= eps_ + kSlack) {
        case_ = PlanarCase::Corner;
        return SessionStatus::done(reflect(corner_));
      }
      throw CaseAnalysisExhausted("planar: corner candidate failed verification");
    }
    case Phase::QueryY: {
      Point fv = reflect(w);
      if (norm_distance(fv, y_, NormKind::LInf) <= eps_ + kSlack) {
        case_ = PlanarCase::RepairY;
        return SessionStatus::done(reflect(y_));
      }
      // Remaining possibility: the untruncated coordinate overshoots at y,
      // so move on to the y' candidate prepared in analyze().
      phase_ = Phase::QueryYPrime;
      return emit(reflect(yprime_));
    }
    case Phase::QueryYPrime: {
      Point fv = reflect(w);
      if (norm_distance(fv, yprime_, NormKind::LInf) <= eps_ + kSlack) {
        case_ = PlanarCase::RepairYPrime;
        return SessionStatus::done(reflect(yprime_));
      }
      throw CaseAnalysisExhausted("planar: y' candidate failed verification");
    }
  }
  throw InvariantBreach("planar: unreachable state");
}

SessionStatus PlanarDaggerSession::analyze(const Point& fxstar) {
  if (norm_distance(fxstar, xstar_, NormKind::LInf) <= eps_ + kSlack) {
    case_ = PlanarCase::Direct;
    return SessionStatus::done(xstar_);
  }
  // Normalize orientation so that f(x*)_i >= x*_i for both coordinates.
  for (int i = 0; i < 2; ++i) refl_[i] = fxstar[i] < xstar_[i];
  Point fx = reflect(fxstar);
  Point xs = reflect(xstar_);

  bool trunc0 = fx[0] > box_.upper[0] + kSlack;
  bool trunc1 = fx[1] > box_.upper[1] + kSlack;
  if (trunc0 && trunc1) {
    corner_ = box_.upper;
    phase_ = Phase::QueryCorner;
    return emit(reflect(corner_));
  }
  if (trunc0 || trunc1) {
    int j = trunc1 ? 1 : 0;  // truncated coordinate
    int o = 1 - j;
    y_ = Point(2);
    y_[o] = xs[o];
    y_[j] = box_.upper[j];
    yprime_ = Point(2);
    yprime_[j] = box_.upper[j];
    yprime_[o] = std::min(box_.upper[o], y_[o] + eps_);
    phase_ = Phase::QueryY;
    return emit(reflect(y_));
  }
  throw CaseAnalysisExhausted(
      "planar: residual exceeds eps but no coordinate was truncated");
}

}  // namespace fixpoint
