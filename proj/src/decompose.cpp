#include "fixpoint/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "fixpoint/errors.hpp"

namespace fixpoint {

BoxSpec compute_restriction_box(const std::vector<Point>& inner_outputs,
                                const std::vector<Point>& outer_queries,
                                const Point& q_t, const BoxSpec& outer_box) {
  if (inner_outputs.size() != outer_queries.size()) {
    throw ContractViolation("compute_restriction_box: history size mismatch");
  }
  Point pmin = outer_box.lower;
  Point pmax = outer_box.upper;
  const int a = outer_box.dim();
  for (size_t r = 0; r < inner_outputs.size(); ++r) {
    double radius = norm_distance(q_t, outer_queries[r], NormKind::LInf);
    for (int i = 0; i < a; ++i) {
      pmin[i] = std::max(pmin[i], inner_outputs[r][i] - radius);
      pmax[i] = std::min(pmax[i], inner_outputs[r][i] + radius);
    }
  }
  for (int i = 0; i < a; ++i) {
    if (pmin[i] > pmax[i] + kSlack) {
      throw InvariantBreach("restriction box emptied: prior rounds inconsistent");
    }
    if (pmin[i] > pmax[i]) {  // collapse float-level inversions
      pmin[i] = pmax[i] = 0.5 * (pmin[i] + pmax[i]);
    }
  }
  return BoxSpec(std::move(pmin), std::move(pmax));
}

DecomposeSession::DecomposeSession(BoxSpec alpha, BoxSpec beta, double eps,
                                   SessionFactory inner_factory,
                                   SessionFactory outer_factory)
    : Session(concat(alpha, beta), inflate(concat(alpha, beta), eps)),
      a_(alpha.dim()),
      b_(beta.dim()),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      eps_(eps),
      make_inner_(std::move(inner_factory)),
      make_outer_(std::move(outer_factory)) {
  if (eps <= 0.0) throw ContractViolation("decompose: eps must be positive");
}

int DecomposeSession::recursion_depth() const { return 1 + max_child_depth_; }

SessionStatus DecomposeSession::advance(const std::optional<Point>& answer) {
  if (!answer.has_value()) {
    outer_ = make_outer_(beta_, eps_);
    max_child_depth_ = std::max(max_child_depth_, outer_->recursion_depth());
    const SessionStatus& st = outer_->status();
    if (st.kind != SessionStatus::Kind::PendingQuery) {
      throw InvariantBreach("decompose: outer session did not start with a query");
    }
    return begin_round(st.point);
  }

  const Point& w = *answer;
  seen_[pending_] = w;
  ++cur_inner_;

  if (phase_ == Phase::FinalQuery) {
    return finish_round(w);
  }

  // For a nonexpansive map the slice value stays inside the inflated
  // restriction box; a violation means the oracle lied somewhere.
  Point gval = slice(w, 0, a_);
  if (!inflate(pbox_, eps_).contains(gval, kSlack)) {
    throw InvariantBreach("decompose: slice value escaped the inflated restriction box");
  }
  const SessionStatus& st = inner_->step(gval);
  if (st.kind == SessionStatus::Kind::Failed) {
    throw InvariantBreach("decompose: inner solve failed: " + st.reason);
  }
  if (st.kind == SessionStatus::Kind::PendingQuery) {
    pending_ = concat(st.point, q_);
    return SessionStatus::pending(pending_);
  }

  ystar_ = st.point;
  max_child_depth_ = std::max(max_child_depth_, inner_->recursion_depth());
  if (!pbox_.contains(ystar_, kSlack)) {
    throw InvariantBreach("decompose: inner output left the restriction box");
  }
  Point full = concat(ystar_, q_);
  auto it = seen_.find(full);
  if (it != seen_.end()) {
    return finish_round(it->second);
  }
  phase_ = Phase::FinalQuery;
  pending_ = std::move(full);
  return SessionStatus::pending(pending_);
}

SessionStatus DecomposeSession::begin_round(const Point& outer_query) {
  ++round_;
  q_ = outer_query;
  pbox_ = compute_restriction_box(ys_, qs_, q_, alpha_);
  pboxes_.push_back(pbox_);
  inner_ = make_inner_(pbox_, eps_);
  cur_inner_ = 0;
  seen_.clear();
  phase_ = Phase::InnerQuery;
  const SessionStatus& st = inner_->status();
  if (st.kind == SessionStatus::Kind::Failed) {
    throw InvariantBreach("decompose: inner solve failed: " + st.reason);
  }
  if (st.kind == SessionStatus::Kind::Done) {
    // Inner solvers always query at least once, so this is unreachable for
    // the bundled factories; handle it anyway.
    ystar_ = st.point;
    phase_ = Phase::FinalQuery;
    pending_ = concat(ystar_, q_);
    return SessionStatus::pending(pending_);
  }
  pending_ = concat(st.point, q_);
  return SessionStatus::pending(pending_);
}

SessionStatus DecomposeSession::finish_round(const Point& full_value) {
  // Residual of the inner output on its slice (guaranteed by the inner
  // solver's contract).
  if (norm_distance(slice(full_value, 0, a_), ystar_, NormKind::LInf) > eps_ + kSlack) {
    throw InvariantBreach("decompose: inner output residual exceeds eps");
  }
  Point v = slice(full_value, a_, a_ + b_);
  // Pairwise consistency of the synthesized outer answers.
  for (size_t r = 0; r < qs_.size(); ++r) {
    if (norm_distance(v, vs_[r], NormKind::LInf) >
        norm_distance(q_, qs_[r], NormKind::LInf) + kSlack) {
      throw InvariantBreach("decompose: outer answers lost pairwise consistency");
    }
  }
  qs_.push_back(q_);
  vs_.push_back(v);
  ys_.push_back(ystar_);
  inner_counts_.push_back(cur_inner_);
  outer_log_.add(q_, v);
  outer_log_.side.push_back(ystar_);

  if (norm_distance(v, q_, NormKind::LInf) <= eps_ + kSlack) {
    return SessionStatus::done(concat(ystar_, q_));
  }
  const SessionStatus& st = outer_->step(v);
  if (st.kind == SessionStatus::Kind::Failed) {
    throw InvariantBreach("decompose: outer solve failed: " + st.reason);
  }
  if (st.kind == SessionStatus::Kind::Done) {
    throw InvariantBreach(
        "decompose: outer session finished although no answer passed the "
        "fixed-point check");
  }
  return begin_round(st.point);
}

}  // namespace fixpoint
