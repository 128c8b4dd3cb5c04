#include "fixpoint/solver_l1.hpp"

#include <algorithm>
#include <cmath>

#include "fixpoint/bisection.hpp"
#include "fixpoint/errors.hpp"

namespace fixpoint {

DominatingCoordinate select_dominating_coordinate(const Point& x, const Point& fx) {
  if (x.size() < 2 || fx.size() < 2) {
    throw ContractViolation("select_dominating_coordinate: dimension must be >= 2");
  }
  double d0 = fx[0] - x[0];
  double d1 = fx[1] - x[1];
  if (std::abs(d0) <= kSlack && std::abs(d1) <= kSlack) {
    throw InvariantBreach(
        "select_dominating_coordinate: both displacements vanish although the "
        "residual exceeds eps");
  }
  int i = std::abs(d0) >= std::abs(d1) ? 0 : 1;  // ties break to index 0
  double d = i == 0 ? d0 : d1;
  return {i, d > 0.0 ? 1 : -1};
}

L1ContractionSession::L1ContractionSession(int k, double eps, double gamma)
    : Session(BoxSpec::unit(k), BoxSpec::unit(k)),
      k_(k),
      eps_(eps),
      gamma_(gamma),
      pmin_(2, 0.0),
      pmax_(2, 1.0) {
  if (k < 2 || k % 2 != 0) {
    throw ContractViolation("l1 session: k must be even and >= 2");
  }
  if (eps <= 0.0 || gamma <= 0.0 || gamma > 1.0) {
    throw ContractViolation("l1 session: need eps > 0 and gamma in (0,1]");
  }
  cap_ = static_cast<long>(std::ceil(2.0 * std::log2(8.0 / (eps_ * gamma_)))) + 4;
}

int L1ContractionSession::recursion_depth() const { return 1 + max_child_depth_; }

SessionStatus L1ContractionSession::advance(const std::optional<Point>& answer) {
  if (!answer.has_value()) {
    return begin_round();
  }
  const Point& w = *answer;
  seen_[pending_] = w;

  if (phase_ == Phase::Inner) {
    const SessionStatus& st = inner_->step(slice(w, 2, k_));
    if (st.kind == SessionStatus::Kind::Failed) {
      throw InvariantBreach("l1: inner solve failed: " + st.reason);
    }
    if (st.kind == SessionStatus::Kind::PendingQuery) {
      pending_ = concat(pmid_, st.point);
      return SessionStatus::pending(pending_);
    }
    max_child_depth_ = std::max(max_child_depth_, inner_->recursion_depth());
    x_ = concat(pmid_, st.point);
    phase_ = Phase::Check;
    auto it = seen_.find(x_);
    if (it != seen_.end()) {
      return check_candidate(it->second);
    }
    pending_ = x_;
    return SessionStatus::pending(pending_);
  }
  return check_candidate(w);
}

SessionStatus L1ContractionSession::begin_round() {
  ++round_;
  if (round_ > cap_) {
    throw InvariantBreach("l1: round cap exceeded; oracle is not a contraction");
  }
  pmid_ = Point{0.5 * (pmin_[0] + pmax_[0]), 0.5 * (pmin_[1] + pmax_[1])};
  seen_.clear();
  if (k_ > 2) {
    inner_ = std::make_unique<L1ContractionSession>(k_ - 2, eps_ * gamma_ / 4.0, gamma_);
    phase_ = Phase::Inner;
    const SessionStatus& st = inner_->status();
    pending_ = concat(pmid_, st.point);
    return SessionStatus::pending(pending_);
  }
  x_ = pmid_;
  phase_ = Phase::Check;
  pending_ = x_;
  return SessionStatus::pending(pending_);
}

SessionStatus L1ContractionSession::check_candidate(const Point& fx) {
  if (norm_distance(fx, x_, NormKind::L1) <= eps_ + kSlack) {
    history_.emplace_back(pmin_, pmax_);
    return SessionStatus::done(x_);
  }
  if (k_ > 2) {
    // The recursion promises the tail residual is below eps*gamma/4.
    double tail = norm_distance(slice(fx, 2, k_), slice(x_, 2, k_), NormKind::L1);
    if (tail > eps_ * gamma_ / 4.0 + kSlack) {
      throw InvariantBreach("l1: tail residual exceeds the recursive precision");
    }
  }
  auto dom = select_dominating_coordinate(x_, fx);
  double offset = eps_ * gamma_ / 8.0;
  if (dom.sign > 0) {
    pmin_[dom.index] = x_[dom.index] + offset;
  } else {
    pmax_[dom.index] = x_[dom.index] - offset;
  }
  if (pmin_[dom.index] > pmax_[dom.index] + kSlack) {
    throw InvariantBreach("l1: search window emptied; oracle is not a contraction");
  }
  if (pmin_[dom.index] > pmax_[dom.index]) {
    pmin_[dom.index] = pmax_[dom.index] = 0.5 * (pmin_[dom.index] + pmax_[dom.index]);
  }
  history_.emplace_back(pmin_, pmax_);
  return begin_round();
}

bool l1_precision_feasible(int k, double eps, double gamma) {
  int ke = k % 2 == 0 ? k : k + 1;
  if (ke < 2) return false;
  double innermost = eps * std::pow(gamma / 4.0, ke / 2 - 1);
  return innermost >= 1e-9;
}

bool l1_nonexp_feasible(int k, double eps) {
  if (k <= 1) return eps >= 1e-9;
  int ke = k % 2 == 0 ? k : k + 1;
  return l1_precision_feasible(ke, eps / 2.0, eps / (2.0 * ke));
}

namespace {

// One fresh evaluation appended to the transcript; throws if the residual
// contract fails.
void reverify(SolveResult& result, const MapFn& f, const Point& x, double eps,
              const char* what) {
  Point fx = f(x);
  result.transcript.add(x, fx);
  result.stats.queries = result.transcript.size();
  if (norm_distance(fx, x, NormKind::L1) > eps + kSlack) {
    throw InvariantBreach(std::string(what) + ": re-verified residual exceeds eps");
  }
}

}  // namespace

SolveResult solve_l1_contraction(const MapFn& f, int k, double eps, double gamma) {
  if (k < 1) throw ContractViolation("solve_l1_contraction: k must be >= 1");
  if (k == 1) {
    BisectionSession session(0.0, 1.0, eps);
    return run_session(session, f);
  }
  if (!l1_precision_feasible(k, eps, gamma)) {
    throw ContractViolation(
        "solve_l1_contraction: eps*(gamma/4)^(k/2-1) below the 1e-9 precision floor");
  }
  if (k % 2 != 0) {
    // Pad with a zero output coordinate; the l1 contraction factor carries over.
    MapFn padded = [&f, k](const Point& x) {
      Point out = f(slice(x, 0, k));
      out.push_back(0.0);
      return out;
    };
    L1ContractionSession session(k + 1, eps, gamma);
    SolveResult result = run_session(session, padded);
    result.window_history = session.window_history();
    result.answer = slice(result.answer, 0, k);
    reverify(result, f, result.answer, eps, "padded l1 solve");
    return result;
  }
  L1ContractionSession session(k, eps, gamma);
  SolveResult result = run_session(session, f);
  result.window_history = session.window_history();
  return result;
}

SolveResult solve_l1_nonexp(const MapFn& f, int k, double eps) {
  if (k < 1) throw ContractViolation("solve_l1_nonexp: k must be >= 1");
  if (eps <= 0.0) throw ContractViolation("solve_l1_nonexp: eps must be positive");
  if (k == 1) {
    BisectionSession session(0.0, 1.0, eps);
    return run_session(session, f);
  }
  if (!l1_nonexp_feasible(k, eps)) {
    throw ContractViolation(
        "solve_l1_nonexp: the scaled problem falls below the precision floor");
  }
  const int ke = k % 2 == 0 ? k : k + 1;
  const double scale = 1.0 - eps / (2.0 * ke);
  MapFn scaled = [&f, k, ke, scale](const Point& x) {
    Point out = f(slice(x, 0, k));
    for (auto& v : out) v *= scale;
    if (ke != k) out.push_back(0.0);
    return out;
  };
  L1ContractionSession session(ke, eps / 2.0, eps / (2.0 * ke));
  SolveResult result = run_session(session, scaled);
  result.window_history = session.window_history();
  result.answer = slice(result.answer, 0, k);
  reverify(result, f, result.answer, eps, "l1 nonexpansive reduction");
  return result;
}

}  // namespace fixpoint
