#include "fixpoint/session.hpp"

#include <chrono>
#include <utility>

#include "fixpoint/errors.hpp"

namespace fixpoint {

Session::Session(BoxSpec query_box, BoxSpec answer_box)
    : query_box_(std::move(query_box)), answer_box_(std::move(answer_box)) {}

const SessionStatus& Session::status() {
  if (!started_) {
    started_ = true;
    set_status(advance(std::nullopt));
  }
  return status_;
}

const SessionStatus& Session::step(const std::optional<Point>& answer) {
  if (!started_) {
    if (answer.has_value()) {
      throw ContractViolation("session: answer supplied before the first query");
    }
    return status();
  }
  if (status_.kind != SessionStatus::Kind::PendingQuery) {
    throw ContractViolation("session: answer supplied to a finished session");
  }
  if (!answer.has_value()) {
    throw ContractViolation("session: pending query requires an answer");
  }
  if (!is_finite(*answer) || !answer_box_.contains(*answer, kSlack)) {
    throw OracleContractViolation("session: answer outside the declared range box");
  }
  set_status(advance(answer));
  return status_;
}

void Session::set_status(SessionStatus next) {
  if (next.kind == SessionStatus::Kind::PendingQuery &&
      !query_box_.contains(next.point, kSlack)) {
    throw InvariantBreach("session: emitted query outside the declared query box");
  }
  status_ = std::move(next);
}

SolveResult run_session(Session& session, const MapFn& oracle) {
  SolveResult result;
  auto t0 = std::chrono::steady_clock::now();
  const SessionStatus* st = &session.status();
  while (st->kind == SessionStatus::Kind::PendingQuery) {
    Point v = oracle(st->point);
    result.transcript.add(st->point, v);
    st = &session.step(v);
  }
  if (st->kind == SessionStatus::Kind::Failed) {
    throw InvariantBreach("session failed: " + st->reason);
  }
  result.answer = st->point;
  result.stats.queries = result.transcript.size();
  result.stats.rounds = session.rounds();
  result.stats.max_recursion_depth = session.recursion_depth();
  result.stats.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace fixpoint
