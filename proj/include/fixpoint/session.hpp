#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "fixpoint/geometry.hpp"
#include "fixpoint/transcript.hpp"

namespace fixpoint {

struct SessionStatus {
  enum class Kind { PendingQuery, Done, Failed };
  Kind kind = Kind::Failed;
  Point point;         // the query (PendingQuery) or the answer (Done)
  std::string reason;  // Failed only

  static SessionStatus pending(Point q) { return {Kind::PendingQuery, std::move(q), {}}; }
  static SessionStatus done(Point x) { return {Kind::Done, std::move(x), {}}; }
  static SessionStatus failed(std::string why) { return {Kind::Failed, {}, std::move(why)}; }
};

// Inversion-of-control solver state machine. A session emits query points one
// at a time and consumes oracle answers; it owns no oracle itself, which lets
// the decomposition solver answer an outer session's queries by running inner
// solves. Emitted queries are validated against `query_box`, supplied answers
// against `answer_box` (the inflated range box of the session's problem).
class Session {
 public:
  virtual ~Session() = default;

  // First call must carry no answer; later calls must answer the pending
  // query. Stepping a finished session throws ContractViolation; an answer
  // outside `answer_box` throws OracleContractViolation.
  const SessionStatus& step(const std::optional<Point>& answer = std::nullopt);

  // Current status, lazily starting the session.
  const SessionStatus& status();

  const BoxSpec& query_box() const { return query_box_; }
  const BoxSpec& answer_box() const { return answer_box_; }

  virtual long rounds() const = 0;
  virtual int recursion_depth() const { return 1; }

 protected:
  Session(BoxSpec query_box, BoxSpec answer_box);

  // One transition of the state machine.
  virtual SessionStatus advance(const std::optional<Point>& answer) = 0;

 private:
  void set_status(SessionStatus next);

  BoxSpec query_box_;
  BoxSpec answer_box_;
  SessionStatus status_;
  bool started_ = false;
};

using MapFn = std::function<Point(const Point&)>;

struct DecompositionInfo {
  long q_a = 0;      // max queries spent by one inner (a-dimensional) solve
  long q_b = 0;      // rounds driven through the outer (b-dimensional) session
  long q_total = 0;  // total oracle queries of the decomposition run
  bool product_bound_ok = false;
};

struct SolveResult {
  Point answer;
  SolveStats stats;
  Transcript transcript;
  // Per-round [p_min, p_max] snapshots (recursive l1 solver only).
  std::vector<std::pair<Point, Point>> window_history;
  // Outer-round (q^t, v^t, y^(t,*)) log (decomposition solver only).
  Transcript outer_transcript;
  std::optional<DecompositionInfo> decomposition;
};

// Drives a session against an oracle, recording every query/answer pair.
SolveResult run_session(Session& session, const MapFn& oracle);

}  // namespace fixpoint
