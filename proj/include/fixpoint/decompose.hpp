#pragma once

#include <map>
#include <memory>
#include <vector>

#include "fixpoint/session.hpp"

namespace fixpoint {

using SessionFactory =
    std::function<std::unique_ptr<Session>(const BoxSpec& box, double eps)>;

// Restriction box of round t: intersection of the linf balls around previous
// inner outputs y^(r,*) with radii ||q^t - q^r||_inf, clipped to the outer
// domain. For t = 1 (empty history) this is the full domain box. Throws
// InvariantBreach if the intersection empties, which cannot happen when the
// prior data came from a genuinely nonexpansive map.
BoxSpec compute_restriction_box(const std::vector<Point>& inner_outputs,
                                const std::vector<Point>& outer_queries,
                                const Point& q_t, const BoxSpec& outer_box);

// Solves the (a+b)-dimensional dagger problem by driving a b-dimensional
// session whose query answers are produced by a-dimensional solves on
// restriction boxes. Emits (a+b)-dimensional queries.
//
// Runtime assertions (throwing InvariantBreach on failure): restriction-box
// validity, containment of inner answers in the inflated restriction box,
// the residual of each inner output on its slice, and pairwise consistency
// of the synthesized outer answers.
class DecomposeSession final : public Session {
 public:
  DecomposeSession(BoxSpec alpha, BoxSpec beta, double eps,
                   SessionFactory inner_factory, SessionFactory outer_factory);

  long rounds() const override { return round_; }
  int recursion_depth() const override;

  // Per-round query counts of the inner solves (the v^t-building query is
  // attributed to its round).
  const std::vector<long>& inner_query_counts() const { return inner_counts_; }
  // (q^t, v^t) pairs with side data y^(t,*), for transcript auditing.
  const Transcript& outer_transcript() const { return outer_log_; }
  const std::vector<BoxSpec>& restriction_boxes() const { return pboxes_; }

 private:
  SessionStatus advance(const std::optional<Point>& answer) override;
  SessionStatus begin_round(const Point& outer_query);
  SessionStatus forward_inner();
  SessionStatus finish_round(const Point& full_value);

  int a_, b_;
  BoxSpec alpha_, beta_;
  double eps_;
  SessionFactory make_inner_, make_outer_;

  std::unique_ptr<Session> outer_;
  std::unique_ptr<Session> inner_;
  BoxSpec pbox_;
  Point q_;        // current outer query
  Point ystar_;    // current inner output
  Point pending_;  // query we last emitted

  std::vector<Point> qs_, vs_, ys_;
  std::vector<BoxSpec> pboxes_;
  Transcript outer_log_;
  std::vector<long> inner_counts_;
  long cur_inner_ = 0;
  long round_ = 0;
  std::map<Point, Point> seen_;  // full query -> answer, current round
  int max_child_depth_ = 0;

  enum class Phase { InnerQuery, FinalQuery };
  Phase phase_ = Phase::InnerQuery;
};

}  // namespace fixpoint
