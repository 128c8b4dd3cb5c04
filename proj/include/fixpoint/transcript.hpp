#pragma once

#include <vector>

#include "fixpoint/geometry.hpp"

namespace fixpoint {

struct QueryRecord {
  int round = 0;  // 1-based, consecutive
  Point query;
  Point answer;
};

// Ordered query/answer log of one solve. For the decomposition solver the
// outer rounds additionally carry the inner-solver outputs in `side`.
struct Transcript {
  std::vector<QueryRecord> records;
  std::vector<Point> side;  // per-round inner outputs (decomposition only)

  void add(const Point& q, const Point& v) {
    records.push_back({static_cast<int>(records.size()) + 1, q, v});
  }
  long size() const { return static_cast<long>(records.size()); }
};

struct SolveStats {
  long queries = 0;
  long rounds = 0;
  int max_recursion_depth = 0;
  double wall_time = 0.0;  // seconds
};

}  // namespace fixpoint
