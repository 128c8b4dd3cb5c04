#pragma once

#include <string>
#include <vector>

namespace fixpoint {

// Points are dense real vectors; the dimension is fixed per context.
using Point = std::vector<double>;

enum class NormKind { LInf, L1 };

// Absolute slack used by every inequality that gates control flow.
inline constexpr double kSlack = 1e-12;

std::string to_string(NormKind norm);
NormKind norm_from_string(const std::string& name);

bool is_finite(const Point& x);

// ||x - y|| in the requested norm. Throws ContractViolation on dimension
// mismatch or non-finite input.
double norm_distance(const Point& x, const Point& y, NormKind norm);

// Axis-aligned box, lower <= upper componentwise. Degenerate widths are fine.
struct BoxSpec {
  Point lower;
  Point upper;

  BoxSpec() = default;
  BoxSpec(Point lo, Point up);

  int dim() const { return static_cast<int>(lower.size()); }
  double width(int i) const { return upper[i] - lower[i]; }
  bool contains(const Point& x, double tol = kSlack) const;
  Point clamp(const Point& x) const;
  Point midpoint() const;

  static BoxSpec unit(int k);
  // Sub-box spanning coordinates [begin, end).
  BoxSpec slice(int begin, int end) const;
};

// B(lower, upper, +-eps): lower - eps, upper + eps componentwise.
BoxSpec inflate(const BoxSpec& box, double eps);

BoxSpec concat(const BoxSpec& a, const BoxSpec& b);
Point concat(const Point& a, const Point& b);
Point slice(const Point& x, int begin, int end);

}  // namespace fixpoint
