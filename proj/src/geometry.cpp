#include "fixpoint/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "fixpoint/errors.hpp"

namespace fixpoint {

std::string to_string(NormKind norm) {
  return norm == NormKind::LInf ? "linf" : "l1";
}

NormKind norm_from_string(const std::string& name) {
  if (name == "linf") return NormKind::LInf;
  if (name == "l1") return NormKind::L1;
  throw ContractViolation("unknown norm: " + name);
}

bool is_finite(const Point& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double norm_distance(const Point& x, const Point& y, NormKind norm) {
  if (x.size() != y.size()) {
    throw ContractViolation("norm_distance: dimension mismatch");
  }
  if (!is_finite(x) || !is_finite(y)) {
    throw ContractViolation("norm_distance: non-finite coordinate");
  }
  double acc = 0.0;
  if (norm == NormKind::LInf) {
    for (size_t i = 0; i < x.size(); ++i) acc = std::max(acc, std::abs(x[i] - y[i]));
  } else {
    for (size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
  }
  return acc;
}

BoxSpec::BoxSpec(Point lo, Point up) : lower(std::move(lo)), upper(std::move(up)) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw ContractViolation("BoxSpec: lower/upper dimension mismatch or empty");
  }
  if (!is_finite(lower) || !is_finite(upper)) {
    throw ContractViolation("BoxSpec: non-finite bound");
  }
  for (size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) {
      throw ContractViolation("BoxSpec: lower exceeds upper");
    }
  }
}

bool BoxSpec::contains(const Point& x, double tol) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  }
  return true;
}

Point BoxSpec::clamp(const Point& x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw ContractViolation("BoxSpec::clamp: dimension mismatch");
  }
  Point out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    out[i] = std::max(lower[i], std::min(upper[i], x[i]));
  }
  return out;
}

Point BoxSpec::midpoint() const {
  Point out(lower.size());
  for (size_t i = 0; i < lower.size(); ++i) out[i] = 0.5 * (lower[i] + upper[i]);
  return out;
}

BoxSpec BoxSpec::unit(int k) {
  if (k < 1) throw ContractViolation("BoxSpec::unit: k must be >= 1");
  return BoxSpec(Point(k, 0.0), Point(k, 1.0));
}

BoxSpec BoxSpec::slice(int begin, int end) const {
  return BoxSpec(fixpoint::slice(lower, begin, end), fixpoint::slice(upper, begin, end));
}

BoxSpec inflate(const BoxSpec& box, double eps) {
  if (eps < 0.0) throw ContractViolation("inflate: negative eps");
  Point lo = box.lower, up = box.upper;
  for (auto& v : lo) v -= eps;
  for (auto& v : up) v += eps;
  return BoxSpec(std::move(lo), std::move(up));
}

BoxSpec concat(const BoxSpec& a, const BoxSpec& b) {
  return BoxSpec(concat(a.lower, b.lower), concat(a.upper, b.upper));
}

Point concat(const Point& a, const Point& b) {
  Point out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Point slice(const Point& x, int begin, int end) {
  if (begin < 0 || end > static_cast<int>(x.size()) || begin > end) {
    throw ContractViolation("slice: bad range");
  }
  return Point(x.begin() + begin, x.begin() + end);
}

}  // namespace fixpoint
