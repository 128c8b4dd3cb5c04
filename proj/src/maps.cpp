#include "fixpoint/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixpoint/errors.hpp"

namespace fixpoint {

namespace {

struct DimVisitor {
  int operator()(const RadialMap& m) const { return static_cast<int>(m.center.size()); }
  int operator()(const AffineMap& m) const { return static_cast<int>(m.offset.size()); }
  int operator()(const ShapleyMap& m) const { return static_cast<int>(m.coords.size()); }
  int operator()(const TruncatedMap& m) const { return m.inner->dim(); }
  int operator()(const ScaledMap& m) const { return m.inner->dim(); }
  int operator()(const PaddedMap& m) const { return m.inner->dim() + 1; }
};

double row_abs_sum_max(const std::vector<Point>& matrix) {
  double best = 0.0;
  for (const auto& row : matrix) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double col_abs_sum_max(const std::vector<Point>& matrix) {
  if (matrix.empty()) return 0.0;
  double best = 0.0;
  for (size_t j = 0; j < matrix[0].size(); ++j) {
    double s = 0.0;
    for (const auto& row : matrix) s += std::abs(row[j]);
    best = std::max(best, s);
  }
  return best;
}

double shapley_coeff_l1_max(const ShapleyMap& m) {
  double best = 0.0;
  for (const auto& coord : m.coords) {
    for (const auto& group : coord.groups) {
      for (const auto& piece : group) {
        double s = 0.0;
        for (double v : piece.coeffs) s += std::abs(v);
        best = std::max(best, s);
      }
    }
  }
  return best;
}

}  // namespace

int MapSpec::dim() const { return std::visit(DimVisitor{}, node); }

std::optional<double> MapSpec::lipschitz(NormKind norm) const {
  struct V {
    NormKind norm;
    std::optional<double> operator()(const RadialMap& m) const { return m.factor; }
    std::optional<double> operator()(const AffineMap& m) const {
      return norm == NormKind::LInf ? row_abs_sum_max(m.matrix)
                                    : col_abs_sum_max(m.matrix);
    }
    std::optional<double> operator()(const ShapleyMap& m) const {
      if (norm != NormKind::LInf) return std::nullopt;
      return shapley_coeff_l1_max(m);
    }
    std::optional<double> operator()(const TruncatedMap& m) const {
      return m.inner->lipschitz(norm);  // clamping is 1-Lipschitz per coordinate
    }
    std::optional<double> operator()(const ScaledMap& m) const {
      auto inner = m.inner->lipschitz(norm);
      if (!inner) return std::nullopt;
      return m.factor * *inner;
    }
    std::optional<double> operator()(const PaddedMap& m) const {
      return m.inner->lipschitz(norm);
    }
  };
  return std::visit(V{norm}, node);
}

Point MapSpec::evaluate(const Point& x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw ContractViolation("evaluate_map: dimension mismatch");
  }
  if (!BoxSpec::unit(dim()).contains(x, 1e-9)) {
    throw ContractViolation("evaluate_map: point outside the unit cube domain");
  }
  struct V {
    const Point& x;
    Point operator()(const RadialMap& m) const {
      Point out(x.size());
      for (size_t i = 0; i < x.size(); ++i) {
        out[i] = m.center[i] + m.factor * (x[i] - m.center[i]);
      }
      return out;
    }
    Point operator()(const AffineMap& m) const {
      Point out(m.offset);
      for (size_t i = 0; i < m.matrix.size(); ++i) {
        for (size_t j = 0; j < x.size(); ++j) out[i] += m.matrix[i][j] * x[j];
      }
      return out;
    }
    Point operator()(const ShapleyMap& m) const {
      Point out(m.coords.size());
      for (size_t i = 0; i < m.coords.size(); ++i) {
        double vmin = std::numeric_limits<double>::infinity();
        for (const auto& group : m.coords[i].groups) {
          double vmax = -std::numeric_limits<double>::infinity();
          for (const auto& piece : group) {
            double v = piece.constant;
            for (size_t j = 0; j < x.size(); ++j) v += piece.coeffs[j] * x[j];
            vmax = std::max(vmax, v);
          }
          vmin = std::min(vmin, vmax);
        }
        out[i] = vmin;
      }
      return out;
    }
    Point operator()(const TruncatedMap& m) const {
      return m.box.clamp(m.inner->evaluate(x));
    }
    Point operator()(const ScaledMap& m) const {
      Point out = m.inner->evaluate(x);
      for (auto& v : out) v *= m.factor;
      return out;
    }
    Point operator()(const PaddedMap& m) const {
      Point out = m.inner->evaluate(slice(x, 0, m.inner->dim()));
      out.push_back(0.0);
      return out;
    }
  };
  return std::visit(V{x}, node);
}

Point evaluate_map(const MapSpec& spec, const Point& x) { return spec.evaluate(x); }

MapSpec truncate_map(MapSpec inner, BoxSpec box) {
  if (inner.dim() != box.dim()) {
    throw ContractViolation("truncate_map: box dimension mismatch");
  }
  return MapSpec{TruncatedMap{std::make_shared<MapSpec>(std::move(inner)),
                              std::move(box)}};
}

MapSpec scale_to_contraction(MapSpec inner, double eps, int k) {
  if (eps <= 0.0) throw ContractViolation("scale_to_contraction: eps must be positive");
  if (inner.dim() != k) throw ContractViolation("scale_to_contraction: k mismatch");
  double factor = 1.0 - eps / (2.0 * k);
  return MapSpec{ScaledMap{std::make_shared<MapSpec>(std::move(inner)), factor}};
}

MapSpec pad_to_even(MapSpec inner) {
  if (inner.dim() % 2 == 0) {
    throw ContractViolation("pad_to_even: inner map is already even-dimensional");
  }
  return MapSpec{PaddedMap{std::make_shared<MapSpec>(std::move(inner))}};
}

MapFn map_fn(MapSpecPtr spec) {
  return [spec](const Point& x) { return spec->evaluate(x); };
}

}  // namespace fixpoint
