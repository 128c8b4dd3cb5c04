#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "fixpoint/geometry.hpp"
#include "fixpoint/session.hpp"

namespace fixpoint {

struct MapSpec;
using MapSpecPtr = std::shared_ptr<const MapSpec>;

// f(x) = center + factor * (x - center); Lipschitz constant is exactly
// `factor` in every norm, fixed point is the center.
struct RadialMap {
  Point center;
  double factor = 0.0;
};

// f(x) = A x + offset. Certified linf bound = max row abs sum, l1 bound =
// max column abs sum.
struct AffineMap {
  std::vector<Point> matrix;  // row-major, k x k
  Point offset;
};

// Per output coordinate: min over groups of max over affine pieces
// (a . x + b). With every piece's |a|_1 below L this is L-Lipschitz per
// coordinate under linf, the usual Shapley-operator argument.
struct ShapleyPiece {
  Point coeffs;
  double constant = 0.0;
};
struct ShapleyCoordinate {
  std::vector<std::vector<ShapleyPiece>> groups;  // min over groups, max inside
};
struct ShapleyMap {
  std::vector<ShapleyCoordinate> coords;
};

// Componentwise clamp of the inner map's output into `box`.
struct TruncatedMap {
  MapSpecPtr inner;
  BoxSpec box;
};

// f(x) = factor * inner(x), factor in (0, 1].
struct ScaledMap {
  MapSpecPtr inner;
  double factor = 1.0;
};

// Adds one dimension whose output coordinate is always zero.
struct PaddedMap {
  MapSpecPtr inner;
};

struct MapSpec {
  std::variant<RadialMap, AffineMap, ShapleyMap, TruncatedMap, ScaledMap, PaddedMap>
      node;

  int dim() const;
  // Certified Lipschitz bound in the given norm, when the family admits one.
  std::optional<double> lipschitz(NormKind norm) const;
  // Pure evaluation; throws ContractViolation when x leaves [0,1]^dim.
  Point evaluate(const Point& x) const;
};

Point evaluate_map(const MapSpec& spec, const Point& x);

MapSpec truncate_map(MapSpec inner, BoxSpec box);
MapSpec scale_to_contraction(MapSpec inner, double eps, int k);
MapSpec pad_to_even(MapSpec inner);

// Plain callable over the spec (no counting; run_session counts).
MapFn map_fn(MapSpecPtr spec);

}  // namespace fixpoint
