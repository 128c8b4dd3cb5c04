#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fixpoint/maps.hpp"

namespace fixpoint {

struct ProblemSpec {
  int k = 0;
  double eps = 0.0;
  std::optional<double> gamma;  // absent for nonexpansive problems
  NormKind norm = NormKind::LInf;
  BoxSpec box;  // defaults to [0,1]^k
};

enum class Family { Radial, Affine, Shapley };
std::string to_string(Family family);
Family family_from_string(const std::string& name);

struct InstanceFile {
  ProblemSpec problem;
  MapSpec map;
  std::optional<Point> known_fixed_point;
  std::uint64_t seed = 0;

  std::string id() const;
};

// JSON with every real serialized as a decimal string of at most 17
// significant digits, so parse(serialize(x)) round-trips bit-exactly.
std::string serialize_instance(const InstanceFile& instance);
InstanceFile parse_instance(const std::string& json_text);
InstanceFile load_instance(const std::string& path);
void save_instance(const InstanceFile& instance, const std::string& path);

// Deterministic splitmix64-based generator; identical seeds give identical
// instances on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)

 private:
  std::uint64_t state_;
};

// Builds a certified instance: Lipschitz bounds are established by
// construction (factor for Radial, row/column sums for Affine, piece
// coefficient sums for Shapley) and checked exactly before returning.
InstanceFile generate_instance(std::uint64_t seed, Family family, int k, double eps,
                               double gamma, NormKind norm);

std::string format_real(double v);
double parse_real(const std::string& text);

}  // namespace fixpoint
