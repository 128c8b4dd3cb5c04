#include "fixpoint/instance.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixpoint/errors.hpp"

namespace fixpoint {

using nlohmann::json;

std::string to_string(Family family) {
  switch (family) {
    case Family::Radial: return "radial";
    case Family::Affine: return "affine";
    case Family::Shapley: return "shapley";
  }
  throw ContractViolation("unknown family");
}

Family family_from_string(const std::string& name) {
  if (name == "radial") return Family::Radial;
  if (name == "affine") return Family::Affine;
  if (name == "shapley") return Family::Shapley;
  throw ContractViolation("unknown family: " + name);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_real(const std::string& text) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw ContractViolation("parse_real: bad real literal: " + text);
  }
  return v;
}

namespace {

json reals(const Point& p) {
  json arr = json::array();
  for (double v : p) arr.push_back(format_real(v));
  return arr;
}

Point point_from(const json& arr) {
  Point p;
  for (const auto& v : arr) p.push_back(parse_real(v.get<std::string>()));
  return p;
}

json box_to_json(const BoxSpec& box) {
  return json{{"lower", reals(box.lower)}, {"upper", reals(box.upper)}};
}

BoxSpec box_from_json(const json& j) {
  return BoxSpec(point_from(j.at("lower")), point_from(j.at("upper")));
}

json map_to_json(const MapSpec& spec);

json pieces_to_json(const ShapleyCoordinate& coord) {
  json groups = json::array();
  for (const auto& group : coord.groups) {
    json pieces = json::array();
    for (const auto& piece : group) {
      pieces.push_back(json{{"coeffs", reals(piece.coeffs)},
                            {"constant", format_real(piece.constant)}});
    }
    groups.push_back(pieces);
  }
  return groups;
}

struct MapToJson {
  json operator()(const RadialMap& m) const {
    return json{{"type", "radial"},
                {"center", reals(m.center)},
                {"factor", format_real(m.factor)}};
  }
  json operator()(const AffineMap& m) const {
    json rows = json::array();
    for (const auto& row : m.matrix) rows.push_back(reals(row));
    return json{{"type", "affine"}, {"matrix", rows}, {"offset", reals(m.offset)}};
  }
  json operator()(const ShapleyMap& m) const {
    json coords = json::array();
    for (const auto& coord : m.coords) coords.push_back(pieces_to_json(coord));
    return json{{"type", "shapley"}, {"coords", coords}};
  }
  json operator()(const TruncatedMap& m) const {
    return json{{"type", "truncated"},
                {"box", box_to_json(m.box)},
                {"inner", map_to_json(*m.inner)}};
  }
  json operator()(const ScaledMap& m) const {
    return json{{"type", "scaled"},
                {"factor", format_real(m.factor)},
                {"inner", map_to_json(*m.inner)}};
  }
  json operator()(const PaddedMap& m) const {
    return json{{"type", "padded"}, {"inner", map_to_json(*m.inner)}};
  }
};

json map_to_json(const MapSpec& spec) { return std::visit(MapToJson{}, spec.node); }

MapSpec map_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "radial") {
    return MapSpec{RadialMap{point_from(j.at("center")),
                             parse_real(j.at("factor").get<std::string>())}};
  }
  if (type == "affine") {
    AffineMap m;
    for (const auto& row : j.at("matrix")) m.matrix.push_back(point_from(row));
    m.offset = point_from(j.at("offset"));
    return MapSpec{std::move(m)};
  }
  if (type == "shapley") {
    ShapleyMap m;
    for (const auto& coord : j.at("coords")) {
      ShapleyCoordinate c;
      for (const auto& group : coord) {
        std::vector<ShapleyPiece> pieces;
        for (const auto& piece : group) {
          pieces.push_back(ShapleyPiece{
              point_from(piece.at("coeffs")),
              parse_real(piece.at("constant").get<std::string>())});
        }
        c.groups.push_back(std::move(pieces));
      }
      m.coords.push_back(std::move(c));
    }
    return MapSpec{std::move(m)};
  }
  if (type == "truncated") {
    return MapSpec{TruncatedMap{
        std::make_shared<MapSpec>(map_from_json(j.at("inner"))),
        box_from_json(j.at("box"))}};
  }
  if (type == "scaled") {
    return MapSpec{ScaledMap{
        std::make_shared<MapSpec>(map_from_json(j.at("inner"))),
        parse_real(j.at("factor").get<std::string>())}};
  }
  if (type == "padded") {
    return MapSpec{PaddedMap{std::make_shared<MapSpec>(map_from_json(j.at("inner")))}};
  }
  throw ContractViolation("unknown map type: " + type);
}

}  // namespace

std::string InstanceFile::id() const {
  std::ostringstream out;
  const MapSpec* m = &map;
  while (const auto* t = std::get_if<TruncatedMap>(&m->node)) m = t->inner.get();
  const char* fam = std::holds_alternative<RadialMap>(m->node)    ? "radial"
                    : std::holds_alternative<AffineMap>(m->node)  ? "affine"
                    : std::holds_alternative<ShapleyMap>(m->node) ? "shapley"
                                                                  : "map";
  out << fam << "_" << to_string(problem.norm) << "_k" << problem.k << "_s" << seed;
  return out.str();
}

std::string serialize_instance(const InstanceFile& instance) {
  json j;
  json problem{{"k", instance.problem.k},
               {"eps", format_real(instance.problem.eps)},
               {"norm", to_string(instance.problem.norm)},
               {"box", box_to_json(instance.problem.box)}};
  if (instance.problem.gamma) problem["gamma"] = format_real(*instance.problem.gamma);
  j["problem"] = problem;
  j["map"] = map_to_json(instance.map);
  if (instance.known_fixed_point) {
    j["known_fixed_point"] = reals(*instance.known_fixed_point);
  }
  j["seed"] = instance.seed;
  return j.dump(2) + "\n";
}

InstanceFile parse_instance(const std::string& json_text) {
  json j = json::parse(json_text);
  InstanceFile out;
  const json& p = j.at("problem");
  out.problem.k = p.at("k").get<int>();
  out.problem.eps = parse_real(p.at("eps").get<std::string>());
  if (p.contains("gamma")) out.problem.gamma = parse_real(p.at("gamma").get<std::string>());
  out.problem.norm = norm_from_string(p.at("norm").get<std::string>());
  out.problem.box = box_from_json(p.at("box"));
  out.map = map_from_json(j.at("map"));
  if (j.contains("known_fixed_point")) {
    out.known_fixed_point = point_from(j.at("known_fixed_point"));
  }
  out.seed = j.at("seed").get<std::uint64_t>();
  return out;
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const InstanceFile& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ContractViolation("cannot write instance file: " + path);
  out << serialize_instance(instance);
}

std::uint64_t Rng::next() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

namespace {

MapSpec make_radial(Rng& rng, int k, double gamma, Point* fixed_point) {
  RadialMap m;
  m.center.resize(k);
  for (auto& v : m.center) v = rng.uniform();
  m.factor = 1.0 - gamma;
  *fixed_point = m.center;
  return MapSpec{std::move(m)};
}

MapSpec make_affine(Rng& rng, int k, double gamma, NormKind norm) {
  const double target = 1.0 - gamma;
  AffineMap m;
  m.matrix.assign(k, Point(k, 0.0));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) m.matrix[i][j] = rng.uniform(-1.0, 1.0);
  }
  // Scale rows (linf) or columns (l1) so each absolute sum lands at
  // target * u with u in [0.5, 1]; the induced-norm bound is then exact.
  if (norm == NormKind::LInf) {
    for (int i = 0; i < k; ++i) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += std::abs(m.matrix[i][j]);
      double want = target * rng.uniform(0.5, 1.0);
      if (s > 0.0) {
        for (int j = 0; j < k; ++j) m.matrix[i][j] *= want / s;
      }
    }
  } else {
    for (int j = 0; j < k; ++j) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += std::abs(m.matrix[i][j]);
      double want = target * rng.uniform(0.5, 1.0);
      if (s > 0.0) {
        for (int i = 0; i < k; ++i) m.matrix[i][j] *= want / s;
      }
    }
  }
  m.offset.resize(k);
  for (auto& v : m.offset) v = rng.uniform(0.0, 1.0 - target);
  MapSpec spec{std::move(m)};
  double certified = *spec.lipschitz(norm);
  if (certified > target + kSlack) {
    throw InvariantBreach("affine generator produced an uncertified matrix");
  }
  // Range of the raw map can leave the cube; clamp it back in.
  return truncate_map(std::move(spec), BoxSpec::unit(k));
}

MapSpec make_shapley(Rng& rng, int k, double gamma) {
  const double target = 1.0 - gamma;
  ShapleyMap m;
  m.coords.resize(k);
  for (auto& coord : m.coords) {
    coord.groups.resize(2);
    for (auto& group : coord.groups) {
      group.resize(2);
      for (auto& piece : group) {
        piece.coeffs.resize(k);
        double s = 0.0;
        for (auto& c : piece.coeffs) {
          c = rng.uniform(-1.0, 1.0);
          s += std::abs(c);
        }
        double want = target * rng.uniform(0.3, 1.0);
        if (s > 0.0) {
          for (auto& c : piece.coeffs) c *= want / s;
        }
        piece.constant = rng.uniform(0.0, 1.0);
      }
    }
  }
  MapSpec spec{std::move(m)};
  if (*spec.lipschitz(NormKind::LInf) > target + kSlack) {
    throw InvariantBreach("shapley generator produced an uncertified map");
  }
  return truncate_map(std::move(spec), BoxSpec::unit(k));
}

}  // namespace

InstanceFile generate_instance(std::uint64_t seed, Family family, int k, double eps,
                               double gamma, NormKind norm) {
  if (k < 1) throw ContractViolation("generate_instance: k must be >= 1");
  if (eps <= 0.0 || eps > 1.0) throw ContractViolation("generate_instance: bad eps");
  if (gamma < 0.0 || gamma > 1.0) throw ContractViolation("generate_instance: bad gamma");
  if (family == Family::Shapley && norm == NormKind::L1) {
    throw ContractViolation("generate_instance: shapley maps certify only the linf norm");
  }
  Rng rng(seed * 0x51d2cc5b0d6e3a21ULL + static_cast<std::uint64_t>(family) * 977 +
          static_cast<std::uint64_t>(k));
  InstanceFile out;
  out.seed = seed;
  out.problem.k = k;
  out.problem.eps = eps;
  if (gamma > 0.0) out.problem.gamma = gamma;
  out.problem.norm = norm;
  out.problem.box = BoxSpec::unit(k);
  switch (family) {
    case Family::Radial: {
      Point fp;
      out.map = make_radial(rng, k, gamma, &fp);
      out.known_fixed_point = fp;
      break;
    }
    case Family::Affine:
      out.map = make_affine(rng, k, gamma, norm);
      break;
    case Family::Shapley:
      out.map = make_shapley(rng, k, gamma);
      break;
  }
  return out;
}

}  // namespace fixpoint
