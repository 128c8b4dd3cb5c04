#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixpoint/errors.hpp"
#include "fixpoint/instance.hpp"
#include "fixpoint/maps.hpp"

using namespace fixpoint;

namespace {

Point random_point(Rng& rng, int k) {
  Point p(k);
  for (auto& v : p) v = rng.uniform();
  return p;
}

}  // namespace

TEST_CASE("radial evaluation") {
  MapSpec m{RadialMap{{0.5, 0.5}, 0.9}};
  Point at_origin = m.evaluate({0.0, 0.0});
  CHECK(at_origin[0] == doctest::Approx(0.05));
  CHECK(at_origin[1] == doctest::Approx(0.05));
  CHECK(m.evaluate({0.5, 0.5}) == Point{0.5, 0.5});  // center is exactly fixed
  CHECK(*m.lipschitz(NormKind::LInf) == 0.9);
  CHECK(*m.lipschitz(NormKind::L1) == 0.9);
  CHECK_THROWS_AS(m.evaluate({1.5, 0.0}), ContractViolation);
  CHECK_THROWS_AS(m.evaluate({0.5}), ContractViolation);
}

TEST_CASE("affine evaluation and induced-norm bounds") {
  MapSpec m{AffineMap{{{0.0, 0.5}, {0.5, 0.0}}, {0.25, 0.25}}};
  CHECK(m.evaluate({1.0, 1.0}) == Point{0.75, 0.75});
  CHECK(*m.lipschitz(NormKind::LInf) == 0.5);
  CHECK(*m.lipschitz(NormKind::L1) == 0.5);

  MapSpec asym{AffineMap{{{0.2, 0.7}, {0.1, 0.1}}, {0.0, 0.0}}};
  CHECK(*asym.lipschitz(NormKind::LInf) == doctest::Approx(0.9));  // row 0
  CHECK(*asym.lipschitz(NormKind::L1) == doctest::Approx(0.8));    // column 1
}

TEST_CASE("shapley evaluation is min over groups of max over pieces") {
  ShapleyCoordinate c;
  c.groups = {{{Point{0.5, 0.0}, 0.1}, {Point{0.0, 0.5}, 0.0}},
              {{Point{0.25, 0.25}, 0.3}}};
  MapSpec m{ShapleyMap{{c, c}}};
  // At (1, 0): group 0 = max(0.6, 0.0) = 0.6, group 1 = 0.55; min = 0.55.
  CHECK(m.evaluate({1.0, 0.0})[0] == doctest::Approx(0.55));
  CHECK(*m.lipschitz(NormKind::LInf) == doctest::Approx(0.5));
  CHECK_FALSE(m.lipschitz(NormKind::L1).has_value());
}

TEST_CASE("truncation clamps and is idempotent") {
  MapSpec raw{AffineMap{{{0.0, 0.0}, {0.0, 0.0}}, {1.05, 0.5}}};
  MapSpec once = truncate_map(raw, BoxSpec::unit(2));
  CHECK(once.evaluate({0.3, 0.3}) == Point{1.0, 0.5});
  MapSpec twice = truncate_map(once, BoxSpec::unit(2));
  Rng rng(7);
  for (int t = 0; t < 1000; ++t) {
    Point x = random_point(rng, 2);
    CHECK(once.evaluate(x) == twice.evaluate(x));
  }
}

TEST_CASE("truncation never increases pairwise distances") {
  auto inst = generate_instance(12, Family::Affine, 3, 1e-2, 0.2, NormKind::LInf);
  const auto* trunc = std::get_if<TruncatedMap>(&inst.map.node);
  REQUIRE(trunc != nullptr);
  Rng rng(9);
  for (int t = 0; t < 10000; ++t) {
    Point x = random_point(rng, 3), y = random_point(rng, 3);
    double raw = norm_distance(trunc->inner->evaluate(x), trunc->inner->evaluate(y),
                               NormKind::LInf);
    double clamped =
        norm_distance(inst.map.evaluate(x), inst.map.evaluate(y), NormKind::LInf);
    CHECK(clamped <= raw + 1e-15);
  }
}

TEST_CASE("scaling to a contraction") {
  MapSpec identity{RadialMap{{0.0, 0.0}, 1.0}};
  MapSpec g = scale_to_contraction(identity, 0.2, 2);
  CHECK(g.evaluate({1.0, 1.0}) == Point{0.95, 0.95});
  CHECK(*g.lipschitz(NormKind::L1) == doctest::Approx(0.95));
  CHECK_THROWS_AS(scale_to_contraction(identity, -1.0, 2), ContractViolation);

  // Certified factor shows up in sampled pair ratios.
  auto inst = generate_instance(3, Family::Affine, 2, 1e-2, 0.0, NormKind::L1);
  MapSpec scaled = scale_to_contraction(inst.map, 0.1, 2);
  double L = *scaled.lipschitz(NormKind::L1);
  Rng rng(21);
  for (int t = 0; t < 1000; ++t) {
    Point x = random_point(rng, 2), y = random_point(rng, 2);
    double d = norm_distance(x, y, NormKind::L1);
    double dg = norm_distance(scaled.evaluate(x), scaled.evaluate(y), NormKind::L1);
    CHECK(dg <= L * d + 1e-12);
  }
}

TEST_CASE("padding appends a zero coordinate and keeps the l1 factor") {
  auto inst = generate_instance(5, Family::Radial, 3, 1e-2, 0.3, NormKind::L1);
  MapSpec padded = pad_to_even(inst.map);
  CHECK(padded.dim() == 4);
  CHECK(*padded.lipschitz(NormKind::L1) == *inst.map.lipschitz(NormKind::L1));
  Rng rng(8);
  for (int t = 0; t < 1000; ++t) {
    Point x = random_point(rng, 4);
    Point out = padded.evaluate(x);
    CHECK(out[3] == 0.0);
    Point inner_out = inst.map.evaluate(slice(x, 0, 3));
    CHECK(slice(out, 0, 3) == inner_out);
  }
  CHECK_THROWS_AS(pad_to_even(padded), ContractViolation);
}

TEST_CASE("generated instances carry sound certified bounds") {
  struct Cfg {
    Family family;
    NormKind norm;
  };
  for (Cfg cfg : {Cfg{Family::Radial, NormKind::L1}, Cfg{Family::Affine, NormKind::L1},
                  Cfg{Family::Affine, NormKind::LInf},
                  Cfg{Family::Shapley, NormKind::LInf}}) {
    for (int k : {2, 4}) {
      auto inst = generate_instance(17, cfg.family, k, 1e-2, 0.25, cfg.norm);
      double L = *inst.map.lipschitz(cfg.norm);
      CHECK(L <= 0.75 + kSlack);
      Rng rng(31);
      for (int t = 0; t < 10000; ++t) {
        Point x = random_point(rng, k), y = random_point(rng, k);
        double d = norm_distance(x, y, cfg.norm);
        double df = norm_distance(inst.map.evaluate(x), inst.map.evaluate(y), cfg.norm);
        CHECK(df <= L * d + 1e-12);
      }
    }
  }
}

TEST_CASE("radial ground truth is recorded and exact") {
  auto inst = generate_instance(1, Family::Radial, 4, 1e-3, 0.5, NormKind::L1);
  REQUIRE(inst.known_fixed_point.has_value());
  CHECK(inst.map.evaluate(*inst.known_fixed_point) == *inst.known_fixed_point);
}

TEST_CASE("generation is deterministic, byte for byte") {
  auto a = generate_instance(2, Family::Affine, 2, 1e-2, 0.1, NormKind::LInf);
  auto b = generate_instance(2, Family::Affine, 2, 1e-2, 0.1, NormKind::LInf);
  CHECK(serialize_instance(a) == serialize_instance(b));
  auto c = generate_instance(3, Family::Affine, 2, 1e-2, 0.1, NormKind::LInf);
  CHECK(serialize_instance(a) != serialize_instance(c));
}

TEST_CASE("instance files round-trip losslessly") {
  for (Family family : {Family::Radial, Family::Affine, Family::Shapley}) {
    NormKind norm = family == Family::Radial ? NormKind::L1 : NormKind::LInf;
    auto inst = generate_instance(99, family, 3, 1e-3, 0.4, norm);
    std::string text = serialize_instance(inst);
    auto back = parse_instance(text);
    CHECK(serialize_instance(back) == text);
    // Evaluations agree exactly after the round trip.
    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
      Point x = random_point(rng, 3);
      CHECK(inst.map.evaluate(x) == back.map.evaluate(x));
    }
  }
}

TEST_CASE("instance file save and load") {
  auto dir = std::filesystem::temp_directory_path() / "fixpoint_oracle_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "inst.json").string();
  auto inst = generate_instance(7, Family::Radial, 2, 1e-3, 0.5, NormKind::L1);
  save_instance(inst, path);
  auto back = load_instance(path);
  CHECK(serialize_instance(back) == serialize_instance(inst));
  CHECK(back.id() == "radial_l1_k2_s7");
}

TEST_CASE("generator parameter validation") {
  CHECK_THROWS_AS(generate_instance(1, Family::Shapley, 2, 1e-2, 0.5, NormKind::L1),
                  ContractViolation);
  CHECK_THROWS_AS(generate_instance(1, Family::Radial, 0, 1e-2, 0.5, NormKind::L1),
                  ContractViolation);
  CHECK_THROWS_AS(generate_instance(1, Family::Radial, 2, 0.0, 0.5, NormKind::L1),
                  ContractViolation);
  CHECK_THROWS_AS(generate_instance(1, Family::Radial, 2, 1e-2, 1.5, NormKind::L1),
                  ContractViolation);
}

TEST_CASE("real literals survive the string round trip bit-exactly") {
  Rng rng(55);
  for (int t = 0; t < 10000; ++t) {
    double v = rng.uniform() * std::pow(2.0, static_cast<int>(rng.next() % 40) - 20);
    CHECK(parse_real(format_real(v)) == v);
  }
  CHECK_THROWS_AS(parse_real("not-a-number"), ContractViolation);
  CHECK_THROWS_AS(parse_real("1.5x"), ContractViolation);
}
