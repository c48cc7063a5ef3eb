#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "textdetect/region_props.hpp"

using namespace textdetect;

namespace {

Region from_rows(const std::vector<std::string>& rows, int ox = 0, int oy = 0) {
  Region r;
  for (int y = 0; y < static_cast<int>(rows.size()); ++y)
    for (int x = 0; x < static_cast<int>(rows[y].size()); ++x)
      if (rows[y][x] == '#') r.pixels.push_back({x + ox, y + oy});
  return r;
}

Region transformed(const Region& r, auto fn) {
  Region out;
  for (const auto& p : r.pixels) out.pixels.push_back(fn(p));
  std::sort(out.pixels.begin(), out.pixels.end(),
            [](Point a, Point b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
  return out;
}

Region annulus() {
  return from_rows({"#####", "#...#", "#...#", "#...#", "#####"});
}

}  // namespace

TEST_CASE("solid square") {
  const auto p = compute_props(oracle::rect_region(3, 4, 6, 6));
  CHECK(p.area == 36);
  CHECK(p.bbox == BoundingBox{3, 4, 6, 6});
  CHECK(p.aspect_ratio == 1.0);
  CHECK(p.extent == 1.0);
  CHECK(p.solidity == doctest::Approx(1.0));
  CHECK(p.eccentricity == doctest::Approx(0.0));
  CHECK(p.euler_number == 1);
  CHECK(p.centroid_x == doctest::Approx(5.5));
  CHECK(p.centroid_y == doctest::Approx(6.5));
}

TEST_CASE("rectangle and bar") {
  const auto p = compute_props(oracle::rect_region(0, 0, 8, 2));
  CHECK(p.aspect_ratio == 4.0);
  CHECK(p.extent == 1.0);
  // variances 64/12 and 4/12
  CHECK(p.eccentricity == doctest::Approx(std::sqrt(1.0 - 4.0 / 64.0)));

  const auto bar = compute_props(oracle::rect_region(0, 0, 1, 40));
  CHECK(bar.aspect_ratio == doctest::Approx(1.0 / 40.0));
  CHECK(bar.eccentricity == doctest::Approx(std::sqrt(1.0 - 1.0 / 1600.0)));
}

TEST_CASE("L shape") {
  std::vector<std::string> rows(10, "##########");
  for (int y = 0; y < 5; ++y) rows[y] = "#####.....";
  const Region l = from_rows(rows);
  const auto p = compute_props(l);
  CHECK(p.area == 75);
  CHECK(p.extent == doctest::Approx(0.75));
  // the hull cuts the missing corner along (5,0)-(10,5)
  CHECK(convex_hull_coverage(l) == doctest::Approx(87.5));
  CHECK(p.solidity == doctest::Approx(75.0 / 87.5));
  CHECK(p.solidity == doctest::Approx(oracle::props(l).solidity));
}

TEST_CASE("hull coverage of tiny shapes") {
  CHECK(convex_hull_coverage(oracle::rect_region(4, 4, 1, 1)) == doctest::Approx(1.0));
  CHECK(convex_hull_coverage(oracle::rect_region(0, 0, 5, 1)) == doctest::Approx(5.0));
  CHECK(convex_hull_coverage(from_rows({"#.", ".#"})) == doctest::Approx(3.0));
  CHECK(eccentricity(oracle::rect_region(4, 4, 1, 1)) == doctest::Approx(0.0));
}

TEST_CASE("Euler number") {
  CHECK(euler_number(oracle::rect_region(0, 0, 4, 4)) == 1);
  CHECK(euler_number(annulus()) == 0);
  CHECK(euler_number(from_rows({"###", "#.#", "###", "#.#", "###"})) == -1);
  // background touching the outside only diagonally is still a hole
  CHECK(euler_number(from_rows({"####", "#..#", "#.##", "##.#"})) == 0);
}

TEST_CASE("geometry filter") {
  const std::vector<Region> regions{oracle::rect_region(0, 0, 6, 6),
                                    oracle::rect_region(10, 0, 1, 40), annulus()};

  SUBCASE("all disabled keeps everything with props attached") {
    const auto out = filter_by_geometry(regions, GeometryThresholds::disabled());
    REQUIRE(out.kept.size() == 3);
    CHECK(out.rejected.empty());
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(out.kept[i].region.pixels == regions[i].pixels);
      REQUIRE(out.kept[i].props.has_value());
      CHECK(out.kept[i].props->area ==
            static_cast<std::int64_t>(regions[i].pixels.size()));
    }
  }

  SUBCASE("elongated bar fails aspect") {
    GeometryThresholds t;
    t.max_aspect_ratio = 3.0;
    t.min_aspect_ratio = 0.1;
    const auto out = filter_by_geometry(regions, t);
    REQUIRE(out.rejected.size() == 1);
    CHECK(out.rejected[0].reason == kReasonAspect);
    CHECK(out.rejected[0].entry.region.pixels == regions[1].pixels);
    CHECK(out.kept.size() == 2);
  }

  SUBCASE("annulus fails euler") {
    GeometryThresholds t;
    t.max_euler_holes = 0;
    const auto out = filter_by_geometry(regions, t);
    REQUIRE(out.rejected.size() == 1);
    CHECK(out.rejected[0].reason == kReasonEuler);
  }

  SUBCASE("first failing test in order is reported") {
    GeometryThresholds t;
    t.max_euler_holes = 0;
    t.max_extent = 0.8;  // annulus extent is 16/25
    t.max_eccentricity = 0.9;
    const auto out = filter_by_geometry(regions, t);
    REQUIRE(out.rejected.size() == 3);
    CHECK(out.rejected[0].reason == kReasonExtent);
    CHECK(out.rejected[1].reason == kReasonEccentricity);  // bar also fails extent
    CHECK(out.rejected[2].reason == kReasonEuler);
    CHECK(out.kept.empty());
  }

  SUBCASE("invalid thresholds") {
    GeometryThresholds t;
    t.min_extent = 0.8;
    t.max_extent = 0.2;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    GeometryThresholds n;
    n.max_euler_holes = -1;
    CHECK_THROWS_AS(n.validate(), std::invalid_argument);
  }
}

TEST_CASE("props agree with brute-force oracles on random regions") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const int size = std::uniform_int_distribution<int>(1, 14)(rng);
    const int target = std::uniform_int_distribution<int>(1, size * size)(rng);
    const Region r = oracle::random_connected_region(rng, size, target);
    const auto got = compute_props(r);
    const auto want = oracle::props(r);
    CHECK(got.area == want.area);
    CHECK(got.bbox == want.bbox);
    CHECK(got.aspect_ratio == doctest::Approx(want.aspect_ratio).epsilon(1e-12));
    CHECK(got.extent == doctest::Approx(want.extent).epsilon(1e-12));
    CHECK(got.eccentricity == doctest::Approx(want.eccentricity).epsilon(1e-6));
    CHECK(got.solidity == doctest::Approx(want.solidity).epsilon(1e-12));
    CHECK(got.euler_number == want.euler_number);
    CHECK(got.solidity > 0.0);
    CHECK(got.solidity <= 1.0 + 1e-12);
    CHECK(got.extent <= 1.0);
    CHECK(got.eccentricity >= 0.0);
    CHECK(got.eccentricity < 1.0);
  }
}

TEST_CASE("props are invariant under translation and quarter turns") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Region r = oracle::random_connected_region(rng, 10, 1 + trial % 60);
    const auto base = compute_props(r);

    const auto moved = compute_props(transformed(r, [](Point p) { return Point{p.x + 37, p.y + 5}; }));
    CHECK(moved.area == base.area);
    CHECK(moved.aspect_ratio == base.aspect_ratio);
    CHECK(moved.extent == base.extent);
    CHECK(moved.eccentricity == doctest::Approx(base.eccentricity));
    CHECK(moved.solidity == doctest::Approx(base.solidity));
    CHECK(moved.euler_number == base.euler_number);
    CHECK(moved.centroid_x == doctest::Approx(base.centroid_x + 37));

    const auto turned = compute_props(transformed(r, [](Point p) { return Point{20 - p.y, p.x}; }));
    CHECK(turned.area == base.area);
    CHECK(turned.aspect_ratio == doctest::Approx(1.0 / base.aspect_ratio));
    CHECK(turned.extent == doctest::Approx(base.extent));
    CHECK(turned.eccentricity == doctest::Approx(base.eccentricity));
    CHECK(turned.solidity == doctest::Approx(base.solidity));
    CHECK(turned.euler_number == base.euler_number);
  }
}

TEST_CASE("tightening a threshold never keeps more regions") {
  std::mt19937 rng(31);
  std::vector<Region> regions;
  for (int i = 0; i < 120; ++i) {
    regions.push_back(oracle::random_connected_region(rng, 12, 1 + i));
  }
  GeometryThresholds loose;
  loose.max_aspect_ratio = 3.0;
  loose.min_solidity = 0.3;
  loose.max_euler_holes = 4;
  const auto a = filter_by_geometry(regions, loose);
  CHECK(a.kept.size() + a.rejected.size() == regions.size());

  for (auto tighten : {+[](GeometryThresholds& t) { t.max_aspect_ratio = 1.5; },
                       +[](GeometryThresholds& t) { t.min_solidity = 0.6; },
                       +[](GeometryThresholds& t) { t.max_euler_holes = 0; },
                       +[](GeometryThresholds& t) { t.max_eccentricity = 0.8; }}) {
    GeometryThresholds tight = loose;
    tighten(tight);
    const auto b = filter_by_geometry(regions, tight);
    CHECK(b.kept.size() + b.rejected.size() == regions.size());
    CHECK(b.kept.size() <= a.kept.size());
    // kept by the tighter filter implies kept by the looser one
    std::size_t j = 0;
    for (const auto& k : b.kept) {
      while (j < a.kept.size() && a.kept[j].region.pixels != k.region.pixels) ++j;
      CHECK(j < a.kept.size());
    }
  }
}
