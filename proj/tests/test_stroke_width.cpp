#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles/oracles.hpp"
#include "textdetect/stroke_width.hpp"

using namespace textdetect;

namespace {

BinaryMask filled(int w, int h) {
  BinaryMask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m.set(x, y, true);
  return m;
}

BinaryMask random_mask(std::mt19937& rng, int w, int h, double density) {
  BinaryMask m(w, h);
  std::bernoulli_distribution on(density);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m.set(x, y, on(rng));
  return m;
}

// horizontal bar of thickness `a` joined end to end with one of thickness `b`
Region dumbbell(int a, int b, int len) {
  Region r = oracle::rect_region(0, (b - a) / 2, len, a);
  for (auto& p : oracle::rect_region(len, 0, len, b).pixels) r.pixels.push_back(p);
  std::sort(r.pixels.begin(), r.pixels.end(),
            [](Point p, Point q) { return std::tie(p.y, p.x) < std::tie(q.y, q.x); });
  return r;
}

Region transposed(const Region& r) {
  Region out;
  for (const auto& p : r.pixels) out.pixels.push_back({p.y, p.x});
  std::sort(out.pixels.begin(), out.pixels.end(),
            [](Point p, Point q) { return std::tie(p.y, p.x) < std::tie(q.y, q.x); });
  return out;
}

}  // namespace

TEST_CASE("distance transform of a full-width bar") {
  const auto d = distance_transform(filled(20, 5));
  for (int x = 2; x < 18; ++x) CHECK(d.at(x, 2) == 3.0);
  CHECK(d.at(0, 2) == 1.0);
  for (int x = 0; x < 20; ++x) {
    CHECK(d.at(x, 0) == 1.0);
    CHECK(d.at(x, 4) == 1.0);
  }
}

TEST_CASE("distance transform background is zero") {
  BinaryMask m = filled(5, 5);
  m.set(2, 2, false);
  const auto d = distance_transform(m);
  CHECK(d.at(2, 2) == 0.0);
  CHECK(d.at(1, 2) == 1.0);
  CHECK(d.at(1, 1) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("distance transform matches brute force") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    const int w = std::uniform_int_distribution<int>(1, 20)(rng);
    const int h = std::uniform_int_distribution<int>(1, 20)(rng);
    const BinaryMask m = random_mask(rng, w, h, 0.5 + 0.45 * (trial % 2));
    const auto got = distance_transform(m);
    const auto want = oracle::distance(m);
    REQUIRE(got.values.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.values[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("skeleton basics") {
  CHECK(skeletonize(BinaryMask(6, 6)).count() == 0);

  BinaryMask dot(3, 3);
  dot.set(1, 1, true);
  CHECK(skeletonize(dot) == dot);

  const BinaryMask bar = filled(20, 5);
  const BinaryMask sk = skeletonize(bar);
  CHECK(sk.count() > 0);
  CHECK(sk.count() <= 24);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 20; ++x)
      if (sk.at(x, y)) CHECK(bar.at(x, y));
}

TEST_CASE("skeletons are stable subsets of their masks") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const BinaryMask m = random_mask(rng, 16, 16, 0.75);
    const BinaryMask sk = skeletonize(m);
    CHECK(skeletonize(sk) == sk);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x)
        if (sk.at(x, y)) CHECK(m.at(x, y));
  }
}

TEST_CASE("skeletons of solid rectangles are thin") {
  for (int w = 3; w <= 24; w += 3) {
    for (int h = 3; h <= 12; ++h) {
      const BinaryMask sk = skeletonize(filled(w, h));
      CHECK(sk.count() > 0);
      for (int y = 0; y + 1 < h; ++y) {
        for (int x = 0; x + 1 < w; ++x) {
          CHECK_FALSE((sk.at(x, y) && sk.at(x + 1, y) && sk.at(x, y + 1) &&
                       sk.at(x + 1, y + 1)));
        }
      }
    }
  }
}

TEST_CASE("summary statistics") {
  const auto empty = summarize_widths({});
  CHECK(empty.mean == 0.0);
  CHECK(empty.variation == 0.0);

  const auto s = summarize_widths({2.0, 4.0});
  CHECK(s.mean == 3.0);
  CHECK(s.stddev == 1.0);
  CHECK(s.variation == doctest::Approx(1.0 / 3.0));

  CHECK(summarize_widths({0.0, 0.0}).variation == 0.0);
}

TEST_CASE("stroke width of simple shapes") {
  const auto bar = stroke_stats(oracle::rect_region(0, 0, 20, 5), 2);
  REQUIRE_FALSE(bar.widths.empty());
  for (double w : bar.widths) CHECK(w == 5.0);
  CHECK(bar.variation == 0.0);

  const auto dot = stroke_stats(oracle::rect_region(3, 3, 1, 1));
  REQUIRE(dot.widths.size() == 1);
  CHECK(dot.widths[0] == 1.0);
  CHECK(dot.variation == 0.0);

  const auto block = stroke_stats(oracle::rect_region(0, 0, 2, 2));
  CHECK_FALSE(block.widths.empty());

  CHECK(stroke_stats(dumbbell(3, 9, 40), 2).variation > 0.3);
}

TEST_CASE("bars of uniform width measure their width in either orientation") {
  for (int w : {3, 5, 7, 9}) {
    const Region bar = oracle::rect_region(0, 0, 4 * w + 8, w);
    for (const Region& r : {bar, transposed(bar)}) {
      const auto s = stroke_stats(r, 2);
      CHECK(s.variation <= 0.05);
      CHECK(std::abs(s.mean - w) <= 0.5);
    }
  }
}

TEST_CASE("variation is stable under scaling and transposition") {
  for (int k : {1, 2, 3}) {
    const auto s = stroke_stats(dumbbell(3 * k, 9 * k, 40 * k), 2);
    CHECK(s.variation > 0.3);
    CHECK(stroke_stats(transposed(dumbbell(3 * k, 9 * k, 40 * k)), 2).variation ==
          doctest::Approx(s.variation).epsilon(0.1));
  }
}

TEST_CASE("stroke filter") {
  const std::vector<Region> regions{oracle::rect_region(0, 0, 20, 5), dumbbell(3, 9, 40)};

  StrokeParams keep_all;
  keep_all.max_variation = std::numeric_limits<double>::infinity();
  const auto all = filter_by_stroke(regions, keep_all);
  CHECK(all.kept.size() == 2);
  for (const auto& k : all.kept) CHECK(k.stroke_variation.has_value());

  StrokeParams strict;
  strict.max_variation = 0.0;
  const auto only_bar = filter_by_stroke(regions, strict);
  REQUIRE(only_bar.kept.size() == 1);
  CHECK(only_bar.kept[0].region.pixels == regions[0].pixels);

  StrokeParams mid;
  mid.max_variation = 0.2;
  const auto out = filter_by_stroke(regions, mid);
  REQUIRE(out.rejected.size() == 1);
  CHECK(out.rejected[0].reason == kReasonStroke);
  CHECK(out.rejected[0].entry.region.pixels == regions[1].pixels);

  StrokeParams bad;
  bad.max_variation = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.end_trim = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
