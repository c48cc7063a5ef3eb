#include "textdetect/stroke_width.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace textdetect {

namespace {

constexpr double kInf = 1e20;

// Lower envelope of parabolas: squared distance along one line.
void squared_distance_1d(std::vector<double>& f, std::size_t n,
                         std::vector<int>& v, std::vector<double>& z,
                         std::vector<double>& d) {
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  d.assign(n, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < static_cast<int>(n); ++q) {
    double s = 0.0;
    while (true) {
      const int r = v[k];
      s = ((f[q] + double(q) * q) - (f[r] + double(r) * r)) / (2.0 * (q - r));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < static_cast<int>(n); ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
  std::copy(d.begin(), d.end(), f.begin());
}

constexpr int kDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};  // N, NE, E, SE, S, SW, W, NW
constexpr int kDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

int degree(const BinaryMask& m, int x, int y) {
  int n = 0;
  for (int i = 0; i < 8; ++i) {
    const int nx = x + kDx[i], ny = y + kDy[i];
    if (m.contains(nx, ny) && m.at(nx, ny)) ++n;
  }
  return n;
}

}  // namespace

DistanceField distance_transform(const BinaryMask& mask) {
  const int w = mask.width() + 2;
  const int h = mask.height() + 2;
  std::vector<double> grid(static_cast<std::size_t>(w) * h, 0.0);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) grid[static_cast<std::size_t>(y + 1) * w + x + 1] = kInf;
    }
  }

  std::vector<double> line;
  std::vector<int> v;
  std::vector<double> z, d;
  line.resize(static_cast<std::size_t>(std::max(w, h)));
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) line[y] = grid[static_cast<std::size_t>(y) * w + x];
    squared_distance_1d(line, h, v, z, d);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = line[y];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) line[x] = grid[static_cast<std::size_t>(y) * w + x];
    squared_distance_1d(line, w, v, z, d);
    for (int x = 0; x < w; ++x) grid[static_cast<std::size_t>(y) * w + x] = line[x];
  }

  DistanceField out{mask.width(), mask.height(), {}};
  out.values.resize(static_cast<std::size_t>(mask.width()) * mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      out.values[static_cast<std::size_t>(y) * mask.width() + x] =
          std::sqrt(grid[static_cast<std::size_t>(y + 1) * w + x + 1]);
    }
  }
  return out;
}

BinaryMask skeletonize(const BinaryMask& mask) {
  BinaryMask img = mask;
  auto px = [&](int x, int y) {
    return img.contains(x, y) && img.at(x, y) ? 1 : 0;
  };
  std::vector<Point> doomed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      doomed.clear();
      for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
          if (!img.at(x, y)) continue;
          int p[8];  // P2..P9 clockwise from north
          for (int i = 0; i < 8; ++i) p[i] = px(x + kDx[i], y + kDy[i]);
          int b = 0, a = 0;
          for (int i = 0; i < 8; ++i) {
            b += p[i];
            if (p[i] == 0 && p[(i + 1) % 8] == 1) ++a;
          }
          if (b < 2 || b > 6 || a != 1) continue;
          const int n = p[0], e = p[2], s = p[4], wv = p[6];
          const bool ok = pass == 0 ? (n * e * s == 0 && e * s * wv == 0)
                                    : (n * e * wv == 0 && n * s * wv == 0);
          if (ok) doomed.push_back({x, y});
        }
      }
      for (const auto& q : doomed) img.set(q.x, q.y, false);
      if (!doomed.empty()) changed = true;
    }
  }
  return img;
}

void StrokeParams::validate() const {
  if (!(max_variation >= 0.0)) {
    throw std::invalid_argument("max_variation must be non-negative");
  }
  if (end_trim < 0) {
    throw std::invalid_argument("end_trim must be non-negative");
  }
}

StrokeWidthStats summarize_widths(std::vector<double> widths) {
  StrokeWidthStats stats;
  stats.widths = std::move(widths);
  if (stats.widths.empty()) return stats;
  const double n = static_cast<double>(stats.widths.size());
  double sum = 0.0;
  for (double v : stats.widths) sum += v;
  stats.mean = sum / n;
  double sq = 0.0;
  for (double v : stats.widths) sq += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(sq / n);
  stats.variation = stats.mean > 0.0 ? stats.stddev / stats.mean : 0.0;
  return stats;
}

StrokeWidthStats stroke_stats(const Region& region, int end_trim) {
  if (region.pixels.empty()) {
    throw std::invalid_argument("region has no pixels");
  }
  const BoundingBox box = bounding_box(region);
  const BinaryMask mask = to_mask(region, box);
  const DistanceField dist = distance_transform(mask);
  const BinaryMask skeleton = skeletonize(mask);

  std::vector<Point> all;
  for (int y = 0; y < skeleton.height(); ++y) {
    for (int x = 0; x < skeleton.width(); ++x) {
      if (skeleton.at(x, y)) all.push_back({x, y});
    }
  }
  if (all.empty()) {
    // Thinning can erase a whole blob (a 2x2 square, for one); fall back
    // to the medial pixels of maximal distance.
    const double peak = *std::max_element(dist.values.begin(), dist.values.end());
    for (int y = 0; y < mask.height(); ++y) {
      for (int x = 0; x < mask.width(); ++x) {
        if (mask.at(x, y) && dist.at(x, y) == peak) all.push_back({x, y});
      }
    }
  }

  BinaryMask removed(skeleton.width(), skeleton.height());
  for (const auto& start : all) {
    if (degree(skeleton, start.x, start.y) != 1) continue;
    Point cur = start;
    for (int step = 0; step < end_trim; ++step) {
      if (degree(skeleton, cur.x, cur.y) > 2) break;
      removed.set(cur.x, cur.y, true);
      int remaining = 0;
      Point next{};
      for (int i = 0; i < 8; ++i) {
        const int nx = cur.x + kDx[i], ny = cur.y + kDy[i];
        if (skeleton.contains(nx, ny) && skeleton.at(nx, ny) &&
            !removed.at(nx, ny)) {
          ++remaining;
          next = {nx, ny};
        }
      }
      if (remaining != 1) break;
      cur = next;
    }
  }

  std::vector<double> trimmed, untrimmed;
  for (const auto& p : all) {
    const double width = 2.0 * dist.at(p.x, p.y) - 1.0;
    untrimmed.push_back(width);
    if (!(skeleton.contains(p.x, p.y) && removed.at(p.x, p.y))) {
      trimmed.push_back(width);
    }
  }
  return summarize_widths(trimmed.empty() ? std::move(untrimmed)
                                          : std::move(trimmed));
}

FilterOutcome filter_by_stroke(std::vector<MeasuredRegion> regions,
                               const StrokeParams& params) {
  params.validate();
  FilterOutcome out;
  for (auto& entry : regions) {
    if (!entry.stroke_variation) {
      entry.stroke_variation = stroke_stats(entry.region, params.end_trim).variation;
    }
    if (*entry.stroke_variation > params.max_variation) {
      out.rejected.push_back({std::move(entry), kReasonStroke});
    } else {
      out.kept.push_back(std::move(entry));
    }
  }
  return out;
}

FilterOutcome filter_by_stroke(const std::vector<Region>& regions,
                               const StrokeParams& params) {
  std::vector<MeasuredRegion> measured;
  measured.reserve(regions.size());
  for (const auto& r : regions) measured.push_back({r, std::nullopt, std::nullopt});
  return filter_by_stroke(std::move(measured), params);
}

}  // namespace textdetect
