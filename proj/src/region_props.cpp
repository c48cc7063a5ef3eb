#include "textdetect/region_props.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace textdetect {

namespace {

struct Corner {
  long long x;
  long long y;
  friend auto operator<=>(const Corner&, const Corner&) = default;
};

long long cross(const Corner& o, const Corner& a, const Corner& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

void require_nonempty(const Region& region) {
  if (region.pixels.empty()) {
    throw std::invalid_argument("region has no pixels");
  }
}

}  // namespace

double convex_hull_coverage(const Region& region) {
  require_nonempty(region);
  // Only the extreme pixels of each row can contribute hull corners.
  std::map<int, std::pair<int, int>> rows;
  for (const auto& p : region.pixels) {
    auto [it, inserted] = rows.try_emplace(p.y, p.x, p.x);
    if (!inserted) {
      it->second.first = std::min(it->second.first, p.x);
      it->second.second = std::max(it->second.second, p.x);
    }
  }
  std::vector<Corner> pts;
  pts.reserve(rows.size() * 4);
  for (const auto& [y, span] : rows) {
    pts.push_back({span.first, y});
    pts.push_back({span.first, y + 1});
    pts.push_back({span.second + 1, y});
    pts.push_back({span.second + 1, y + 1});
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Andrew's monotone chain.
  std::vector<Corner> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);

  long long twice = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return static_cast<double>(std::llabs(twice)) / 2.0;
}

double eccentricity(const Region& region) {
  require_nonempty(region);
  const double n = static_cast<double>(region.area());
  double sx = 0.0, sy = 0.0;
  for (const auto& p : region.pixels) {
    sx += p.x;
    sy += p.y;
  }
  const double cx = sx / n, cy = sy / n;
  double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
  for (const auto& p : region.pixels) {
    const double dx = p.x - cx, dy = p.y - cy;
    mu20 += dx * dx;
    mu02 += dy * dy;
    mu11 += dx * dy;
  }
  const double mxx = mu20 / n + 1.0 / 12.0;
  const double myy = mu02 / n + 1.0 / 12.0;
  const double mxy = mu11 / n;
  const double half_trace = (mxx + myy) / 2.0;
  const double root =
      std::sqrt((mxx - myy) * (mxx - myy) / 4.0 + mxy * mxy);
  const double major = half_trace + root;
  const double minor = half_trace - root;
  return std::sqrt(std::max(0.0, 1.0 - minor / major));
}

int euler_number(const Region& region) {
  require_nonempty(region);
  const BoundingBox box = bounding_box(region);
  const int w = box.width + 2;
  const int h = box.height + 2;
  // 0 background, 1 foreground, 2 visited background.
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(w) * h, 0);
  for (const auto& p : region.pixels) {
    grid[static_cast<std::size_t>(p.y - box.y + 1) * w + (p.x - box.x + 1)] = 1;
  }

  std::vector<int> stack;
  auto flood = [&](int start) {
    grid[start] = 2;
    stack.push_back(start);
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      const int x = i % w, y = i / w;
      const int next[4] = {x > 0 ? i - 1 : -1, x + 1 < w ? i + 1 : -1,
                           y > 0 ? i - w : -1, y + 1 < h ? i + w : -1};
      for (const int j : next) {
        if (j >= 0 && grid[j] == 0) {
          grid[j] = 2;
          stack.push_back(j);
        }
      }
    }
  };

  flood(0);  // the padded corner is always background
  int holes = 0;
  for (int i = 0; i < w * h; ++i) {
    if (grid[i] == 0) {
      ++holes;
      flood(i);
    }
  }
  return 1 - holes;
}

GeometricProps compute_props(const Region& region) {
  require_nonempty(region);
  GeometricProps props;
  props.area = static_cast<std::int64_t>(region.area());
  props.bbox = bounding_box(region);
  props.aspect_ratio =
      static_cast<double>(props.bbox.width) / props.bbox.height;
  props.extent =
      static_cast<double>(props.area) / static_cast<double>(props.bbox.area());
  props.eccentricity = eccentricity(region);
  props.solidity =
      static_cast<double>(props.area) / convex_hull_coverage(region);
  props.euler_number = euler_number(region);
  double sx = 0.0, sy = 0.0;
  for (const auto& p : region.pixels) {
    sx += p.x;
    sy += p.y;
  }
  props.centroid_x = sx / static_cast<double>(props.area);
  props.centroid_y = sy / static_cast<double>(props.area);
  return props;
}

void GeometryThresholds::validate() const {
  auto ordered = [](const std::optional<double>& lo,
                    const std::optional<double>& hi, const char* what) {
    if (lo && hi && *lo > *hi) {
      throw std::invalid_argument(std::string(what) +
                                  ": minimum exceeds maximum");
    }
  };
  ordered(min_aspect_ratio, max_aspect_ratio, "aspect_ratio");
  ordered(min_extent, max_extent, "extent");
  if (max_euler_holes && *max_euler_holes < 0) {
    throw std::invalid_argument("max_euler_holes must be non-negative");
  }
}

std::optional<std::string> first_failure(const GeometricProps& props,
                                         const GeometryThresholds& t) {
  if ((t.max_aspect_ratio && props.aspect_ratio > *t.max_aspect_ratio) ||
      (t.min_aspect_ratio && props.aspect_ratio < *t.min_aspect_ratio)) {
    return kReasonAspect;
  }
  if (t.max_eccentricity && props.eccentricity > *t.max_eccentricity) {
    return kReasonEccentricity;
  }
  if (t.min_solidity && props.solidity < *t.min_solidity) {
    return kReasonSolidity;
  }
  if ((t.min_extent && props.extent < *t.min_extent) ||
      (t.max_extent && props.extent > *t.max_extent)) {
    return kReasonExtent;
  }
  if (t.max_euler_holes && props.euler_number < 1 - *t.max_euler_holes) {
    return kReasonEuler;
  }
  return std::nullopt;
}

FilterOutcome filter_by_geometry(std::vector<MeasuredRegion> regions,
                                 const GeometryThresholds& thresholds) {
  thresholds.validate();
  FilterOutcome out;
  for (auto& entry : regions) {
    if (!entry.props) entry.props = compute_props(entry.region);
    if (auto reason = first_failure(*entry.props, thresholds)) {
      out.rejected.push_back({std::move(entry), std::move(*reason)});
    } else {
      out.kept.push_back(std::move(entry));
    }
  }
  return out;
}

FilterOutcome filter_by_geometry(const std::vector<Region>& regions,
                                 const GeometryThresholds& thresholds) {
  std::vector<MeasuredRegion> measured;
  measured.reserve(regions.size());
  for (const auto& r : regions) measured.push_back({r, std::nullopt, std::nullopt});
  return filter_by_geometry(std::move(measured), thresholds);
}

}  // namespace textdetect
