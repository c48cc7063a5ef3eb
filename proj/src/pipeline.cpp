#include "textdetect/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace textdetect {

GeometryThresholds PipelineConfig::default_geometry() {
  GeometryThresholds t;
  t.max_aspect_ratio = 3.0;
  t.min_aspect_ratio = 0.1;
  t.max_eccentricity = 0.995;
  t.min_solidity = 0.2;
  t.min_extent = 0.1;
  t.max_extent = 0.9;
  t.max_euler_holes = 4;
  return t;
}

void PipelineConfig::validate() const {
  if (!(stretch_k > 0.0)) {
    throw std::invalid_argument("stretch_k must be positive");
  }
  mser.validate();
  geometry.validate();
  stroke.validate();
  if (!(expansion_amount >= 0.0)) {
    throw std::invalid_argument("expansion_amount must be non-negative");
  }
  if (!(merge_overlap_min >= 0.0 && merge_overlap_min <= 1.0)) {
    throw std::invalid_argument("merge_overlap_min must be in [0, 1]");
  }
}

std::vector<BoundingBox> expand_boxes(const std::vector<BoundingBox>& boxes,
                                      double expansion_amount, int frame_width,
                                      int frame_height) {
  std::vector<BoundingBox> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) {
    const int dx = static_cast<int>(std::lround(expansion_amount * b.width));
    const int dy = static_cast<int>(std::lround(expansion_amount * b.height));
    const int x0 = std::max(0, b.x - dx);
    const int y0 = std::max(0, b.y - dy);
    const int x1 = std::min(frame_width, b.right() + dx);
    const int y1 = std::min(frame_height, b.bottom() + dy);
    out.push_back({x0, y0, x1 - x0, y1 - y0});
  }
  return out;
}

namespace {

long long intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const long long w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const long long h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return w > 0 && h > 0 ? w * h : 0;
}

bool connects(const BoundingBox& a, const BoundingBox& b, double min_overlap) {
  const long long inter = intersection_area(a, b);
  if (inter == 0) return false;
  return static_cast<double>(inter) >=
         min_overlap * static_cast<double>(std::min(a.area(), b.area()));
}

BoundingBox unite(const BoundingBox& a, const BoundingBox& b) {
  const int x0 = std::min(a.x, b.x), y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.right(), b.right());
  const int y1 = std::max(a.bottom(), b.bottom());
  return {x0, y0, x1 - x0, y1 - y0};
}

bool box_order(const BoundingBox& a, const BoundingBox& b) {
  return std::tie(a.y, a.x, a.width, a.height) <
         std::tie(b.y, b.x, b.width, b.height);
}

std::vector<BoundingBox> merge_once(const std::vector<BoundingBox>& boxes,
                                    double min_overlap) {
  const std::size_t n = boxes.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (connects(boxes[i], boxes[j], min_overlap)) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::optional<BoundingBox>> unions(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& u = unions[find(i)];
    u = u ? unite(*u, boxes[i]) : boxes[i];
  }
  std::vector<BoundingBox> out;
  for (const auto& u : unions) {
    if (u) out.push_back(*u);
  }
  std::sort(out.begin(), out.end(), box_order);
  return out;
}

}  // namespace

std::vector<BoundingBox> merge_overlapping(const std::vector<BoundingBox>& boxes,
                                           double merge_overlap_min) {
  std::vector<BoundingBox> current = merge_once(boxes, merge_overlap_min);
  while (true) {
    auto next = merge_once(current, merge_overlap_min);
    if (next.size() == current.size()) return next;
    current = std::move(next);
  }
}

std::optional<BoundingBox> select_primary(const std::vector<BoundingBox>& boxes) {
  std::optional<BoundingBox> best;
  for (const auto& b : boxes) {
    if (!best || b.area() > best->area() ||
        (b.area() == best->area() &&
         std::tie(b.y, b.x) < std::tie(best->y, best->x))) {
      best = b;
    }
  }
  return best;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = static_cast<double>(intersection_area(a, b));
  return inter / static_cast<double>(a.area() + b.area() - inter);
}

DetectionResult detect(const GrayImage& img, const PipelineConfig& config) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  DetectionResult result;
  result.image_width = img.width();
  result.image_height = img.height();
  auto& trace = result.trace;
  const auto started = Clock::now();
  auto lap = [&, last = started](const char* stage) mutable {
    const auto now = Clock::now();
    result.timing_ms[stage] =
        std::chrono::duration<double, std::milli>(now - last).count();
    last = now;
  };

  const GrayImage prepared =
      config.stretch_enabled ? contrast_stretch(img, config.stretch_k) : img;
  lap("stretch");

  StageRecord mser{"mser", 0, {}, {}};
  for (auto& r : detect_regions(prepared, config.mser, config.detect_dark,
                                config.detect_light)) {
    mser.kept.push_back({std::move(r), std::nullopt, std::nullopt});
  }
  mser.input_count = mser.kept.size();
  lap("mser");

  FilterOutcome geometry = filter_by_geometry(mser.kept, config.geometry);
  lap("geometry");

  FilterOutcome stroke = filter_by_stroke(geometry.kept, config.stroke);
  lap("stroke");

  for (const auto& entry : stroke.kept) {
    trace.region_boxes.push_back(entry.props ? entry.props->bbox
                                             : bounding_box(entry.region));
  }
  trace.expanded_boxes = expand_boxes(trace.region_boxes,
                                      config.expansion_amount, img.width(),
                                      img.height());
  trace.final_boxes =
      merge_overlapping(trace.expanded_boxes, config.merge_overlap_min);
  trace.primary_box = select_primary(trace.final_boxes);
  lap("merge");

  const std::size_t geometry_in = mser.kept.size();
  const std::size_t stroke_in = geometry.kept.size();
  trace.stages.push_back(std::move(mser));
  trace.stages.push_back({"geometry", geometry_in, std::move(geometry.kept),
                          std::move(geometry.rejected)});
  trace.stages.push_back({"stroke", stroke_in, std::move(stroke.kept),
                          std::move(stroke.rejected)});

  result.final_boxes = trace.final_boxes;
  result.primary_box = trace.primary_box;
  result.timing_ms["total"] =
      std::chrono::duration<double, std::milli>(Clock::now() - started).count();
  return result;
}

}  // namespace textdetect
