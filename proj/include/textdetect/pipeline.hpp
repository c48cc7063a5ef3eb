#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textdetect/component_tree.hpp"
#include "textdetect/raster.hpp"
#include "textdetect/region_props.hpp"
#include "textdetect/stroke_width.hpp"

namespace textdetect {

/// Every tunable knob of the detector. Default-constructed values are the
/// documented defaults.
struct PipelineConfig {
  bool stretch_enabled = true;
  double stretch_k = 2.0;
  bool detect_dark = true;
  bool detect_light = true;
  MserParams mser;
  GeometryThresholds geometry = default_geometry();
  StrokeParams stroke;
  /// Fraction of a box's width (height) added on the left and right (top
  /// and bottom). Larger means more growth.
  double expansion_amount = 0.2;
  /// Minimum intersection / min(area) for two boxes to merge; 0 merges any
  /// positive-area overlap.
  double merge_overlap_min = 0.0;

  static GeometryThresholds default_geometry();
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// One region-filtering stage. Kept regions of a stage are the input of the
/// next one, so input_count == kept.size() + rejected.size().
struct StageRecord {
  std::string name;
  std::size_t input_count = 0;
  std::vector<MeasuredRegion> kept;
  std::vector<Rejection> rejected;
};

struct DetectionTrace {
  std::vector<StageRecord> stages;  // "mser", "geometry", "stroke"
  std::vector<BoundingBox> region_boxes;
  std::vector<BoundingBox> expanded_boxes;
  std::vector<BoundingBox> final_boxes;
  std::optional<BoundingBox> primary_box;
};

struct DetectionResult {
  int image_width = 0;
  int image_height = 0;
  std::vector<BoundingBox> final_boxes;
  std::optional<BoundingBox> primary_box;
  DetectionTrace trace;
  /// Wall time per stage in milliseconds, keyed by stage name.
  std::map<std::string, double> timing_ms;
};

/// Grows each box by round(amount * width) horizontally and
/// round(amount * height) vertically on every side, clamped to the frame.
std::vector<BoundingBox> expand_boxes(const std::vector<BoundingBox>& boxes,
                                      double expansion_amount, int frame_width,
                                      int frame_height);

/// Replaces every group of transitively overlapping boxes by its union,
/// repeating until no two output boxes overlap enough to merge. Output is
/// sorted by (y, x, width, height).
std::vector<BoundingBox> merge_overlapping(const std::vector<BoundingBox>& boxes,
                                           double merge_overlap_min);

/// Largest box; ties go to the topmost, then leftmost.
std::optional<BoundingBox> select_primary(const std::vector<BoundingBox>& boxes);

double iou(const BoundingBox& a, const BoundingBox& b);

DetectionResult detect(const GrayImage& img, const PipelineConfig& config);

}  // namespace textdetect
