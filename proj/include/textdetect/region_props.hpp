#pragma once

#include <optional>
#include <string>
#include <vector>

#include "textdetect/raster.hpp"
#include "textdetect/region.hpp"

namespace textdetect {

struct GeometricProps {
  std::int64_t area = 0;
  BoundingBox bbox;
  double aspect_ratio = 1.0;  // bbox width / height
  double eccentricity = 0.0;
  double solidity = 1.0;      // area / convex hull area
  double extent = 1.0;        // area / bbox area
  int euler_number = 1;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
};

GeometricProps compute_props(const Region& region);

/// Area of the convex hull of all pixel corners, so a single pixel covers 1.
double convex_hull_coverage(const Region& region);

/// Eccentricity of the moments-equivalent ellipse. Central second moments
/// get the 1/12 per-pixel term so a lone pixel is a disc, not a point.
double eccentricity(const Region& region);

/// 1 minus the number of holes; holes are 4-connected background components
/// inside the bounding box grown by one pixel that do not reach its border.
int euler_number(const Region& region);

/// Unset members disable the corresponding test.
struct GeometryThresholds {
  std::optional<double> max_aspect_ratio;
  std::optional<double> min_aspect_ratio;
  std::optional<double> max_eccentricity;
  std::optional<double> min_solidity;
  std::optional<double> min_extent;
  std::optional<double> max_extent;
  /// Reject when euler_number < 1 - max_euler_holes.
  std::optional<int> max_euler_holes;

  static GeometryThresholds disabled() { return {}; }
  void validate() const;

  friend bool operator==(const GeometryThresholds&,
                         const GeometryThresholds&) = default;
};

/// Reason codes in evaluation order.
inline constexpr const char* kReasonAspect = "aspect";
inline constexpr const char* kReasonEccentricity = "eccentricity";
inline constexpr const char* kReasonSolidity = "solidity";
inline constexpr const char* kReasonExtent = "extent";
inline constexpr const char* kReasonEuler = "euler";
inline constexpr const char* kReasonStroke = "stroke";

/// First failing threshold, or nullopt when every enabled test passes.
std::optional<std::string> first_failure(const GeometricProps& props,
                                         const GeometryThresholds& thresholds);

/// A region together with whatever was measured while filtering it.
struct MeasuredRegion {
  Region region;
  std::optional<GeometricProps> props;
  std::optional<double> stroke_variation;
};

struct Rejection {
  MeasuredRegion entry;
  std::string reason;
};

struct FilterOutcome {
  std::vector<MeasuredRegion> kept;
  std::vector<Rejection> rejected;
};

FilterOutcome filter_by_geometry(std::vector<MeasuredRegion> regions,
                                 const GeometryThresholds& thresholds);
FilterOutcome filter_by_geometry(const std::vector<Region>& regions,
                                 const GeometryThresholds& thresholds);

}  // namespace textdetect
