#pragma once

#include <limits>
#include <vector>

#include "textdetect/raster.hpp"
#include "textdetect/region.hpp"
#include "textdetect/region_props.hpp"

namespace textdetect {

/// Row-major real-valued field with the dimensions of the source mask.
struct DistanceField {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

/// Exact Euclidean distance from every foreground pixel to the nearest
/// background pixel, treating everything outside the mask as background.
/// Background pixels are 0.
DistanceField distance_transform(const BinaryMask& mask);

/// Zhang-Suen thinning, iterated until stable.
BinaryMask skeletonize(const BinaryMask& mask);

struct StrokeWidthStats {
  std::vector<double> widths;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double variation = 0.0;
};

struct StrokeParams {
  /// Regions with variation above this are rejected; +inf keeps everything.
  double max_variation = 0.4;
  int end_trim = 2;

  void validate() const;

  friend bool operator==(const StrokeParams&, const StrokeParams&) = default;
};

/// Summary statistics of a width sample; variation is stddev / mean.
StrokeWidthStats summarize_widths(std::vector<double> widths);

/// Widths (2 * distance - 1) sampled on the region's skeleton after pruning
/// `end_trim` pixels from every open branch end.
StrokeWidthStats stroke_stats(const Region& region, int end_trim = 2);

FilterOutcome filter_by_stroke(std::vector<MeasuredRegion> regions,
                               const StrokeParams& params);
FilterOutcome filter_by_stroke(const std::vector<Region>& regions,
                               const StrokeParams& params);

}  // namespace textdetect
