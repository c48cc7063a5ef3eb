#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "textdetect/raster.hpp"

namespace textdetect {

enum class Polarity { DarkOnLight, LightOnDark };

std::string_view to_string(Polarity polarity);

/// A 4-connected pixel set reported by the detector.
///
/// `pixels` is kept sorted row-major (y, then x). `source_level` is the
/// intensity threshold in the original image's scale, so a light-on-dark
/// region extracted at inverted level t reports 255 - t.
struct Region {
  std::vector<Point> pixels;
  Polarity polarity = Polarity::DarkOnLight;
  int source_level = 0;

  std::size_t area() const { return pixels.size(); }
};

BoundingBox bounding_box(const Region& region);

/// Rasterises a region into a mask covering its bounding box. Region pixels
/// map to (x - box.x, y - box.y).
BinaryMask to_mask(const Region& region, const BoundingBox& box);

}  // namespace textdetect
