#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "textdetect/raster.hpp"
#include "textdetect/region.hpp"

namespace textdetect {

using NodeId = std::int32_t;

struct ComponentNode {
  int level = 0;
  std::int64_t area = 0;
  std::optional<NodeId> parent;
  Point seed_pixel;
};

/// Min-tree of an image: one node per distinct 4-connected component of the
/// sub-level sets {p : I(p) <= t}. A component whose pixel set persists over
/// several thresholds is stored once, at the lowest level where it exists.
///
/// Node ids are ordered so that every child precedes its parent; the root is
/// the last node.
class ComponentTree {
 public:
  static ComponentTree build(const GrayImage& img, Polarity polarity);

  const std::vector<ComponentNode>& nodes() const { return nodes_; }
  const ComponentNode& node(NodeId id) const;
  NodeId root() const { return static_cast<NodeId>(nodes_.size()) - 1; }
  std::size_t size() const { return nodes_.size(); }

  /// Id of the smallest node containing the pixel.
  NodeId node_of(int x, int y) const {
    return pixel_node_[static_cast<std::size_t>(y) * width_ + x];
  }
  const std::vector<NodeId>& pixel_assignment() const { return pixel_node_; }

  int width() const { return width_; }
  int height() const { return height_; }
  Polarity polarity() const { return polarity_; }

  /// Every pixel of the node's component, sorted row-major.
  std::vector<Point> pixels_of(NodeId id) const;

  /// Many-node variant of pixels_of; one pass over the image.
  std::vector<std::vector<Point>> pixels_of(const std::vector<NodeId>& ids) const;

 private:
  int width_ = 0;
  int height_ = 0;
  Polarity polarity_ = Polarity::DarkOnLight;
  std::vector<ComponentNode> nodes_;
  std::vector<NodeId> pixel_node_;
};

struct MserParams {
  int delta = 5;
  std::int64_t min_area = 10;
  /// Unset means a quarter of the image area.
  std::optional<std::int64_t> max_area;
  double max_variation = 0.25;
  double min_diversity = 0.2;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  std::int64_t effective_max_area(std::int64_t image_area) const;

  friend bool operator==(const MserParams&, const MserParams&) = default;
};

/// Area growth ratio over the margin delta:
///   (area(A) - area(node)) / area(node)
/// where A is reached by walking parents while parent.level <= level + delta.
/// Throws std::out_of_range for an unknown node.
double stability(const ComponentTree& tree, NodeId node, int delta);

/// Node ids of the maximally stable regions, in the deterministic output
/// order (level, then seed pixel row-major).
std::vector<NodeId> extract_mser_nodes(const ComponentTree& tree,
                                       const MserParams& params);

std::vector<Region> extract_msers(const ComponentTree& tree,
                                  const MserParams& params);

/// Runs both polarities; dark-on-light results first. Polarities can be
/// switched off individually.
std::vector<Region> detect_regions(const GrayImage& img,
                                   const MserParams& params,
                                   bool dark_on_light = true,
                                   bool light_on_dark = true);

}  // namespace textdetect
