#include "textdetect/component_tree.hpp"

#include <algorithm>
#include <array>
#include <future>
#include <numeric>
#include <stdexcept>
#include <string>

namespace textdetect {

std::string_view to_string(Polarity polarity) {
  return polarity == Polarity::DarkOnLight ? "dark" : "light";
}

BoundingBox bounding_box(const Region& region) {
  if (region.pixels.empty()) {
    throw std::invalid_argument("bounding box of an empty region");
  }
  int x0 = region.pixels.front().x, x1 = x0;
  int y0 = region.pixels.front().y, y1 = y0;
  for (const auto& p : region.pixels) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

BinaryMask to_mask(const Region& region, const BoundingBox& box) {
  BinaryMask mask(box.width, box.height);
  for (const auto& p : region.pixels) {
    mask.set(p.x - box.x, p.y - box.y, true);
  }
  return mask;
}

namespace {

// Root lookup with path halving.
std::int32_t find_root(std::vector<std::int32_t>& zpar, std::int32_t p) {
  while (zpar[p] != p) {
    zpar[p] = zpar[zpar[p]];
    p = zpar[p];
  }
  return p;
}

}  // namespace

ComponentTree ComponentTree::build(const GrayImage& img, Polarity polarity) {
  const GrayImage values =
      polarity == Polarity::DarkOnLight ? img : invert(img);
  const auto f = values.pixels();
  const int w = values.width();
  const int h = values.height();
  const auto n = static_cast<std::int32_t>(f.size());

  // Counting sort, stable in pixel index.
  std::array<std::int32_t, 257> start{};
  for (auto v : f) ++start[v + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::int32_t> order(n);
  for (std::int32_t p = 0; p < n; ++p) order[start[f[p]]++] = p;

  std::vector<std::int32_t> parent(n, -1);
  std::vector<std::int32_t> zpar(n, -1);
  for (const std::int32_t p : order) {
    parent[p] = p;
    zpar[p] = p;
    const int x = p % w;
    const int y = p / w;
    const std::int32_t neighbours[4] = {x > 0 ? p - 1 : -1,
                                        x + 1 < w ? p + 1 : -1,
                                        y > 0 ? p - w : -1,
                                        y + 1 < h ? p + w : -1};
    for (const std::int32_t q : neighbours) {
      if (q < 0 || zpar[q] < 0) continue;
      const std::int32_t r = find_root(zpar, q);
      if (r != p) {
        parent[r] = p;
        zpar[r] = p;
      }
    }
  }

  // Canonicalise: every pixel points at the representative of its own level
  // component, representatives point at the representative of the parent.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::int32_t p = *it;
    const std::int32_t q = parent[p];
    if (f[parent[q]] == f[q]) parent[p] = parent[q];
  }
  auto canonical = [&](std::int32_t p) {
    return parent[p] == p || f[parent[p]] != f[p];
  };

  std::vector<std::int64_t> area(n, 1);
  for (const std::int32_t p : order) {
    if (parent[p] != p) area[parent[p]] += area[p];
  }

  ComponentTree tree;
  tree.width_ = w;
  tree.height_ = h;
  tree.polarity_ = polarity;
  std::vector<NodeId> id_of(n, -1);
  for (const std::int32_t p : order) {
    if (!canonical(p)) continue;
    id_of[p] = static_cast<NodeId>(tree.nodes_.size());
    tree.nodes_.push_back({f[p], area[p], std::nullopt, Point{p % w, p / w}});
  }
  for (const std::int32_t p : order) {
    if (canonical(p) && parent[p] != p) {
      tree.nodes_[id_of[p]].parent = id_of[parent[p]];
    }
  }
  tree.pixel_node_.resize(n);
  for (std::int32_t p = 0; p < n; ++p) {
    tree.pixel_node_[p] = canonical(p) ? id_of[p] : id_of[parent[p]];
  }
  return tree;
}

const ComponentNode& ComponentTree::node(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw std::out_of_range("unknown component tree node " +
                            std::to_string(id));
  }
  return nodes_[id];
}

std::vector<Point> ComponentTree::pixels_of(NodeId id) const {
  return std::move(pixels_of(std::vector<NodeId>{id}).front());
}

std::vector<std::vector<Point>> ComponentTree::pixels_of(
    const std::vector<NodeId>& ids) const {
  for (const NodeId id : ids) node(id);
  const auto count = static_cast<NodeId>(nodes_.size());

  // Preorder numbering: the subtree of n occupies [first[n], first[n] + size[n]).
  std::vector<std::int64_t> subtree(count, 1);
  for (NodeId i = 0; i < count; ++i) {
    if (nodes_[i].parent) subtree[*nodes_[i].parent] += subtree[i];
  }
  std::vector<std::int64_t> first(count, 0);
  std::vector<std::int64_t> next_child(count, 0);
  for (NodeId i = count - 1; i >= 0; --i) {
    if (const auto p = nodes_[i].parent) {
      first[i] = first[*p] + 1 + next_child[*p];
      next_child[*p] += subtree[i];
    }
  }

  std::vector<std::int32_t> by_preorder(pixel_node_.size());
  std::iota(by_preorder.begin(), by_preorder.end(), 0);
  std::stable_sort(by_preorder.begin(), by_preorder.end(),
                   [&](std::int32_t a, std::int32_t b) {
                     return first[pixel_node_[a]] < first[pixel_node_[b]];
                   });

  std::vector<std::vector<Point>> out;
  out.reserve(ids.size());
  for (const NodeId id : ids) {
    const auto lo = std::partition_point(
        by_preorder.begin(), by_preorder.end(),
        [&](std::int32_t p) { return first[pixel_node_[p]] < first[id]; });
    const auto hi = std::partition_point(
        lo, by_preorder.end(), [&](std::int32_t p) {
          return first[pixel_node_[p]] < first[id] + subtree[id];
        });
    std::vector<std::int32_t> members(lo, hi);
    std::sort(members.begin(), members.end());
    std::vector<Point> pts;
    pts.reserve(members.size());
    for (const auto p : members) pts.push_back({p % width_, p / width_});
    out.push_back(std::move(pts));
  }
  return out;
}

void MserParams::validate() const {
  if (delta < 1 || delta > 127) {
    throw std::invalid_argument("delta must be in [1, 127]");
  }
  if (min_area < 1) {
    throw std::invalid_argument("min_area must be at least 1");
  }
  if (max_area && *max_area < min_area) {
    throw std::invalid_argument("max_area must not be below min_area");
  }
  if (!(max_variation >= 0.0)) {
    throw std::invalid_argument("max_variation must be non-negative");
  }
  if (!(min_diversity >= 0.0 && min_diversity <= 1.0)) {
    throw std::invalid_argument("min_diversity must be in [0, 1]");
  }
}

std::int64_t MserParams::effective_max_area(std::int64_t image_area) const {
  return max_area ? *max_area : image_area / 4;
}

double stability(const ComponentTree& tree, NodeId node, int delta) {
  const auto& start = tree.node(node);
  const int limit = start.level + delta;
  const ComponentNode* top = &start;
  while (top->parent && tree.node(*top->parent).level <= limit) {
    top = &tree.node(*top->parent);
  }
  return static_cast<double>(top->area - start.area) /
         static_cast<double>(start.area);
}

std::vector<NodeId> extract_mser_nodes(const ComponentTree& tree,
                                       const MserParams& params) {
  params.validate();
  const auto& nodes = tree.nodes();
  const auto count = static_cast<NodeId>(nodes.size());
  const std::int64_t max_area = params.effective_max_area(
      static_cast<std::int64_t>(tree.width()) * tree.height());

  std::vector<double> q(count);
  for (NodeId i = 0; i < count; ++i) q[i] = stability(tree, i, params.delta);

  // A node is a local minimum when no node within delta levels above or
  // below it on a shared root path is strictly more stable.
  std::vector<char> local_min(count, 1);
  for (NodeId d = 0; d < count; ++d) {
    const int limit = nodes[d].level + params.delta;
    for (auto m = nodes[d].parent; m && nodes[*m].level <= limit;
         m = nodes[*m].parent) {
      if (q[*m] < q[d]) local_min[d] = 0;
      if (q[d] < q[*m]) local_min[*m] = 0;
    }
  }

  std::vector<NodeId> candidates;
  for (NodeId i = 0; i < count; ++i) {
    if (i == tree.root() || !local_min[i]) continue;
    if (q[i] > params.max_variation) continue;
    if (nodes[i].area < params.min_area || nodes[i].area > max_area) continue;
    candidates.push_back(i);
  }

  // Greedy diversity pruning, most stable first; on equal stability the
  // larger (enclosing) region wins.
  auto row_major = [&](NodeId a, NodeId b) {
    const auto& sa = nodes[a].seed_pixel;
    const auto& sb = nodes[b].seed_pixel;
    return std::tie(nodes[a].level, sa.y, sa.x) <
           std::tie(nodes[b].level, sb.y, sb.x);
  };
  std::sort(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
    if (q[a] != q[b]) return q[a] < q[b];
    if (nodes[a].area != nodes[b].area) return nodes[a].area > nodes[b].area;
    return row_major(a, b);
  });

  std::vector<char> accepted(count, 0);
  std::vector<std::int64_t> largest_accepted_below(count, 0);
  std::vector<NodeId> out;
  for (const NodeId c : candidates) {
    const double area = static_cast<double>(nodes[c].area);
    bool duplicate =
        area - static_cast<double>(largest_accepted_below[c]) <
        params.min_diversity * area;
    for (auto m = nodes[c].parent; m && !duplicate; m = nodes[*m].parent) {
      const double up = static_cast<double>(nodes[*m].area);
      if (accepted[*m] && up - area < params.min_diversity * up) {
        duplicate = true;
      }
    }
    if (duplicate) continue;
    accepted[c] = 1;
    out.push_back(c);
    for (auto m = nodes[c].parent; m; m = nodes[*m].parent) {
      largest_accepted_below[*m] =
          std::max(largest_accepted_below[*m], nodes[c].area);
    }
  }
  std::sort(out.begin(), out.end(), row_major);
  return out;
}

std::vector<Region> extract_msers(const ComponentTree& tree,
                                  const MserParams& params) {
  const auto ids = extract_mser_nodes(tree, params);
  auto pixel_sets = tree.pixels_of(ids);
  std::vector<Region> regions;
  regions.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int level = tree.node(ids[i]).level;
    regions.push_back(
        {std::move(pixel_sets[i]), tree.polarity(),
         tree.polarity() == Polarity::DarkOnLight ? level : 255 - level});
  }
  return regions;
}

std::vector<Region> detect_regions(const GrayImage& img,
                                   const MserParams& params,
                                   bool dark_on_light, bool light_on_dark) {
  params.validate();
  auto run = [&](Polarity polarity) {
    return extract_msers(ComponentTree::build(img, polarity), params);
  };
  std::future<std::vector<Region>> light;
  if (light_on_dark) {
    light = std::async(std::launch::async, run, Polarity::LightOnDark);
  }
  std::vector<Region> out;
  if (dark_on_light) out = run(Polarity::DarkOnLight);
  if (light_on_dark) {
    auto rest = light.get();
    out.insert(out.end(), std::make_move_iterator(rest.begin()),
               std::make_move_iterator(rest.end()));
  }
  return out;
}

}  // namespace textdetect
