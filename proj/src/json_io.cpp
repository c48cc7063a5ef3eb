#include "textdetect/json_io.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace textdetect {

using nlohmann::json;

namespace {

class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string prefix,
               std::set<std::string> allowed)
      : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) {
      throw ConfigError(prefix_.empty() ? "<root>" : prefix_,
                        "config" + where() + " must be a JSON object");
    }
    for (const auto& [key, value] : obj_.items()) {
      if (!allowed.contains(key)) {
        throw ConfigError(path(key), "unknown config key \"" + path(key) + "\"");
      }
    }
  }

  std::string path(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  const json* find(const std::string& key) const {
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void read_bool(const std::string& key, bool& out) const {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "must be true or false");
      out = v->get<bool>();
    }
  }

  void read_number(const std::string& key, double& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key, "must be a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void read_integer(const std::string& key, Int& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "must be an integer");
      out = v->get<Int>();
    }
  }

  void read_optional_number(const std::string& key,
                            std::optional<double>& out) const {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_number()) {
        out = v->get<double>();
      } else {
        fail(key, "must be a number or null");
      }
    }
  }

  template <typename Int>
  void read_optional_integer(const std::string& key,
                             std::optional<Int>& out) const {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_number_integer()) {
        out = v->get<Int>();
      } else {
        fail(key, "must be an integer or null");
      }
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(path(key), "config key \"" + path(key) + "\" " + what);
  }

 private:
  std::string where() const { return prefix_.empty() ? "" : " \"" + prefix_ + "\""; }

  const json& obj_;
  std::string prefix_;
};

json optional_or_null(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

PipelineConfig config_from_json(const json& doc) {
  PipelineConfig c;
  const ObjectReader top(doc, "",
                         {"stretch_enabled", "stretch_k", "detect_dark",
                          "detect_light", "mser", "geometry", "stroke",
                          "expansion_amount", "merge_overlap_min"});
  top.read_bool("stretch_enabled", c.stretch_enabled);
  top.read_number("stretch_k", c.stretch_k);
  top.read_bool("detect_dark", c.detect_dark);
  top.read_bool("detect_light", c.detect_light);
  top.read_number("expansion_amount", c.expansion_amount);
  top.read_number("merge_overlap_min", c.merge_overlap_min);
  if (!(c.stretch_k > 0.0)) top.fail("stretch_k", "must be positive");
  if (!(c.expansion_amount >= 0.0)) top.fail("expansion_amount", "must be >= 0");
  if (!(c.merge_overlap_min >= 0.0 && c.merge_overlap_min <= 1.0)) {
    top.fail("merge_overlap_min", "must be in [0, 1]");
  }

  if (const json* m = top.find("mser")) {
    const ObjectReader r(*m, "mser",
                         {"delta", "min_area", "max_area", "max_variation",
                          "min_diversity"});
    r.read_integer("delta", c.mser.delta);
    r.read_integer("min_area", c.mser.min_area);
    r.read_optional_integer("max_area", c.mser.max_area);
    r.read_number("max_variation", c.mser.max_variation);
    r.read_number("min_diversity", c.mser.min_diversity);
    if (c.mser.delta < 1 || c.mser.delta > 127) r.fail("delta", "must be in [1, 127]");
    if (c.mser.min_area < 1) r.fail("min_area", "must be >= 1");
    if (c.mser.max_area && *c.mser.max_area < c.mser.min_area) {
      r.fail("max_area", "must be >= min_area");
    }
    if (!(c.mser.max_variation >= 0.0)) r.fail("max_variation", "must be >= 0");
    if (!(c.mser.min_diversity >= 0.0 && c.mser.min_diversity <= 1.0)) {
      r.fail("min_diversity", "must be in [0, 1]");
    }
  }

  if (const json* g = top.find("geometry")) {
    const ObjectReader r(*g, "geometry",
                         {"max_aspect_ratio", "min_aspect_ratio",
                          "max_eccentricity", "min_solidity", "min_extent",
                          "max_extent", "max_euler_holes"});
    auto& t = c.geometry;
    r.read_optional_number("max_aspect_ratio", t.max_aspect_ratio);
    r.read_optional_number("min_aspect_ratio", t.min_aspect_ratio);
    r.read_optional_number("max_eccentricity", t.max_eccentricity);
    r.read_optional_number("min_solidity", t.min_solidity);
    r.read_optional_number("min_extent", t.min_extent);
    r.read_optional_number("max_extent", t.max_extent);
    r.read_optional_integer("max_euler_holes", t.max_euler_holes);
    if (t.min_aspect_ratio && t.max_aspect_ratio &&
        *t.min_aspect_ratio > *t.max_aspect_ratio) {
      r.fail("min_aspect_ratio", "exceeds max_aspect_ratio");
    }
    if (t.min_extent && t.max_extent && *t.min_extent > *t.max_extent) {
      r.fail("min_extent", "exceeds max_extent");
    }
    if (t.max_euler_holes && *t.max_euler_holes < 0) {
      r.fail("max_euler_holes", "must be >= 0");
    }
  }

  if (const json* s = top.find("stroke")) {
    const ObjectReader r(*s, "stroke", {"max_variation", "end_trim"});
    std::optional<double> bound = c.stroke.max_variation;
    r.read_optional_number("max_variation", bound);
    c.stroke.max_variation = bound ? *bound : std::numeric_limits<double>::infinity();
    r.read_integer("end_trim", c.stroke.end_trim);
    if (!(c.stroke.max_variation >= 0.0)) r.fail("max_variation", "must be >= 0");
    if (c.stroke.end_trim < 0) r.fail("end_trim", "must be >= 0");
  }
  return c;
}

PipelineConfig config_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const PipelineConfig& c) {
  const auto& t = c.geometry;
  return {
      {"stretch_enabled", c.stretch_enabled},
      {"stretch_k", c.stretch_k},
      {"detect_dark", c.detect_dark},
      {"detect_light", c.detect_light},
      {"mser",
       {{"delta", c.mser.delta},
        {"min_area", c.mser.min_area},
        {"max_area", c.mser.max_area ? json(*c.mser.max_area) : json(nullptr)},
        {"max_variation", c.mser.max_variation},
        {"min_diversity", c.mser.min_diversity}}},
      {"geometry",
       {{"max_aspect_ratio", optional_or_null(t.max_aspect_ratio)},
        {"min_aspect_ratio", optional_or_null(t.min_aspect_ratio)},
        {"max_eccentricity", optional_or_null(t.max_eccentricity)},
        {"min_solidity", optional_or_null(t.min_solidity)},
        {"min_extent", optional_or_null(t.min_extent)},
        {"max_extent", optional_or_null(t.max_extent)},
        {"max_euler_holes",
         t.max_euler_holes ? json(*t.max_euler_holes) : json(nullptr)}}},
      {"stroke",
       {{"max_variation", std::isinf(c.stroke.max_variation)
                              ? json(nullptr)
                              : json(c.stroke.max_variation)},
        {"end_trim", c.stroke.end_trim}}},
      {"expansion_amount", c.expansion_amount},
      {"merge_overlap_min", c.merge_overlap_min},
  };
}

json box_to_json(const BoundingBox& box) {
  return {{"x", box.x}, {"y", box.y}, {"width", box.width}, {"height", box.height}};
}

json props_to_json(const GeometricProps& p) {
  return {{"aspect_ratio", p.aspect_ratio},
          {"eccentricity", p.eccentricity},
          {"solidity", p.solidity},
          {"extent", p.extent},
          {"euler_number", p.euler_number},
          {"centroid", {{"x", p.centroid_x}, {"y", p.centroid_y}}}};
}

namespace {

json region_summary(const MeasuredRegion& m) {
  json out = {{"bbox", box_to_json(m.props ? m.props->bbox : bounding_box(m.region))},
              {"area", m.region.area()},
              {"polarity", std::string(to_string(m.region.polarity))},
              {"level", m.region.source_level}};
  if (m.props) out["props"] = props_to_json(*m.props);
  if (m.stroke_variation) out["stroke_variation"] = *m.stroke_variation;
  return out;
}

json boxes_to_json(const std::vector<BoundingBox>& boxes) {
  json out = json::array();
  for (const auto& b : boxes) out.push_back(box_to_json(b));
  return out;
}

}  // namespace

json result_to_json(const DetectionResult& result, const PipelineConfig& config) {
  json stages = json::array();
  for (const auto& stage : result.trace.stages) {
    json kept = json::array();
    for (const auto& m : stage.kept) kept.push_back(region_summary(m));
    json rejected = json::array();
    for (const auto& r : stage.rejected) {
      json entry = region_summary(r.entry);
      entry["reason"] = r.reason;
      rejected.push_back(std::move(entry));
    }
    stages.push_back({{"name", stage.name},
                      {"input_count", stage.input_count},
                      {"kept", std::move(kept)},
                      {"rejected", std::move(rejected)}});
  }
  json timing = json::object();
  for (const auto& [stage, ms] : result.timing_ms) timing[stage] = ms;

  return {{"schema", kResultSchemaVersion},
          {"image", {{"width", result.image_width}, {"height", result.image_height}}},
          {"config_echo", config_to_json(config)},
          {"stages", std::move(stages)},
          {"region_boxes", boxes_to_json(result.trace.region_boxes)},
          {"expanded_boxes", boxes_to_json(result.trace.expanded_boxes)},
          {"final_boxes", boxes_to_json(result.final_boxes)},
          {"primary_box",
           result.primary_box ? box_to_json(*result.primary_box) : json(nullptr)},
          {"timing_ms", std::move(timing)}};
}

std::string dump_result(const json& doc) { return doc.dump(2) + "\n"; }

json without_timing(json doc) {
  doc.erase("timing_ms");
  return doc;
}

}  // namespace textdetect
