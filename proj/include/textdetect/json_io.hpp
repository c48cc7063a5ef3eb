#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "textdetect/pipeline.hpp"

namespace textdetect {

inline constexpr int kResultSchemaVersion = 1;

/// Invalid configuration; `key()` is the dotted path of the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Strict parse: every key optional, unknown keys rejected. `null` disables
/// a geometry threshold or the stroke bound, and selects the automatic
/// mser.max_area.
PipelineConfig config_from_json(const nlohmann::json& doc);
PipelineConfig config_from_json_text(const std::string& text);

/// Full config including defaults; config_from_json(config_to_json(c)) == c.
nlohmann::json config_to_json(const PipelineConfig& config);

nlohmann::json box_to_json(const BoundingBox& box);
nlohmann::json props_to_json(const GeometricProps& props);

/// Result document (schema 1). Timing lives under "timing_ms" only.
nlohmann::json result_to_json(const DetectionResult& result,
                              const PipelineConfig& config);

/// Serialisation used by the CLI and the service, byte-for-byte.
std::string dump_result(const nlohmann::json& doc);

/// Copy of a result document without its timing block.
nlohmann::json without_timing(nlohmann::json doc);

}  // namespace textdetect
