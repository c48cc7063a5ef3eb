#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "textdetect/raster.hpp"

namespace httplib {
class Server;
}

namespace textdetect {

struct ImageEntry {
  std::string id;  // hex SHA-256 of the encoded bytes
  std::string name;
  int width = 0;
  int height = 0;
};

nlohmann::json entry_to_json(const ImageEntry& entry);

std::string content_id(std::span<const std::uint8_t> bytes);

class UnknownImageError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Image store and detection cache behind the tuning HTTP API. All members
/// are safe to call concurrently.
class TuneService {
 public:
  explicit TuneService(std::ostream* log = nullptr) : log_(log) {}

  /// Registers every .pgm/.png file of `dir`; files that fail to decode are
  /// logged and skipped. Throws std::runtime_error if the directory cannot
  /// be read.
  void load_directory(const std::string& dir);

  /// Stores decodable bytes; identical bytes map to the existing entry.
  /// Throws DecodeError.
  ImageEntry add_image(std::span<const std::uint8_t> bytes,
                       const std::string& name);

  /// Sorted by name, then id.
  std::vector<ImageEntry> list() const;

  std::optional<GrayImage> image(const std::string& id) const;

  /// Result document for (image, config) as served by POST /detect.
  /// Throws UnknownImageError or ConfigError.
  std::string detect(const std::string& image_id, const nlohmann::json& config);

  std::size_t cache_size() const;

  /// Installs /healthz, /images, /images/{id}/raw and /detect, plus CORS
  /// headers and a one-line-per-request logger.
  void register_routes(httplib::Server& server);

 private:
  struct Stored {
    ImageEntry entry;
    GrayImage image;
  };

  void log_line(const std::string& line);

  std::ostream* log_;
  std::mutex log_mutex_;
  mutable std::shared_mutex store_mutex_;
  std::map<std::string, Stored> images_;
  mutable std::shared_mutex cache_mutex_;
  std::map<std::string, std::string> cache_;
};

}  // namespace textdetect
