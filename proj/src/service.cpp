#include "textdetect/service.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <httplib.h>

#include "textdetect/json_io.hpp"
#include "textdetect/pipeline.hpp"

namespace textdetect {

using nlohmann::json;

json entry_to_json(const ImageEntry& e) {
  return {{"id", e.id}, {"name", e.name}, {"width", e.width}, {"height", e.height}};
}

std::string content_id(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

void TuneService::log_line(const std::string& line) {
  if (!log_) return;
  std::lock_guard lock(log_mutex_);
  *log_ << line << '\n' << std::flush;
}

void TuneService::load_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot read image directory " + dir + ": " +
                             ec.message());
  }
  std::vector<fs::path> files;
  for (const auto& item : it) {
    if (!item.is_regular_file()) continue;
    std::string ext = item.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm" || ext == ".png") files.push_back(item.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    try {
      add_image(read_file(path.string()), path.filename().string());
    } catch (const std::exception& e) {
      log_line("skipping " + path.string() + ": " + e.what());
    }
  }
}

ImageEntry TuneService::add_image(std::span<const std::uint8_t> bytes,
                                  const std::string& name) {
  GrayImage img = decode_image(bytes);
  const std::string id = content_id(bytes);
  std::unique_lock lock(store_mutex_);
  if (const auto it = images_.find(id); it != images_.end()) {
    return it->second.entry;
  }
  ImageEntry entry{id, name.empty() ? "upload-" + id.substr(0, 12) : name,
                   img.width(), img.height()};
  images_.emplace(id, Stored{entry, std::move(img)});
  return entry;
}

std::vector<ImageEntry> TuneService::list() const {
  std::vector<ImageEntry> out;
  {
    std::shared_lock lock(store_mutex_);
    for (const auto& [id, stored] : images_) out.push_back(stored.entry);
  }
  std::sort(out.begin(), out.end(), [](const ImageEntry& a, const ImageEntry& b) {
    return std::tie(a.name, a.id) < std::tie(b.name, b.id);
  });
  return out;
}

std::optional<GrayImage> TuneService::image(const std::string& id) const {
  std::shared_lock lock(store_mutex_);
  const auto it = images_.find(id);
  if (it == images_.end()) return std::nullopt;
  return it->second.image;
}

std::string TuneService::detect(const std::string& image_id,
                                const json& config_doc) {
  const PipelineConfig config = config_from_json(config_doc);
  const std::string key = image_id + "\n" + config_to_json(config).dump();
  {
    std::shared_lock lock(cache_mutex_);
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const auto img = image(image_id);
  if (!img) {
    throw UnknownImageError("unknown image id " + image_id);
  }
  // Concurrent misses on the same key compute identical bodies; the first
  // insert wins.
  std::string body = dump_result(result_to_json(textdetect::detect(*img, config), config));
  std::unique_lock lock(cache_mutex_);
  return cache_.try_emplace(key, std::move(body)).first->second;
}

std::size_t TuneService::cache_size() const {
  std::shared_lock lock(cache_mutex_);
  return cache_.size();
}

namespace {

void send_error(httplib::Response& res, int status, const std::string& message,
                const std::string& key = "") {
  json body = {{"error", message}};
  if (!key.empty()) body["key"] = key;
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

void TuneService::register_routes(httplib::Server& server) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
    log_line(req.method + " " + req.path + " " + std::to_string(res.status));
  });

  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  server.Get("/images", [this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& e : list()) out.push_back(entry_to_json(e));
    res.set_content(out.dump(), "application/json");
  });

  server.Post("/images", [this](const httplib::Request& req, httplib::Response& res) {
    const std::span<const std::uint8_t> bytes(
        reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size());
    try {
      const ImageEntry entry = add_image(bytes, req.get_param_value("name"));
      res.status = 201;
      res.set_content(entry_to_json(entry).dump(), "application/json");
    } catch (const DecodeError& e) {
      send_error(res, 415, e.what());
    }
  });

  server.Get(R"(/images/([0-9a-f]+)/raw)",
             [this](const httplib::Request& req, httplib::Response& res) {
               const auto img = image(req.matches[1]);
               if (!img) {
                 send_error(res, 404, "unknown image id");
                 return;
               }
               const auto png = encode_png(*img);
               res.set_content(std::string(png.begin(), png.end()), "image/png");
             });

  server.Post("/detect", [this](const httplib::Request& req, httplib::Response& res) {
    json doc;
    try {
      doc = json::parse(req.body);
    } catch (const json::parse_error& e) {
      send_error(res, 400, std::string("request body is not JSON: ") + e.what());
      return;
    }
    if (!doc.is_object() || !doc.contains("image_id") || !doc["image_id"].is_string()) {
      send_error(res, 400, "request needs a string \"image_id\"");
      return;
    }
    for (const auto& [key, value] : doc.items()) {
      if (key != "image_id" && key != "config") {
        send_error(res, 400, "unknown request field \"" + key + "\"", key);
        return;
      }
    }
    const json config = doc.value("config", json::object());
    try {
      res.set_content(detect(doc["image_id"].get<std::string>(), config),
                      "application/json");
    } catch (const ConfigError& e) {
      send_error(res, 422, e.what(), e.key());
    } catch (const UnknownImageError& e) {
      send_error(res, 404, e.what());
    }
  });
}

}  // namespace textdetect
