#include "commands.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <filesystem>
#include <iostream>

#include "textdetect/fixture.hpp"
#include "textdetect/json_io.hpp"
#include "textdetect/pipeline.hpp"
#include "textdetect/raster.hpp"
#include "textdetect/service.hpp"

namespace textdetect::cli {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string as_text(const std::vector<std::uint8_t>& bytes) {
  return std::string(bytes.begin(), bytes.end());
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

int cmd_detect(const DetectOptions& opts, std::ostream& out, std::ostream& err) {
  PipelineConfig config;
  if (opts.config) {
    try {
      config = config_from_json_text(as_text(read_file(*opts.config)));
    } catch (const ConfigError& e) {
      err << "invalid config: " << e.what() << "\n";
      return kBadConfig;
    } catch (const std::exception& e) {
      err << "cannot read config: " << e.what() << "\n";
      return kBadConfig;
    }
  }

  std::optional<GrayImage> img;
  try {
    img = decode_image(read_file(opts.image));
  } catch (const std::exception& e) {
    err << "cannot load " << opts.image << ": " << e.what() << "\n";
    return kBadInput;
  }

  const DetectionResult result = detect(*img, config);
  const std::string body = dump_result(result_to_json(result, config));
  try {
    if (opts.out) {
      write_file(*opts.out, as_bytes(body));
    } else {
      out << body;
    }
    if (opts.annotate) {
      write_file(*opts.annotate, encode_annotated(*img, result.final_boxes));
    }
    if (opts.crops) {
      std::filesystem::create_directories(*opts.crops);
      for (std::size_t i = 0; i < result.final_boxes.size(); ++i) {
        const auto file = std::filesystem::path(*opts.crops) / ("box_" + std::to_string(i) + ".pgm");
        write_file(file.string(), encode_pgm(crop(*img, result.final_boxes[i])));
      }
    }
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kBadInput;
  }
  return kOk;
}

int cmd_fixture(const FixtureOptions& opts, std::ostream& err) {
  std::optional<TextFixture> fixture;
  try {
    fixture = render_text_fixture(opts.text, opts.height, {opts.x, opts.y},
                                  opts.canvas_width, opts.canvas_height);
  } catch (const FixtureError& e) {
    err << "cannot render fixture: " << e.what() << "\n";
    return kBadConfig;
  }
  const GrayImage img = opts.invert ? invert(fixture->image) : fixture->image;
  try {
    write_file(opts.out, ends_with(opts.out, ".png") ? encode_png(img)
                                                     : encode_pgm(img));
    if (opts.truth) {
      const nlohmann::json truth = {{"box", box_to_json(fixture->truth)}};
      write_file(*opts.truth, as_bytes(truth.dump(2) + "\n"));
    }
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kBadInput;
  }
  return kOk;
}

int cmd_serve(const ServeOptions& opts, std::ostream& log) {
  TuneService service(&log);
  if (opts.images) {
    try {
      service.load_directory(*opts.images);
    } catch (const std::exception& e) {
      log << e.what() << "\n";
      return kBadInput;
    }
  }
  httplib::Server server;
  // httplib's default SO_REUSEPORT would let a second server share a busy port
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  service.register_routes(server);
  if (!server.bind_to_port(opts.host, opts.port)) {
    log << "cannot bind " << opts.host << ":" << opts.port << "\n";
    return kBadInput;
  }
  log << "serving " << service.list().size() << " images on http://"
      << opts.host << ":" << opts.port << "\n"
      << std::flush;
  server.listen_after_bind();
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Connected-component text region detector"};
  app.require_subcommand(1);

  DetectOptions detect_opts;
  auto* detect_cmd = app.add_subcommand("detect", "Detect text regions in an image");
  detect_cmd->add_option("image", detect_opts.image, "PGM or PNG image")->required();
  detect_cmd->add_option("--config", detect_opts.config, "JSON pipeline config");
  detect_cmd->add_option("--out", detect_opts.out, "Result JSON path (default stdout)");
  detect_cmd->add_option("--annotate", detect_opts.annotate,
                         "Write a PNG with the final boxes drawn");
  detect_cmd->add_option("--crops", detect_opts.crops,
                         "Directory for PGM crops of the final boxes (box_<i>.pgm)");

  FixtureOptions fixture_opts;
  auto* fixture_cmd = app.add_subcommand("fixture", "Render a synthetic text image");
  fixture_cmd->add_option("--text", fixture_opts.text, "Text to render")->required();
  fixture_cmd->add_option("--height", fixture_opts.height, "Glyph height in pixels");
  fixture_cmd->add_option("--out", fixture_opts.out, "Image path (.pgm or .png)")
      ->required();
  fixture_cmd->add_option("--truth", fixture_opts.truth, "Ground-truth JSON path");
  fixture_cmd->add_option("--x", fixture_opts.x, "Left edge of the text");
  fixture_cmd->add_option("--y", fixture_opts.y, "Top edge of the text");
  fixture_cmd->add_option("--canvas-width", fixture_opts.canvas_width);
  fixture_cmd->add_option("--canvas-height", fixture_opts.canvas_height);
  fixture_cmd->add_flag("--invert", fixture_opts.invert,
                        "White text on black instead of black on white");

  ServeOptions serve_opts;
  auto* serve_cmd = app.add_subcommand("serve", "Run the tuning HTTP service");
  serve_cmd->add_option("--port", serve_opts.port, "TCP port");
  serve_cmd->add_option("--host", serve_opts.host, "Bind address");
  serve_cmd->add_option("--images", serve_opts.images, "Directory of images to serve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (detect_cmd->parsed()) return cmd_detect(detect_opts, std::cout, std::cerr);
  if (fixture_cmd->parsed()) return cmd_fixture(fixture_opts, std::cerr);
  return cmd_serve(serve_opts, std::cerr);
}

}  // namespace textdetect::cli
