#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace textdetect::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kBadInput = 2,   // unreadable/undecodable input, port busy
  kBadConfig = 3,  // invalid config, unsupported fixture text
};

struct DetectOptions {
  std::string image;
  std::optional<std::string> config;
  std::optional<std::string> out;       // stdout when unset
  std::optional<std::string> annotate;
  std::optional<std::string> crops;     // directory for box_<i>.pgm
};

struct FixtureOptions {
  std::string text;
  int height = 14;
  std::string out;
  std::optional<std::string> truth;
  int x = 10;
  int y = 10;
  int canvas_width = 640;
  int canvas_height = 480;
  bool invert = false;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> images;
};

int cmd_detect(const DetectOptions& opts, std::ostream& out, std::ostream& err);
int cmd_fixture(const FixtureOptions& opts, std::ostream& err);
int cmd_serve(const ServeOptions& opts, std::ostream& log);

/// Parses argv and dispatches; the body of main().
int run(int argc, char** argv);

}  // namespace textdetect::cli
