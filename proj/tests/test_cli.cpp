#include <doctest.h>

#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/commands.hpp"
#include "textdetect/json_io.hpp"
#include "textdetect/pipeline.hpp"
#include "textdetect/raster.hpp"

using namespace textdetect;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "textdetect_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

std::string slurp(const std::string& p) {
  const auto bytes = read_file(p);
  return {bytes.begin(), bytes.end()};
}

void spit(const std::string& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(TEXTDETECT_CLI_PATH) + " " + args + " >" +
                          path("stdout.txt") + " 2>" + path("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string make_fixture(const std::string& name) {
  cli::FixtureOptions f;
  f.text = "STOP";
  f.out = path(name + ".pgm");
  f.truth = path(name + ".json");
  std::ostringstream err;
  REQUIRE(cli::cmd_fixture(f, err) == cli::kOk);
  return f.out;
}

}  // namespace

TEST_CASE("fixture command writes image and truth") {
  make_fixture("stop");
  const GrayImage img = decode_image(read_file(path("stop.pgm")));
  CHECK(img.width() == 640);
  CHECK(img.height() == 480);
  CHECK(json::parse(slurp(path("stop.json"))) ==
        json{{"box", {{"x", 10}, {"y", 10}, {"width", 46}, {"height", 14}}}});

  cli::FixtureOptions f;
  f.text = "";
  f.out = path("empty.pgm");
  std::ostringstream err;
  CHECK(cli::cmd_fixture(f, err) == cli::kBadConfig);
  f.text = "hello?";
  CHECK(cli::cmd_fixture(f, err) == cli::kBadConfig);

  f.text = "OK";
  f.out = path("ok.png");
  f.invert = true;
  CHECK(cli::cmd_fixture(f, err) == cli::kOk);
  const GrayImage png = decode_image(read_file(f.out));
  CHECK(png.at(0, 0) == 0);
}

TEST_CASE("detect command round trip") {
  const auto image = make_fixture("word");
  cli::DetectOptions d;
  d.image = image;
  d.out = path("word_result.json");
  d.annotate = path("word_annotated.png");
  std::ostringstream out, err;
  REQUIRE(cli::cmd_detect(d, out, err) == cli::kOk);
  const json doc = json::parse(slurp(*d.out));
  CHECK(doc["schema"] == 1);
  REQUIRE_FALSE(doc["final_boxes"].empty());
  const json truth = json::parse(slurp(path("word.json")))["box"];
  const BoundingBox t{truth["x"], truth["y"], truth["width"], truth["height"]};
  const auto& p = doc["primary_box"];
  CHECK(iou({p["x"], p["y"], p["width"], p["height"]}, t) >= 0.6);
  CHECK(decode_image(read_file(*d.annotate)).width() == 640);

  d.crops = path("crops");
  REQUIRE(cli::cmd_detect(d, out, err) == cli::kOk);
  for (std::size_t i = 0; i < doc["final_boxes"].size(); ++i) {
    const auto& b = doc["final_boxes"][i];
    const GrayImage c =
        decode_image(read_file(path("crops/box_" + std::to_string(i) + ".pgm")));
    CHECK(c.width() == b["width"]);
    CHECK(c.height() == b["height"]);
  }
  CHECK_FALSE(fs::exists(path("crops/box_" + std::to_string(doc["final_boxes"].size()) + ".pgm")));
  d.crops.reset();

  // byte-stable apart from timing
  d.out = path("word_result2.json");
  REQUIRE(cli::cmd_detect(d, out, err) == cli::kOk);
  CHECK(dump_result(without_timing(json::parse(slurp(path("word_result.json"))))) ==
        dump_result(without_timing(json::parse(slurp(path("word_result2.json"))))));

  // an empty config file behaves like no config
  spit(path("empty.json"), "{}");
  d.config = path("empty.json");
  d.out = path("word_result3.json");
  REQUIRE(cli::cmd_detect(d, out, err) == cli::kOk);
  CHECK(without_timing(json::parse(slurp(path("word_result3.json")))) ==
        without_timing(doc));
}

TEST_CASE("detect command on a constant image prints an empty result") {
  write_file(path("constant.pgm"), encode_pgm(GrayImage(50, 40, 128)));
  cli::DetectOptions d;
  d.image = path("constant.pgm");
  std::ostringstream out, err;
  CHECK(cli::cmd_detect(d, out, err) == cli::kOk);
  const json doc = json::parse(out.str());
  CHECK(doc["final_boxes"] == json::array());
  CHECK(doc["primary_box"].is_null());
}

TEST_CASE("detect command failures") {
  make_fixture("fail");
  cli::DetectOptions d;
  std::ostringstream out, err;

  spit(path("bad.json"), R"({"geometry": {"max_aspct": 2}})");
  d.image = path("fail.pgm");
  d.config = path("bad.json");
  CHECK(cli::cmd_detect(d, out, err) == cli::kBadConfig);
  CHECK(err.str().find("max_aspct") != std::string::npos);

  d.config.reset();
  d.image = path("does_not_exist.pgm");
  CHECK(cli::cmd_detect(d, out, err) == cli::kBadInput);

  spit(path("junk.pgm"), "P5 9 9 255\nshort");
  d.image = path("junk.pgm");
  CHECK(cli::cmd_detect(d, out, err) == cli::kBadInput);
}

TEST_CASE("binary exit codes") {
  CHECK(run_binary("") == cli::kUsage);
  CHECK(run_binary("frobnicate") == cli::kUsage);
  CHECK(run_binary("--help") == cli::kOk);
  CHECK(run_binary("fixture --text STOP --height 14 --out " + path("bin.pgm") +
                   " --truth " + path("bin.json")) == cli::kOk);
  CHECK(run_binary("detect " + path("bin.pgm")) == cli::kOk);
  CHECK(json::parse(slurp(path("stdout.txt")))["schema"] == 1);
  CHECK(run_binary("fixture --text '' --out " + path("x.pgm")) == cli::kBadConfig);
  CHECK(run_binary("detect " + path("missing.pgm")) == cli::kBadInput);
  spit(path("typo.json"), R"({"geometry": {"max_aspct": 2}})");
  CHECK(run_binary("detect " + path("bin.pgm") + " --config " + path("typo.json")) ==
        cli::kBadConfig);
  CHECK(slurp(path("stderr.txt")).find("max_aspct") != std::string::npos);
}

TEST_CASE("serve refuses a busy port") {
  httplib::Server blocker;
  const int port = blocker.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  cli::ServeOptions s;
  s.port = port;
  std::ostringstream log;
  CHECK(cli::cmd_serve(s, log) == cli::kBadInput);
  CHECK(log.str().find(std::to_string(port)) != std::string::npos);

  s.port = 0;
  s.images = path("no_such_dir");
  CHECK(cli::cmd_serve(s, log) == cli::kBadInput);
}
