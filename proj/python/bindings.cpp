#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>
#include <tuple>

#include "textdetect/component_tree.hpp"
#include "textdetect/fixture.hpp"
#include "textdetect/json_io.hpp"
#include "textdetect/pipeline.hpp"
#include "textdetect/raster.hpp"
#include "textdetect/region_props.hpp"
#include "textdetect/stroke_width.hpp"

namespace py = pybind11;
using namespace textdetect;

namespace {

using Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using PointArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const Array& arr) {
  if (arr.ndim() != 2) throw py::value_error("expected a 2-D uint8 array");
  const int h = static_cast<int>(arr.shape(0));
  const int w = static_cast<int>(arr.shape(1));
  std::vector<std::uint8_t> data(arr.data(), arr.data() + arr.size());
  return GrayImage(w, h, std::move(data));
}

Array to_array(const GrayImage& img) {
  Array out({img.height(), img.width()});
  std::memcpy(out.mutable_data(), img.pixels().data(), img.size());
  return out;
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

// (N, 2) array of x, y
Region to_region(const PointArray& pts) {
  if (pts.ndim() != 2 || pts.shape(1) != 2) {
    throw py::value_error("expected an (N, 2) array of x, y pixel coordinates");
  }
  Region r;
  auto view = pts.unchecked<2>();
  for (py::ssize_t i = 0; i < view.shape(0); ++i) r.pixels.push_back({view(i, 0), view(i, 1)});
  std::sort(r.pixels.begin(), r.pixels.end(),
            [](Point p, Point q) { return std::tie(p.y, p.x) < std::tie(q.y, q.x); });
  r.pixels.erase(std::unique(r.pixels.begin(), r.pixels.end()), r.pixels.end());
  if (r.pixels.empty()) throw py::value_error("region has no pixels");
  return r;
}

PointArray points_array(const Region& r) {
  PointArray out({static_cast<py::ssize_t>(r.pixels.size()), py::ssize_t{2}});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < r.pixels.size(); ++i) {
    view(i, 0) = r.pixels[i].x;
    view(i, 1) = r.pixels[i].y;
  }
  return out;
}

PipelineConfig parse_config(const std::string& config_json) {
  return config_from_json_text(config_json.empty() ? "{}" : config_json);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Connected-component text region detector";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DecodeError>(m, "DecodeError", PyExc_ValueError);
  py::register_exception<FixtureError>(m, "FixtureError", PyExc_ValueError);

  m.def("decode", [](py::bytes data) {
    const std::string s = data;
    return to_array(decode_image({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}));
  }, py::arg("data"), "Decode PGM or PNG bytes to a 2-D uint8 array.");

  m.def("encode_pgm", [](const Array& a) { return to_bytes(encode_pgm(to_image(a))); });
  m.def("encode_png", [](const Array& a) { return to_bytes(encode_png(to_image(a))); });

  m.def("stretch", [](const Array& a, double k) { return to_array(contrast_stretch(to_image(a), k)); },
        py::arg("image"), py::arg("k") = 2.0);
  m.def("invert", [](const Array& a) { return to_array(invert(to_image(a))); });

  m.def("detect_regions", [](const Array& a, const std::string& config_json) {
    const PipelineConfig c = parse_config(config_json);
    const GrayImage img = to_image(a);
    py::list out;
    for (const Region& r : detect_regions(img, c.mser, c.detect_dark, c.detect_light)) {
      out.append(py::make_tuple(points_array(r), std::string(to_string(r.polarity)),
                                r.source_level));
    }
    return out;
  }, py::arg("image"), py::arg("config_json") = "{}",
     "MSERs as (pixels, polarity, source_level) tuples; pixels is (N, 2) x, y.");

  m.def("region_props", [](const PointArray& pts) {
    const GeometricProps props = compute_props(to_region(pts));
    nlohmann::json j = props_to_json(props);
    j["area"] = props.area;
    j["bbox"] = box_to_json(props.bbox);
    return j.dump();
  }, py::arg("pixels"));

  m.def("stroke_stats", [](const PointArray& pts, int end_trim) {
    const auto s = stroke_stats(to_region(pts), end_trim);
    return py::make_tuple(s.widths, s.mean, s.stddev, s.variation);
  }, py::arg("pixels"), py::arg("end_trim") = 2);

  m.def("render_text_fixture", [](const std::string& text, int height, int x, int y,
                                  int canvas_width, int canvas_height) {
    const auto fx = render_text_fixture(text, height, {x, y}, canvas_width, canvas_height);
    return py::make_tuple(to_array(fx.image), box_to_json(fx.truth).dump());
  }, py::arg("text"), py::arg("height") = 14, py::arg("x") = 10, py::arg("y") = 10,
     py::arg("canvas_width") = 640, py::arg("canvas_height") = 480);

  m.def("default_config", [] { return config_to_json(PipelineConfig{}).dump(); });

  m.def("detect", [](const Array& a, const std::string& config_json) {
    const PipelineConfig c = parse_config(config_json);
    const GrayImage img = to_image(a);
    DetectionResult result;
    {
      py::gil_scoped_release release;
      result = detect(img, c);
    }
    return dump_result(result_to_json(result, c));
  }, py::arg("image"), py::arg("config_json") = "{}",
     "Full pipeline; returns the result document as JSON text.");
}
