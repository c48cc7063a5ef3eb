#include "textdetect/raster.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace textdetect {

std::string to_string(const BoundingBox& box) {
  std::ostringstream os;
  os << "(" << box.x << "," << box.y << "," << box.width << "," << box.height
     << ")";
  return os.str();
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be at least 1x1");
  }
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be at least 1x1");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("pixel buffer does not match dimensions");
  }
}

BinaryMask::BinaryMask(int width, int height)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw std::invalid_argument("negative mask dimensions");
  }
  bits_.assign(static_cast<std::size_t>(width) * height, 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  // Integer form of floor(0.299 R + 0.587 G + 0.114 B + 0.5); exact.
  return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G',
                                                       '\r', '\n', 0x1a, '\n'};

class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  GrayImage read() {
    pos_ = 2;  // past "P5"
    const long width = next_int("width");
    const long height = next_int("height");
    const long maxval = next_int("maxval");
    if (width < 1 || height < 1) {
      fail("non-positive dimensions");
    }
    if (maxval != 255) {
      throw UnsupportedFormatError("PGM maxval " + std::to_string(maxval) +
                                   " unsupported (only 255)");
    }
    // Exactly one whitespace byte separates the header from the raster.
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      fail("missing whitespace after maxval");
    }
    ++pos_;
    const auto count = static_cast<std::size_t>(width) * height;
    if (bytes_.size() - pos_ < count) {
      fail("truncated raster: expected " + std::to_string(count) +
           " bytes, found " + std::to_string(bytes_.size() - pos_));
    }
    std::vector<std::uint8_t> data(bytes_.begin() + pos_,
                                   bytes_.begin() + pos_ + count);
    return GrayImage(static_cast<int>(width), static_cast<int>(height),
                     std::move(data));
  }

 private:
  [[noreturn]] void fail(const std::string& cause) const {
    throw DecodeError("PGM decode error at offset " + std::to_string(pos_) +
                      ": " + cause);
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  long next_int(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      fail(std::string("expected ") + what);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 30)) fail(std::string(what) + " too large");
      ++pos_;
    }
    return value;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  // IHDR is mandated as the first chunk: signature(8) length(4) type(4)
  // width(4) height(4) depth(1) colour type(1).
  if (bytes.size() < 33 || std::memcmp(bytes.data() + 12, "IHDR", 4) != 0) {
    throw DecodeError("PNG decode error at offset 8: missing IHDR chunk");
  }
  const int depth = bytes[24];
  const int color_type = bytes[25];
  const bool palette = color_type == 3;
  if (!palette && depth != 8) {
    throw UnsupportedFormatError("PNG bit depth " + std::to_string(depth) +
                                 " unsupported (only 8-bit)");
  }

  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw DecodeError(std::string("PNG decode error: ") + image.message);
  }

  const bool gray_source = color_type == 0 || color_type == 4;
  const bool alpha_source = color_type == 4 || color_type == 6;
  int channels = 0;
  if (gray_source) {
    image.format = alpha_source ? PNG_FORMAT_GA : PNG_FORMAT_GRAY;
    channels = alpha_source ? 2 : 1;
  } else {
    image.format = alpha_source ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
    channels = alpha_source ? 4 : 3;
  }
  if (palette) {
    image.format = PNG_FORMAT_RGB;
    channels = 3;
  }

  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
    std::string message = image.message;
    png_image_free(&image);
    throw DecodeError("PNG decode error: " + message);
  }

  std::vector<std::uint8_t> gray(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const std::uint8_t* px = raw.data() + i * channels;
    gray[i] = channels <= 2 ? px[0] : luma(px[0], px[1], px[2]);
  }
  return GrayImage(width, height, std::move(gray));
}

std::vector<std::uint8_t> write_png(int width, int height, std::uint32_t format,
                                    const std::uint8_t* pixels) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0,
                                 nullptr)) {
    throw std::runtime_error(std::string("PNG encode failed: ") +
                             image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0,
                                 nullptr)) {
    throw std::runtime_error(std::string("PNG encode failed: ") +
                             image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    return PgmReader(bytes).read();
  }
  if (bytes.size() >= kPngSignature.size() &&
      std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
    return decode_png(bytes);
  }
  throw DecodeError(
      "decode error at offset 0: unrecognised signature (expected P5 PGM or "
      "PNG)");
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  return write_png(img.width(), img.height(), PNG_FORMAT_GRAY,
                   img.pixels().data());
}

std::vector<std::uint8_t> encode_annotated(const GrayImage& img,
                                           std::span<const BoundingBox> boxes) {
  for (const auto& box : boxes) {
    if (box.width < 1 || box.height < 1 || box.x < 0 || box.y < 0 ||
        box.right() > img.width() || box.bottom() > img.height()) {
      throw BoundsError("box " + to_string(box) + " outside " +
                        std::to_string(img.width()) + "x" +
                        std::to_string(img.height()) + " image");
    }
  }

  std::vector<std::uint8_t> rgb(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = img.pixels()[i];
  }
  auto paint = [&](int x, int y) {
    const std::size_t i = (static_cast<std::size_t>(y) * img.width() + x) * 3;
    std::copy(std::begin(highlight_color), std::end(highlight_color),
              rgb.begin() + static_cast<std::ptrdiff_t>(i));
  };
  for (const auto& box : boxes) {
    for (int x = box.x; x < box.right(); ++x) {
      paint(x, box.y);
      paint(x, box.bottom() - 1);
    }
    for (int y = box.y; y < box.bottom(); ++y) {
      paint(box.x, y);
      paint(box.right() - 1, y);
    }
  }
  return write_png(img.width(), img.height(), PNG_FORMAT_RGB, rgb.data());
}

GrayImage contrast_stretch(const GrayImage& img, double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("stretch multiplier must be positive");
  }
  const auto px = img.pixels();
  const double n = static_cast<double>(px.size());
  double sum = 0.0;
  for (auto p : px) sum += p;
  const double mean = sum / n;
  double sq = 0.0;
  for (auto p : px) sq += (p - mean) * (p - mean);
  const double sd = std::sqrt(sq / n);
  if (sd == 0.0) {
    return img;
  }

  const double lo = mean - k * sd;
  const double scale = 255.0 / (2.0 * k * sd);
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    const double mapped = std::clamp((v - lo) * scale, 0.0, 255.0);
    lut[v] = static_cast<std::uint8_t>(std::floor(mapped + 0.5));
  }
  GrayImage out = img;
  for (auto& p : out.pixels()) p = lut[p];
  return out;
}

GrayImage invert(const GrayImage& img) {
  GrayImage out = img;
  for (auto& p : out.pixels()) p = static_cast<std::uint8_t>(255 - p);
  return out;
}

GrayImage crop(const GrayImage& img, const BoundingBox& box) {
  const int x0 = std::max(box.x, 0);
  const int y0 = std::max(box.y, 0);
  const int x1 = std::min(box.right(), img.width());
  const int y1 = std::min(box.bottom(), img.height());
  if (x1 <= x0 || y1 <= y0) {
    throw BoundsError("crop " + to_string(box) + " misses the image");
  }
  GrayImage out(x1 - x0, y1 - y0);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) out.at(x - x0, y - y0) = img.at(x, y);
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace textdetect
