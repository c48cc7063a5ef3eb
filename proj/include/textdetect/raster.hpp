#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace textdetect {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedFormatError : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct Point {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Axis-aligned pixel rectangle; (x, y) is the top-left pixel.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int width = 1;
  int height = 1;

  int right() const { return x + width; }    // exclusive
  int bottom() const { return y + height; }  // exclusive
  long long area() const { return static_cast<long long>(width) * height; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

std::string to_string(const BoundingBox& box);

/// 8-bit single-channel raster, row-major.
class GrayImage {
 public:
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return data_[index(x, y)]; }

  std::span<const std::uint8_t> pixels() const { return data_; }
  std::span<std::uint8_t> pixels() { return data_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

/// Row-major boolean membership grid.
class BinaryMask {
 public:
  BinaryMask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool value) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  std::size_t count() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

/// Decodes a binary PGM (P5, maxval 255) or an 8-bit PNG. Colour input is
/// reduced with BT.601 luma, rounded half-up.
GrayImage decode_image(std::span<const std::uint8_t> bytes);

/// Luma of one RGB pixel: round-half-up(0.299 R + 0.587 G + 0.114 B).
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
std::vector<std::uint8_t> encode_png(const GrayImage& img);

/// RGB PNG of `img` with a 1-pixel outline of every box in highlight_color.
std::vector<std::uint8_t> encode_annotated(const GrayImage& img,
                                           std::span<const BoundingBox> boxes);

inline constexpr std::uint8_t highlight_color[3] = {255, 0, 0};

/// Linear stretch of [mean - k*sd, mean + k*sd] onto [0, 255] with clamping.
/// Population standard deviation; a constant image is returned unchanged.
GrayImage contrast_stretch(const GrayImage& img, double k);

GrayImage invert(const GrayImage& img);

/// Copy of the pixels inside `box`, clipped to the image.
GrayImage crop(const GrayImage& img, const BoundingBox& box);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace textdetect
