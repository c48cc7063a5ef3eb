#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "textdetect/raster.hpp"

namespace textdetect {

class FixtureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Built-in 5x7 bitmap font: A-Z, 0-9, space, '-' and '.'. Glyphs are
/// rectilinear and 4-connected: ink outside rows 0, 3 and 6 only occupies
/// columns 0, 2 and 4.
inline constexpr int kGlyphColumns = 5;
inline constexpr int kGlyphRows = 7;

bool font_has(char c);

/// Seven strings of five '#'/'.' cells. Throws FixtureError for characters
/// outside the font.
const std::vector<std::string_view>& glyph_pattern(char c);

struct TextFixture {
  GrayImage image;
  BoundingBox truth;  // tight box of all ink
};

/// Black-on-white rendering. Glyph cells are round(5h/7) x h pixels with
/// max(1, round(h/7)) pixels between cells. Font rows 0, 3, 6 and columns
/// 0, 2, 4 are drawn with the odd thickness nearest h/7 (ties go down) and
/// the others share what is left, so every stroke has the same width.
/// Throws FixtureError for empty text, unsupported characters, text without
/// ink, or text leaving the canvas.
TextFixture render_text_fixture(std::string_view text, int glyph_height,
                                Point position, int canvas_width,
                                int canvas_height);

/// Pixel size of rendered text; ignores ink extents.
struct TextExtent {
  int width = 0;
  int height = 0;
};
TextExtent measure_text(std::string_view text, int glyph_height);

/// Black-on-white glyph with per-column widths and per-row heights, so
/// vertical and horizontal strokes can be given different thicknesses.
/// Returns the image with the glyph ink placed at `position`.
TextFixture render_glyph_weighted(char c, const std::vector<int>& column_widths,
                                  const std::vector<int>& row_heights,
                                  Point position, int canvas_width,
                                  int canvas_height);

}  // namespace textdetect
