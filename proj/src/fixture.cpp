#include "textdetect/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace textdetect {

namespace {

using Pattern = std::vector<std::string_view>;

const std::map<char, Pattern>& font() {
  static const std::map<char, Pattern> glyphs = {
      {'A', {"#####", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
      {'B', {"####.", "#...#", "#...#", "#####", "#...#", "#...#", "#####"}},
      {'C', {"#####", "#....", "#....", "#....", "#....", "#....", "#####"}},
      {'D', {"#####", "#...#", "#...#", "#...#", "#...#", "#...#", "####."}},
      {'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
      {'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
      {'G', {"#####", "#....", "#....", "#.###", "#...#", "#...#", "#####"}},
      {'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
      {'I', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"}},
      {'J', {"..###", "....#", "....#", "....#", "#...#", "#...#", "#####"}},
      {'K', {"#.###", "#.#..", "#.#..", "###..", "#.#..", "#.#..", "#.###"}},
      {'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
      {'M', {"#####", "#.#.#", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"}},
      {'N', {"###.#", "#.#.#", "#.#.#", "#.#.#", "#.#.#", "#.#.#", "#.###"}},
      {'O', {"#####", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"}},
      {'P', {"#####", "#...#", "#...#", "#####", "#....", "#....", "#...."}},
      {'Q', {"#####", "#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#####"}},
      {'R', {"#####", "#...#", "#...#", "#####", "#.#..", "#.#..", "#.###"}},
      {'S', {"#####", "#....", "#....", "#####", "....#", "....#", "#####"}},
      {'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
      {'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"}},
      {'V', {"#...#", "#...#", "#...#", "#####", "..#..", "..#..", "..#.."}},
      {'W', {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", "#####"}},
      {'X', {"#####", "..#..", "..#..", "#####", "..#..", "..#..", "#####"}},
      {'Y', {"#...#", "#...#", "#...#", "#####", "....#", "....#", "#####"}},
      {'Z', {"#####", "....#", "....#", "..###", "..#..", "..#..", "#####"}},
      {'0', {"#####", "#.#.#", "#.#.#", "#.#.#", "#.#.#", "#.#.#", "#####"}},
      {'1', {"###..", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"}},
      {'2', {"#####", "....#", "....#", "#####", "#....", "#....", "#####"}},
      {'3', {"#####", "....#", "....#", ".####", "....#", "....#", "#####"}},
      {'4', {"#...#", "#...#", "#...#", "#####", "....#", "....#", "....#"}},
      {'5', {"#####", "#....", "#....", "#####", "....#", "....#", "####."}},
      {'6', {"#####", "#....", "#....", "#####", "#...#", "#...#", "#####"}},
      {'7', {"#####", "....#", "....#", "..###", "..#..", "..#..", "..#.."}},
      {'8', {"#####", "#...#", "#...#", "#####", "#...#", "#...#", "#####"}},
      {'9', {"#####", "#...#", "#...#", "#####", "....#", "....#", "#####"}},
      {' ', {".....", ".....", ".....", ".....", ".....", ".....", "....."}},
      {'-', {".....", ".....", ".....", "#####", ".....", ".....", "....."}},
      {'.', {".....", ".....", ".....", ".....", ".....", ".....", "..#.."}},
  };
  return glyphs;
}

int cell_width(int glyph_height) {
  return std::max(1, static_cast<int>(std::lround(kGlyphColumns * glyph_height /
                                                  double(kGlyphRows))));
}

int cell_spacing(int glyph_height) {
  return std::max(1, static_cast<int>(std::lround(glyph_height / double(kGlyphRows))));
}

// Odd number of pixels nearest to h/7, ties going down. Odd strokes have a
// centre pixel, so sampled widths equal the stroke thickness.
int stroke_thickness(int glyph_height) {
  const double target = glyph_height / double(kGlyphRows);
  int best = 1;
  for (int t = 3; t <= glyph_height; t += 2) {
    if (std::abs(t - target) < std::abs(best - target)) best = t;
  }
  return best;
}

// Sizes of `n` consecutive segments covering `total` pixels as evenly as
// nearest-neighbour sampling would.
std::vector<int> even_split(int total, int n) {
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = (total * (i + 1) + n - 1) / n - (total * i + n - 1) / n;
  }
  return out;
}

// Font cell sizes for one glyph axis. Rows 0, 3, 6 and columns 0, 2, 4 carry
// most strokes; they all get the stroke thickness and the rows/columns in
// between absorb the remainder, so every stroke in a glyph is equally thick.
std::vector<int> stroke_layout(int total, int stroke, std::vector<int> stroke_cells,
                               std::vector<int> filler_cells) {
  const int cells = static_cast<int>(stroke_cells.size() + filler_cells.size());
  const int rest = total - stroke * static_cast<int>(stroke_cells.size());
  if (rest < static_cast<int>(filler_cells.size())) return even_split(total, cells);
  std::vector<int> out(cells, 0);
  for (int c : stroke_cells) out[c] = stroke;
  const auto filler = even_split(rest, static_cast<int>(filler_cells.size()));
  for (std::size_t i = 0; i < filler_cells.size(); ++i) out[filler_cells[i]] = filler[i];
  return out;
}

void draw_cells(GrayImage& img, const std::vector<std::string_view>& pattern,
                const std::vector<int>& column_widths,
                const std::vector<int>& row_heights, Point position) {
  int top = position.y;
  for (int row = 0; row < kGlyphRows; ++row) {
    int left = position.x;
    for (int col = 0; col < kGlyphColumns; ++col) {
      if (pattern[row][col] == '#') {
        for (int y = top; y < top + row_heights[row]; ++y) {
          for (int x = left; x < left + column_widths[col]; ++x) img.at(x, y) = 0;
        }
      }
      left += column_widths[col];
    }
    top += row_heights[row];
  }
}

BoundingBox ink_box(const GrayImage& img) {
  int x0 = img.width(), y0 = img.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y) == 0) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
  }
  if (x1 < 0) {
    throw FixtureError("fixture text has no ink");
  }
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

void check_canvas(Point position, int width, int height, int canvas_width,
                  int canvas_height) {
  if (canvas_width < 1 || canvas_height < 1) {
    throw FixtureError("canvas must be at least 1x1");
  }
  if (position.x < 0 || position.y < 0 || position.x + width > canvas_width ||
      position.y + height > canvas_height) {
    throw FixtureError("rendering of " + std::to_string(width) + "x" +
                       std::to_string(height) + " at (" +
                       std::to_string(position.x) + "," +
                       std::to_string(position.y) + ") leaves the " +
                       std::to_string(canvas_width) + "x" +
                       std::to_string(canvas_height) + " canvas");
  }
}

}  // namespace

bool font_has(char c) { return font().contains(c); }

const std::vector<std::string_view>& glyph_pattern(char c) {
  const auto it = font().find(c);
  if (it == font().end()) {
    throw FixtureError(std::string("unsupported character '") + c + "'");
  }
  return it->second;
}

TextExtent measure_text(std::string_view text, int glyph_height) {
  if (glyph_height < 1) {
    throw FixtureError("glyph height must be positive");
  }
  const int n = static_cast<int>(text.size());
  if (n == 0) return {0, glyph_height};
  return {n * cell_width(glyph_height) + (n - 1) * cell_spacing(glyph_height),
          glyph_height};
}

TextFixture render_text_fixture(std::string_view text, int glyph_height,
                                Point position, int canvas_width,
                                int canvas_height) {
  if (text.empty()) {
    throw FixtureError("fixture text is empty");
  }
  for (const char c : text) glyph_pattern(c);
  const TextExtent extent = measure_text(text, glyph_height);
  check_canvas(position, extent.width, extent.height, canvas_width,
               canvas_height);

  GrayImage img(canvas_width, canvas_height, 255);
  const int cw = cell_width(glyph_height);
  const int stroke = stroke_thickness(glyph_height);
  const auto columns = stroke_layout(cw, stroke, {0, 2, 4}, {1, 3});
  const auto rows = stroke_layout(glyph_height, stroke, {0, 3, 6}, {1, 2, 4, 5});
  const int step = cw + cell_spacing(glyph_height);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const int left = position.x + static_cast<int>(i) * step;
    draw_cells(img, glyph_pattern(text[i]), columns, rows, {left, position.y});
  }
  const BoundingBox truth = ink_box(img);
  return {std::move(img), truth};
}

TextFixture render_glyph_weighted(char c, const std::vector<int>& column_widths,
                                  const std::vector<int>& row_heights,
                                  Point position, int canvas_width,
                                  int canvas_height) {
  const auto& pattern = glyph_pattern(c);
  if (column_widths.size() != kGlyphColumns ||
      row_heights.size() != kGlyphRows) {
    throw FixtureError("need 5 column widths and 7 row heights");
  }
  if (std::any_of(column_widths.begin(), column_widths.end(),
                  [](int v) { return v < 1; }) ||
      std::any_of(row_heights.begin(), row_heights.end(),
                  [](int v) { return v < 1; })) {
    throw FixtureError("cell sizes must be positive");
  }
  const int width = std::accumulate(column_widths.begin(), column_widths.end(), 0);
  const int height = std::accumulate(row_heights.begin(), row_heights.end(), 0);
  check_canvas(position, width, height, canvas_width, canvas_height);

  GrayImage img(canvas_width, canvas_height, 255);
  draw_cells(img, pattern, column_widths, row_heights, position);
  const BoundingBox truth = ink_box(img);
  return {std::move(img), truth};
}

}  // namespace textdetect
