#include "cli/draw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace fundusmark::cli {

ColorImage to_color(const GrayImage& gray) {
  return {gray, gray, gray};
}

void plot(ColorImage& img, int x, int y, const Rgb& c) {
  if (x < 0 || y < 0 || x >= static_cast<int>(img.cols()) || y >= static_cast<int>(img.rows())) return;
  const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
  img.red().at(ux, uy) = c[0];
  img.green().at(ux, uy) = c[1];
  img.blue().at(ux, uy) = c[2];
}

void draw_cross(ColorImage& img, const Point2& at, int arm, const Rgb& c) {
  const int x = round_half_up(at.x), y = round_half_up(at.y);
  for (int d = -arm; d <= arm; ++d) {
    plot(img, x + d, y, c);
    plot(img, x, y + d, c);
  }
}

// Bresenham between the rounded end points.
void draw_line(ColorImage& img, const Point2& a, const Point2& b, const Rgb& c) {
  int x0 = round_half_up(a.x), y0 = round_half_up(a.y);
  const int x1 = round_half_up(b.x), y1 = round_half_up(b.y);
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    plot(img, x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_rect(ColorImage& img, const Rect& r, const Rgb& c) {
  if (r.empty()) return;
  for (int x = r.left(); x < r.right(); ++x) {
    plot(img, x, r.top(), c);
    plot(img, x, r.bottom() - 1, c);
  }
  for (int y = r.top(); y < r.bottom(); ++y) {
    plot(img, r.left(), y, c);
    plot(img, r.right() - 1, y, c);
  }
}

void draw_corners(ColorImage& img, std::span<const CornerPoint> corners, const Rgb& c) {
  for (const auto& p : corners) draw_cross(img, to_point(p.location), 3, c);
}

ColorImage annotate(const ColorImage& fundus, const Localization& loc) {
  ColorImage out = fundus;
  draw_line(out, to_point(loc.disc.rim_first), to_point(loc.disc.rim_second), kCyan);
  draw_cross(out, loc.disc.center, 6, kCyan);
  draw_cross(out, loc.ellipse.center, 6, kYellow);
  draw_rect(out, loc.search.rect, kBlue);
  draw_cross(out, loc.macula.selected.point, 6, kRed);
  draw_rect(out, loc.nroi.rect, kGreen);
  return out;
}

}  // namespace fundusmark::cli
