#pragma once

#include <array>
#include <span>

#include <fundusmark/anatomy.hpp>
#include <fundusmark/corners.hpp>
#include <fundusmark/raster.hpp>

namespace fundusmark::cli {

using Rgb = std::array<double, 3>;

inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kGreen{0, 255, 0};
inline constexpr Rgb kBlue{0, 96, 255};
inline constexpr Rgb kYellow{255, 255, 0};
inline constexpr Rgb kCyan{0, 255, 255};

ColorImage to_color(const GrayImage& gray);

// Drawing silently clips to the image.
void plot(ColorImage& img, int x, int y, const Rgb& c);
void draw_cross(ColorImage& img, const Point2& at, int arm, const Rgb& c);
void draw_line(ColorImage& img, const Point2& a, const Point2& b, const Rgb& c);
void draw_rect(ColorImage& img, const Rect& r, const Rgb& c);
void draw_corners(ColorImage& img, std::span<const CornerPoint> corners, const Rgb& c);

// Disc diameter, ellipse centre, search space, macula and NROI on one image.
ColorImage annotate(const ColorImage& fundus, const Localization& loc);

}  // namespace fundusmark::cli
