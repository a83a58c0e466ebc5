#include "fundusmark/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fundusmark {

namespace {

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("gray image sample is not finite");
  }
}

void check_inside(const Rect& r, std::size_t rows, std::size_t cols) {
  const Rect host{{0, 0}, static_cast<int>(cols), static_cast<int>(rows)};
  if (r.empty() || !host.contains(r)) {
    throw BoundsError("rectangle (" + std::to_string(r.left()) + "," + std::to_string(r.top()) +
                      " " + std::to_string(r.width) + "x" + std::to_string(r.height) +
                      ") is outside the " + std::to_string(cols) + "x" + std::to_string(rows) +
                      " image");
  }
}

template <typename G>
G crop_grid(const G& img, const Rect& r) {
  check_inside(r, img.rows(), img.cols());
  G out(static_cast<std::size_t>(r.height), static_cast<std::size_t>(r.width));
  for (int y = 0; y < r.height; ++y) {
    const auto* src = img.row(static_cast<std::size_t>(r.top() + y)) + r.left();
    std::copy(src, src + r.width, out.row(static_cast<std::size_t>(y)));
  }
  return out;
}

template <typename G>
void paste(G& base, const G& patch, const Rect& at) {
  for (int y = 0; y < at.height; ++y) {
    const auto* src = patch.row(static_cast<std::size_t>(y));
    std::copy(src, src + at.width, base.row(static_cast<std::size_t>(at.top() + y)) + at.left());
  }
}

void check_patch(const Rect& at, std::size_t patch_rows, std::size_t patch_cols) {
  if (static_cast<int>(patch_rows) != at.height || static_cast<int>(patch_cols) != at.width) {
    throw DimensionError("overlay patch does not match the target rectangle");
  }
}

GrayImage clamped(const GrayImage& img) {
  GrayImage out = img;
  for (double& v : out.values()) v = clamp_intensity(v);
  return out;
}

}  // namespace

Rect intersect(const Rect& a, const Rect& b) {
  const int l = std::max(a.left(), b.left());
  const int t = std::max(a.top(), b.top());
  const int r = std::min(a.right(), b.right());
  const int btm = std::min(a.bottom(), b.bottom());
  if (r <= l || btm <= t) return {{l, t}, 0, 0};
  return {{l, t}, r - l, btm - t};
}

GrayImage::GrayImage(std::size_t rows, std::size_t cols, double fill) : Grid(rows, cols, fill) {
  if (!std::isfinite(fill)) throw InvalidArgument("gray image sample is not finite");
}

GrayImage::GrayImage(std::size_t rows, std::size_t cols, std::vector<double> values)
    : Grid(rows, cols, std::move(values)) {
  check_finite(this->values());
}

GrayImage::GrayImage(RealPlane plane) : Grid(std::move(plane)) { check_finite(values()); }

bool GrayImage::in_range() const {
  return std::all_of(values().begin(), values().end(),
                     [](double v) { return v >= 0.0 && v <= 255.0; });
}

BinaryMask::BinaryMask(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> bits)
    : Grid(rows, cols, std::move(bits)) {
  for (auto& b : values()) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(values().begin(), values().end(), std::uint8_t{1}));
}

ColorImage::ColorImage(GrayImage red, GrayImage green, GrayImage blue)
    : red_(std::move(red)), green_(std::move(green)), blue_(std::move(blue)) {
  if (!red_.same_shape(green_) || !blue_.same_shape(green_)) {
    throw DimensionError("color planes differ in size");
  }
}

GrayImage green_channel(const ColorImage& img) { return img.green(); }

ColorImage recombine_color(const ColorImage& original, const GrayImage& new_green) {
  if (!new_green.same_shape(original.green())) {
    throw DimensionError("replacement green plane does not match the color image");
  }
  return {clamped(original.red()), clamped(new_green), clamped(original.blue())};
}

GrayImage crop(const GrayImage& img, const Rect& r) { return crop_grid(img, r); }

BinaryMask crop(const BinaryMask& img, const Rect& r) { return crop_grid(img, r); }

ColorImage crop(const ColorImage& img, const Rect& r) {
  return {crop(img.red(), r), crop(img.green(), r), crop(img.blue(), r)};
}

GrayImage overlay(const GrayImage& base, const GrayImage& patch, const Rect& at) {
  check_inside(at, base.rows(), base.cols());
  check_patch(at, patch.rows(), patch.cols());
  GrayImage out = base;
  paste(out, patch, at);
  return out;
}

ColorImage overlay(const ColorImage& base, const ColorImage& patch, const Rect& at) {
  return {overlay(base.red(), patch.red(), at), overlay(base.green(), patch.green(), at),
          overlay(base.blue(), patch.blue(), at)};
}

GrayImage mask_to_gray(const BinaryMask& mask, double on) {
  GrayImage out(mask.rows(), mask.cols());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? on : 0.0;
  return out;
}

}  // namespace fundusmark
