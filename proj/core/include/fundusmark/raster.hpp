#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fundusmark/errors.hpp"

namespace fundusmark {

// Pixel coordinates: x is the column, y is the row, origin top-left.
// Signed so that geometry (search spaces) may extend past the image before
// it is clipped.
struct PixelPoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

// Row-major ordering, (y, x) ascending. Used for every deterministic tie-break.
constexpr bool row_major_less(const PixelPoint& a, const PixelPoint& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline Point2 to_point(const PixelPoint& p) {
  return {static_cast<double>(p.x), static_cast<double>(p.y)};
}

// Round half up; the single rounding rule used for all derived geometry.
inline int round_half_up(double v) {
  return static_cast<int>(std::floor(v + 0.5));
}

// Half-open pixel rectangle [left, right) x [top, bottom).
struct Rect {
  PixelPoint origin;
  int width = 0;
  int height = 0;

  int left() const { return origin.x; }
  int top() const { return origin.y; }
  int right() const { return origin.x + width; }
  int bottom() const { return origin.y + height; }
  bool empty() const { return width <= 0 || height <= 0; }

  bool contains(const PixelPoint& p) const {
    return p.x >= left() && p.x < right() && p.y >= top() && p.y < bottom();
  }
  bool contains(const Point2& p) const {
    return p.x >= left() && p.x < right() && p.y >= top() && p.y < bottom();
  }
  bool contains(const Rect& r) const {
    return r.left() >= left() && r.right() <= right() && r.top() >= top() &&
           r.bottom() <= bottom();
  }
  Point2 center() const {
    return {origin.x + (width - 1) / 2.0, origin.y + (height - 1) / 2.0};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect intersect(const Rect& a, const Rect& b);

// Dense row-major 2D storage.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Grid(std::size_t rows, std::size_t cols, std::vector<T> values)
      : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("grid data length does not match rows x cols");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& at(std::size_t x, std::size_t y) { return data_[y * cols_ + x]; }
  const T& at(std::size_t x, std::size_t y) const { return data_[y * cols_ + x]; }

  // Border-replicating read; x and y may lie outside the grid.
  const T& clamped(long x, long y) const {
    const long cx = x < 0 ? 0 : (x >= static_cast<long>(cols_) ? static_cast<long>(cols_) - 1 : x);
    const long cy = y < 0 ? 0 : (y >= static_cast<long>(rows_) ? static_cast<long>(rows_) - 1 : y);
    return data_[static_cast<std::size_t>(cy) * cols_ + static_cast<std::size_t>(cx)];
  }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  T* row(std::size_t y) noexcept { return data_.data() + y * cols_; }
  const T* row(std::size_t y) const noexcept { return data_.data() + y * cols_; }

  bool same_shape(const Grid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  Rect bounds() const {
    return {{0, 0}, static_cast<int>(cols_), static_cast<int>(rows_)};
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealPlane = Grid<double>;

// Real-valued intensity plane. Nominal range is [0, 255]; values are kept
// unquantized between stages and clamped only by recombine_color and at
// file output. Construction rejects non-finite samples.
class GrayImage : public Grid<double> {
 public:
  GrayImage() = default;
  GrayImage(std::size_t rows, std::size_t cols, double fill = 0.0);
  GrayImage(std::size_t rows, std::size_t cols, std::vector<double> values);
  explicit GrayImage(RealPlane plane);

  // True when every sample lies in [0, 255].
  bool in_range() const;
};

class BinaryMask : public Grid<std::uint8_t> {
 public:
  BinaryMask() = default;
  BinaryMask(std::size_t rows, std::size_t cols, bool fill = false)
      : Grid(rows, cols, static_cast<std::uint8_t>(fill ? 1 : 0)) {}
  BinaryMask(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> bits);

  bool test(std::size_t x, std::size_t y) const { return at(x, y) != 0; }
  void set(std::size_t x, std::size_t y, bool v) { at(x, y) = v ? 1 : 0; }
  std::size_t count() const;
};

class ColorImage {
 public:
  ColorImage() = default;
  ColorImage(std::size_t rows, std::size_t cols, double fill = 0.0)
      : red_(rows, cols, fill), green_(rows, cols, fill), blue_(rows, cols, fill) {}
  ColorImage(GrayImage red, GrayImage green, GrayImage blue);

  std::size_t rows() const noexcept { return green_.rows(); }
  std::size_t cols() const noexcept { return green_.cols(); }
  Rect bounds() const { return green_.bounds(); }

  const GrayImage& red() const noexcept { return red_; }
  const GrayImage& green() const noexcept { return green_; }
  const GrayImage& blue() const noexcept { return blue_; }
  GrayImage& red() noexcept { return red_; }
  GrayImage& green() noexcept { return green_; }
  GrayImage& blue() noexcept { return blue_; }

  friend bool operator==(const ColorImage&, const ColorImage&) = default;

 private:
  GrayImage red_;
  GrayImage green_;
  GrayImage blue_;
};

GrayImage green_channel(const ColorImage& img);

// Replaces the green plane; all three planes are clamped to [0, 255].
ColorImage recombine_color(const ColorImage& original, const GrayImage& new_green);

GrayImage crop(const GrayImage& img, const Rect& r);
ColorImage crop(const ColorImage& img, const Rect& r);
BinaryMask crop(const BinaryMask& img, const Rect& r);

ColorImage overlay(const ColorImage& base, const ColorImage& patch, const Rect& at);
GrayImage overlay(const GrayImage& base, const GrayImage& patch, const Rect& at);

GrayImage mask_to_gray(const BinaryMask& mask, double on = 255.0);

inline double clamp_intensity(double v) { return v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v); }

}  // namespace fundusmark
