#include "fundusmark/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace fundusmark {

void FilterParams::validate() const {
  if (wiener_window < 3 || wiener_window % 2 == 0) {
    throw InvalidArgument("wiener window must be odd and at least 3");
  }
  if (median_window < 2) throw InvalidArgument("median window must be at least 2");
  if (area_open_min < 1) throw InvalidArgument("area-open minimum must be at least 1");
  if (binarize_threshold && !(*binarize_threshold >= 0.0 && *binarize_threshold <= 1.0)) {
    throw InvalidArgument("binarize threshold must lie in [0, 1]");
  }
  if (!(sobel_factor > 0.0)) throw InvalidArgument("sobel factor must be positive");
}

namespace {

// Summed-area table with one row/column of leading zeros.
class IntegralImage {
 public:
  template <typename F>
  IntegralImage(const GrayImage& img, F transform)
      : cols_(img.cols() + 1), sums_((img.rows() + 1) * (img.cols() + 1), 0.0) {
    for (std::size_t y = 0; y < img.rows(); ++y) {
      double run = 0.0;
      const double* src = img.row(y);
      for (std::size_t x = 0; x < img.cols(); ++x) {
        run += transform(src[x]);
        sums_[(y + 1) * cols_ + x + 1] = sums_[y * cols_ + x + 1] + run;
      }
    }
  }

  // Sum over [x0, x1) x [y0, y1).
  double sum(std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) const {
    return sums_[y1 * cols_ + x1] - sums_[y0 * cols_ + x1] - sums_[y1 * cols_ + x0] +
           sums_[y0 * cols_ + x0];
  }

 private:
  std::size_t cols_;
  std::vector<double> sums_;
};

constexpr std::array<std::array<int, 2>, 8> kNeighbours8{
    {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

}  // namespace

GrayImage wiener_filter(const GrayImage& img, int window) {
  if (window < 3 || window % 2 == 0) {
    throw InvalidArgument("wiener window must be odd and at least 3");
  }
  if (img.empty()) return img;
  const long half = window / 2;
  const long rows = static_cast<long>(img.rows());
  const long cols = static_cast<long>(img.cols());

  // Shift by a reference level to keep E[x^2] - E[x]^2 well conditioned.
  const double ref = img[0];
  const IntegralImage s1(img, [ref](double v) { return v - ref; });
  const IntegralImage s2(img, [ref](double v) { return (v - ref) * (v - ref); });

  RealPlane mean(img.rows(), img.cols());
  RealPlane var(img.rows(), img.cols());
  double var_total = 0.0;
  for (long y = 0; y < rows; ++y) {
    const auto y0 = static_cast<std::size_t>(std::max(0L, y - half));
    const auto y1 = static_cast<std::size_t>(std::min(rows, y + half + 1));
    for (long x = 0; x < cols; ++x) {
      const auto x0 = static_cast<std::size_t>(std::max(0L, x - half));
      const auto x1 = static_cast<std::size_t>(std::min(cols, x + half + 1));
      const double n = static_cast<double>((x1 - x0) * (y1 - y0));
      const double m = s1.sum(x0, y0, x1, y1) / n;
      const double v = std::max(0.0, s2.sum(x0, y0, x1, y1) / n - m * m);
      mean.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = m + ref;
      var.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = v;
      var_total += v;
    }
  }
  const double noise = var_total / static_cast<double>(img.size());
  constexpr double kEps = 1e-12;

  GrayImage out(img.rows(), img.cols());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double gain = std::max(0.0, var[i] - noise) / std::max(var[i], kEps);
    out[i] = mean[i] + gain * (img[i] - mean[i]);
  }
  return out;
}

GrayImage normalize_subtract(const GrayImage& foreground, const GrayImage& background) {
  if (!foreground.same_shape(background)) {
    throw DimensionError("normalize_subtract operands differ in size");
  }
  GrayImage out(foreground.rows(), foreground.cols());
  if (out.empty()) return out;
  std::vector<double> diff(foreground.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = foreground[i] - background[i];
  const auto [lo, hi] = std::minmax_element(diff.begin(), diff.end());
  const double min = *lo;
  const double span = *hi - *lo;
  if (span <= 0.0) return out;
  for (std::size_t i = 0; i < diff.size(); ++i) out[i] = (diff[i] - min) / span * 255.0;
  return out;
}

namespace {

int histogram_bin(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return static_cast<int>(v);
}

}  // namespace

int otsu_threshold(const GrayImage& img) {
  std::array<long long, 256> hist{};
  for (double v : img.values()) ++hist[static_cast<std::size_t>(histogram_bin(v))];
  if (std::count_if(hist.begin(), hist.end(), [](long long c) { return c > 0; }) < 2) {
    throw DegenerateInput("no separating threshold");
  }

  long long total = 0;
  long long weighted_total = 0;
  for (int i = 0; i < 256; ++i) {
    total += hist[static_cast<std::size_t>(i)];
    weighted_total += i * hist[static_cast<std::size_t>(i)];
  }

  int best_bin = 0;
  double best = -1.0;
  long long n0 = 0;
  long long w0 = 0;
  for (int t = 0; t < 255; ++t) {
    n0 += hist[static_cast<std::size_t>(t)];
    w0 += t * hist[static_cast<std::size_t>(t)];
    const long long n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const double mu0 = static_cast<double>(w0) / static_cast<double>(n0);
    const double mu1 = static_cast<double>(weighted_total - w0) / static_cast<double>(n1);
    const double p0 = static_cast<double>(n0) / static_cast<double>(total);
    const double between = p0 * (1.0 - p0) * (mu0 - mu1) * (mu0 - mu1);
    if (between > best) {
      best = between;
      best_bin = t;
    }
  }
  return best_bin;
}

BinaryMask binarize(const GrayImage& img, std::optional<double> threshold) {
  BinaryMask out(img.rows(), img.cols());
  if (threshold) {
    if (!(*threshold >= 0.0 && *threshold <= 1.0)) {
      throw InvalidArgument("binarize threshold must lie in [0, 1]");
    }
    const double level = *threshold * 255.0;
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i] > level ? 1 : 0;
    return out;
  }
  const int split = otsu_threshold(img);
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = histogram_bin(img[i]) > split ? 1 : 0;
  return out;
}

BinaryMask area_open(const BinaryMask& mask, int min_size) {
  if (min_size < 1) throw InvalidArgument("area-open minimum must be at least 1");
  const long rows = static_cast<long>(mask.rows());
  const long cols = static_cast<long>(mask.cols());
  BinaryMask out = mask;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> component;

  for (std::size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || seen[start]) continue;
    component.clear();
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      component.push_back(idx);
      const long x = static_cast<long>(idx) % cols;
      const long y = static_cast<long>(idx) / cols;
      for (const auto& [dx, dy] : kNeighbours8) {
        const long nx = x + dx;
        const long ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= cols || ny >= rows) continue;
        const auto n = static_cast<std::size_t>(ny * cols + nx);
        if (mask[n] && !seen[n]) {
          seen[n] = 1;
          stack.push_back(n);
        }
      }
    }
    if (component.size() < static_cast<std::size_t>(min_size)) {
      for (std::size_t idx : component) out[idx] = 0;
    }
  }
  return out;
}

RealPlane sobel_magnitude(const GrayImage& img) {
  RealPlane out(img.rows(), img.cols());
  const long rows = static_cast<long>(img.rows());
  const long cols = static_cast<long>(img.cols());
  for (long y = 0; y < rows; ++y) {
    for (long x = 0; x < cols; ++x) {
      const double tl = img.clamped(x - 1, y - 1), tc = img.clamped(x, y - 1),
                   tr = img.clamped(x + 1, y - 1);
      const double ml = img.clamped(x - 1, y), mr = img.clamped(x + 1, y);
      const double bl = img.clamped(x - 1, y + 1), bc = img.clamped(x, y + 1),
                   br = img.clamped(x + 1, y + 1);
      const double gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
      const double gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

BinaryMask sobel_edges(const GrayImage& img, double factor) {
  if (!(factor > 0.0)) throw InvalidArgument("sobel factor must be positive");
  const RealPlane mag = sobel_magnitude(img);
  BinaryMask out(img.rows(), img.cols());
  if (mag.empty()) return out;
  double total = 0.0;
  for (double v : mag.values()) total += v;
  const double level = factor * total / static_cast<double>(mag.size());
  for (std::size_t i = 0; i < mag.size(); ++i) out[i] = mag[i] > level ? 1 : 0;
  return out;
}

BinaryMask thin(const BinaryMask& mask) {
  BinaryMask img = mask;
  const long rows = static_cast<long>(img.rows());
  const long cols = static_cast<long>(img.cols());
  auto px = [&](long x, long y) -> int {
    if (x < 0 || y < 0 || x >= cols || y >= rows) return 0;
    return img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  };

  std::vector<std::size_t> doomed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      doomed.clear();
      for (long y = 0; y < rows; ++y) {
        for (long x = 0; x < cols; ++x) {
          if (!px(x, y)) continue;
          // P2..P9 clockwise from north.
          const int p2 = px(x, y - 1), p3 = px(x + 1, y - 1), p4 = px(x + 1, y),
                    p5 = px(x + 1, y + 1), p6 = px(x, y + 1), p7 = px(x - 1, y + 1),
                    p8 = px(x - 1, y), p9 = px(x - 1, y - 1);
          const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
          if (b < 2 || b > 6) continue;
          const int a = (!p2 && p3) + (!p3 && p4) + (!p4 && p5) + (!p5 && p6) + (!p6 && p7) +
                        (!p7 && p8) + (!p8 && p9) + (!p9 && p2);
          if (a != 1) continue;
          if (pass == 0) {
            if (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0) continue;
          } else {
            if (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0) continue;
          }
          doomed.push_back(static_cast<std::size_t>(y * cols + x));
        }
      }
      for (std::size_t idx : doomed) img[idx] = 0;
      changed = changed || !doomed.empty();
    }
  }
  return img;
}

GrayImage complement(const GrayImage& img) {
  GrayImage out(img.rows(), img.cols());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = 255.0 - img[i];
  return out;
}

BinaryMask majority_filter3(const BinaryMask& mask) {
  BinaryMask out(mask.rows(), mask.cols());
  const long rows = static_cast<long>(mask.rows());
  const long cols = static_cast<long>(mask.cols());
  for (long y = 0; y < rows; ++y) {
    for (long x = 0; x < cols; ++x) {
      int ones = 0;
      for (long dy = -1; dy <= 1; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) ones += mask.clamped(x + dx, y + dy);
      }
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = ones >= 5 ? 1 : 0;
    }
  }
  return out;
}

}  // namespace fundusmark
