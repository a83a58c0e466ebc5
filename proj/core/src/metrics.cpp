#include "fundusmark/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace fundusmark {

PsnrResult psnr(const GrayImage& original, const GrayImage& modified, PsnrPeak peak) {
  if (!original.same_shape(modified)) throw DimensionError("psnr operands differ in size");
  if (original.empty()) throw DegenerateInput("psnr of an empty image");
  double squared_error = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double d = original[i] - modified[i];
    squared_error += d * d;
  }
  if (squared_error == 0.0) return {true, 0.0};

  double peak_value = 255.0;
  if (peak == PsnrPeak::kOriginalMax) {
    peak_value = *std::max_element(original.values().begin(), original.values().end());
    if (!(peak_value > 0.0)) throw DegenerateInput("original image has no positive peak");
  }
  const double n = static_cast<double>(original.size());
  return {false, 10.0 * std::log10(n * peak_value * peak_value / squared_error)};
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("pearson operands differ in length");
  if (x.size() < 2) throw DegenerateInput("pearson needs at least two samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("pearson input has zero variance");
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

double bit_error_rate(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw DimensionError("bit error rate operands differ in size");
  if (a.empty()) return 0.0;
  std::size_t differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differing += (a[i] != 0) != (b[i] != 0);
  return static_cast<double>(differing) / static_cast<double>(a.size());
}

}  // namespace fundusmark
