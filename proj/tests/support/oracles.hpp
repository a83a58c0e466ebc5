#pragma once

// Slow, obviously-correct reference implementations used to check the
// library's fast paths.

#include <cstdint>
#include <vector>

#include <fundusmark/fundusmark.hpp>

namespace fundusmark::testing {

GrayImage random_gray(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = 0.0,
                      double hi = 255.0);
ColorImage random_color(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Median over the replicate-padded window by full sort.
GrayImage brute_median(const GrayImage& img, int window);

// Local statistics recomputed per pixel by direct summation.
GrayImage brute_wiener(const GrayImage& img, int window);

// 8-connected component sizes by flood fill; label image + size per label.
struct Components {
  std::vector<int> label;  // -1 for background
  std::vector<std::size_t> size;
};
Components label_components(const BinaryMask& mask);

// Eq.-free Harris autocorrelation E(u, v) = sum_w [I(x+u, y+v) - I(x, y)]^2
// over a (2r+1)^2 box, for shift (u, v).
double autocorrelation(const GrayImage& img, int x, int y, int u, int v, int r);

// Pearson coefficient from textbook sums, long double accumulation.
double reference_pearson(const std::vector<double>& x, const std::vector<double>& y);

// xorshift64* chips generated straight from the published constants.
std::vector<int> reference_pn(const std::vector<std::uint8_t>& key, std::uint64_t index, std::size_t n);

}  // namespace fundusmark::testing
