#pragma once

#include <span>

#include "fundusmark/raster.hpp"

namespace fundusmark {

enum class PsnrPeak {
  kOriginalMax,  // max over the original image, squared
  kFixed255,
};

struct PsnrResult {
  bool identical = false;  // zero squared error; value is meaningless
  double value_db = 0.0;
};

// 10 log10(M N peak^2 / sum (P - P')^2).
PsnrResult psnr(const GrayImage& original, const GrayImage& modified,
                PsnrPeak peak = PsnrPeak::kOriginalMax);

// Pearson correlation coefficient. Throws DegenerateInput for a constant input.
double pearson(std::span<const double> x, std::span<const double> y);

double bit_error_rate(const BinaryMask& a, const BinaryMask& b);

}  // namespace fundusmark
