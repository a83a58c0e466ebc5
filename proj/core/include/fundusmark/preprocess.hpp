#pragma once

#include <optional>

#include "fundusmark/raster.hpp"

namespace fundusmark {

struct FilterParams {
  int wiener_window = 7;   // odd, >= 3
  int median_window = 22;  // >= 2
  int area_open_min = 100;
  // Fraction of 255 in [0, 1]; Otsu when empty.
  std::optional<double> binarize_threshold;
  // Sobel edges keep magnitudes above this multiple of the mean magnitude.
  double sobel_factor = 4.0;

  void validate() const;
};

// Adaptive Wiener filter. Local mean and variance are taken over the part of
// the window that lies inside the image; the noise power is the mean of all
// local variances.
GrayImage wiener_filter(const GrayImage& img, int window);

// Replicate-padded median. Even windows put ceil(w/2)-1 pixels above/left of
// the anchor and average the two middle order statistics.
GrayImage median_filter(const GrayImage& img, int window);

// (foreground - background), rescaled so min -> 0 and max -> 255. A constant
// difference yields all zeros.
GrayImage normalize_subtract(const GrayImage& foreground, const GrayImage& background);

// Otsu bin over a 256-bin histogram (bin = floor(v) clamped to [0, 255]).
// Pixels in bins above the returned value are foreground. Throws
// DegenerateInput("no separating threshold") with fewer than two occupied bins.
int otsu_threshold(const GrayImage& img);

// With an explicit threshold t (fraction of 255) a bit is set when
// intensity > t * 255. Without one, Otsu selects the split bin.
BinaryMask binarize(const GrayImage& img, std::optional<double> threshold = std::nullopt);

// Clears 8-connected components smaller than min_size pixels.
BinaryMask area_open(const BinaryMask& mask, int min_size);

// Gradient magnitude of the 3x3 Sobel pair, replicate borders.
RealPlane sobel_magnitude(const GrayImage& img);
BinaryMask sobel_edges(const GrayImage& img, double factor = 4.0);

// Zhang-Suen thinning iterated to a fixpoint. Pixels outside the mask count
// as background.
BinaryMask thin(const BinaryMask& mask);

GrayImage complement(const GrayImage& img);

// 3x3 majority vote with replicate borders: the binary median.
BinaryMask majority_filter3(const BinaryMask& mask);

}  // namespace fundusmark
