#pragma once

#include <span>
#include <vector>

#include "fundusmark/raster.hpp"

namespace fundusmark {

struct HarrisParams {
  double sigma = 1.5;
  int window_radius = -1;  // negative: ceil(3 * sigma)
  double k = 0.04;
  int nms_radius = 3;
  double response_floor = 0.01;  // fraction of the global maximum response

  int effective_radius() const;
  void validate() const;
};

struct Gradients {
  RealPlane ix;
  RealPlane iy;
};

// Entries of the windowed auto-correlation matrix [[a, b], [b, c]].
struct StructureTensor {
  RealPlane a;  // sum of Ix^2
  RealPlane b;  // sum of Ix*Iy
  RealPlane c;  // sum of Iy^2
};

struct CornerPoint {
  PixelPoint location;
  double response = 0.0;
};

struct HarrisDiameter {
  PixelPoint first;
  PixelPoint second;
  double diameter = 0.0;
};

// Central differences with [-1, 0, 1], replicate borders.
Gradients gradients(const GrayImage& img);

// Gradient products smoothed by a normalized isotropic Gaussian window
// truncated at params.effective_radius(); replicate borders.
StructureTensor structure_tensor(const RealPlane& ix, const RealPlane& iy, const HarrisParams& params);

// det - k * trace^2 per pixel.
RealPlane corner_response(const StructureTensor& t, double k = 0.04);

// Strict local maxima of the response within (2r+1)^2 neighbourhoods that
// also reach response_floor * max. Sorted by descending response, then (y, x).
std::vector<CornerPoint> detect_corners(const GrayImage& img, const HarrisParams& params = {});

// Same, starting from a precomputed response plane.
std::vector<CornerPoint> select_corners(const RealPlane& response, const HarrisParams& params);

// Exhaustive farthest pair. Pairs are ordered so first precedes second in
// (y, x) order; equal distances keep the lexicographically smallest pair.
HarrisDiameter max_harris_diameter(std::span<const CornerPoint> points);

}  // namespace fundusmark
