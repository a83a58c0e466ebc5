#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fundusmark/corners.hpp"
#include "fundusmark/preprocess.hpp"
#include "fundusmark/raster.hpp"

namespace fundusmark {

// Conic a x^2 + b xy + c y^2 + d x + e y + f = 0 with unit-norm coefficients.
struct EllipseFit {
  Point2 center;
  std::array<double, 6> conic{};
  double residual = 0.0;  // sum of squared algebraic distances
};

struct OpticDisc {
  Point2 center;
  double diameter = 0.0;
  double radius = 0.0;
  PixelPoint rim_first;  // the extreme corner pair that fixed the diameter
  PixelPoint rim_second;
};

struct SearchSpace {
  Rect rect;
  int direction = 1;  // +1: search to the right of the disc, -1: to the left
  bool clipped = false;
};

struct MaculaCandidate {
  Point2 point;
  double distance = 0.0;  // to the disc centre
};

struct MaculaEstimate {
  std::vector<MaculaCandidate> candidates;
  MaculaCandidate selected;
  std::size_t in_space = 0;
  double min_distance = 0.0;
  double mean_distance = 0.0;
  double max_distance = 0.0;
};

struct NroiRegion {
  Rect rect;

  friend bool operator==(const NroiRegion&, const NroiRegion&) = default;
};

struct LocalizationParams {
  FilterParams filter;
  HarrisParams harris;
  double search_length_factor = 1.0;
  int intensity_window = 11;
  int max_intensity_points = 32;

  void validate() const;
};

// Least-squares conic through the points (algebraic distance, unit-norm
// coefficients). Throws DegenerateInput with fewer than five points or when
// the best conic is not an ellipse.
EllipseFit fit_ellipse(std::span<const Point2> points);

Point2 locate_macula_direction(const ColorImage& fundus, const FilterParams& filter,
                               const HarrisParams& harris);

OpticDisc detect_optic_disc(const ColorImage& roi, const FilterParams& filter,
                            const HarrisParams& harris);

// Strict 3x3 local minima of the window-mean plane, darkest first.
std::vector<Point2> min_avg_intensity_points(const GrayImage& img, int window, int max_points);

SearchSpace build_search_space(const OpticDisc& disc, int direction, const Rect& image_bounds,
                               double length_factor = 1.0);

MaculaEstimate select_macula(std::span<const Point2> candidates, const OpticDisc& disc,
                             const SearchSpace& space);

NroiRegion select_nroi(const SearchSpace& space, const MaculaEstimate& macula,
                       const OpticDisc& disc);

struct Localization {
  EllipseFit ellipse;
  OpticDisc disc;
  int direction = 1;
  SearchSpace search;
  MaculaEstimate macula;
  NroiRegion nroi;
};

// Intermediate products of localize(), kept for stage dumps.
struct LocalizationTrace {
  GrayImage gray;
  GrayImage background;
  GrayImage vessel_contrast;
  BinaryMask vessels;
  BinaryMask skeleton;
  std::vector<CornerPoint> vessel_corners;
  GrayImage disc_contrast;
  BinaryMask disc_mask;
  BinaryMask disc_edges;
  std::vector<CornerPoint> disc_corners;
  std::vector<Point2> intensity_points;
};

// Full pipeline: macula direction, optic disc, search space, macula
// candidates and NROI. Throws LocalizationError naming the failing stage.
Localization localize(const ColorImage& fundus, const LocalizationParams& params = {},
                      LocalizationTrace* trace = nullptr);

}  // namespace fundusmark
