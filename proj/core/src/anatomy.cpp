#include "fundusmark/anatomy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace fundusmark {

void LocalizationParams::validate() const {
  filter.validate();
  harris.validate();
  if (!(search_length_factor > 0.0)) throw InvalidArgument("search length factor must be positive");
  if (intensity_window < 3 || intensity_window % 2 == 0) {
    throw InvalidArgument("intensity window must be odd and at least 3");
  }
  if (max_intensity_points < 1) throw InvalidArgument("max intensity points must be positive");
}

EllipseFit fit_ellipse(std::span<const Point2> points) {
  if (points.size() < 5) throw DegenerateInput("ellipse fit needs at least five points");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(n, 6);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = points[static_cast<std::size_t>(i)].x;
    const double y = points[static_cast<std::size_t>(i)].y;
    design.row(i) << x * x, x * y, y * y, x, y, 1.0;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  // The conic must be the unique minimal direction: the next singular value
  // may not vanish as well.
  const Eigen::Index next = std::min<Eigen::Index>(sv.size() - 1, 4);
  if (!(sv(next) > 1e-12 * sv(0))) throw DegenerateInput("points do not determine a unique conic");

  Eigen::VectorXd v = svd.matrixV().col(5);
  if (v(0) < 0.0) v = -v;
  EllipseFit fit;
  for (int i = 0; i < 6; ++i) fit.conic[static_cast<std::size_t>(i)] = v(i);
  const double a = v(0), b = v(1), c = v(2), d = v(3), e = v(4), f = v(5);
  const double disc = b * b - 4.0 * a * c;
  if (!(disc < 0.0)) throw DegenerateInput("best-fit conic is not an ellipse");
  fit.center = {(2.0 * c * d - b * e) / disc, (2.0 * a * e - b * d) / disc};
  const double cx = fit.center.x, cy = fit.center.y;
  const double at_center = a * cx * cx + b * cx * cy + c * cy * cy + d * cx + e * cy + f;
  if (!(at_center < 0.0)) throw DegenerateInput("best-fit conic is an imaginary ellipse");
  fit.residual = (design * v).squaredNorm();
  return fit;
}

namespace {

struct Background {
  GrayImage gray;
  GrayImage smoothed;    // Wiener output
  GrayImage background;  // median of the Wiener output
};

Background estimate_background(const GrayImage& gray, const FilterParams& filter) {
  Background bg;
  bg.gray = gray;
  bg.smoothed = wiener_filter(gray, filter.wiener_window);
  bg.background = median_filter(bg.smoothed, filter.median_window);
  return bg;
}

// A flat contrast image has no foreground rather than no threshold.
BinaryMask binarize_or_empty(const GrayImage& img, const FilterParams& filter) {
  try {
    return binarize(img, filter.binarize_threshold);
  } catch (const DegenerateInput&) {
    return BinaryMask(img.rows(), img.cols());
  }
}

std::vector<CornerPoint> corners_or_empty(const BinaryMask& mask, const HarrisParams& harris) {
  const auto side = static_cast<std::size_t>(2 * harris.nms_radius + 1);
  if (mask.rows() < side || mask.cols() < side) return {};
  return detect_corners(mask_to_gray(mask), harris);
}

EllipseFit vessel_ellipse(const Background& bg, const FilterParams& filter, const HarrisParams& harris,
                          LocalizationTrace* trace) {
  // Vessels are darker than the median background, so background minus
  // smoothed image makes them the bright class.
  const GrayImage contrast = normalize_subtract(bg.background, bg.smoothed);
  const BinaryMask vessels = area_open(binarize_or_empty(contrast, filter), filter.area_open_min);
  const BinaryMask skeleton = thin(sobel_edges(mask_to_gray(vessels), filter.sobel_factor));
  const std::vector<CornerPoint> corners = corners_or_empty(skeleton, harris);
  if (trace) {
    trace->vessel_contrast = contrast;
    trace->vessels = vessels;
    trace->skeleton = skeleton;
    trace->vessel_corners = corners;
  }
  if (corners.empty()) throw LocalizationError("vessel tree", "no corners detected");
  if (corners.size() < 5) throw LocalizationError("vessel tree", "fewer than five corners detected");

  std::vector<Point2> pts;
  pts.reserve(corners.size());
  for (const auto& c : corners) pts.push_back(to_point(c.location));
  try {
    return fit_ellipse(pts);
  } catch (const DegenerateInput& e) {
    throw LocalizationError("ellipse fit", e.what());
  }
}

OpticDisc disc_from(const Background& bg, const FilterParams& filter, const HarrisParams& harris,
                    LocalizationTrace* trace) {
  // Complementing the filtered image and subtracting it from the gray image
  // adds the two, so the bright disc dominates the result.
  const GrayImage contrast = normalize_subtract(bg.gray, complement(bg.background));
  const BinaryMask mask = binarize_or_empty(contrast, filter);
  const BinaryMask edges = sobel_edges(mask_to_gray(mask), filter.sobel_factor);
  const std::vector<CornerPoint> corners = corners_or_empty(edges, harris);
  if (trace) {
    trace->disc_contrast = contrast;
    trace->disc_mask = mask;
    trace->disc_edges = edges;
    trace->disc_corners = corners;
  }
  if (corners.empty()) throw LocalizationError("optic disc", "no corners detected");
  if (corners.size() < 2) throw LocalizationError("optic disc", "fewer than two corners detected");

  const HarrisDiameter extreme = max_harris_diameter(corners);
  OpticDisc disc;
  disc.center = {(extreme.first.x + extreme.second.x) / 2.0, (extreme.first.y + extreme.second.y) / 2.0};
  disc.diameter = extreme.diameter;
  disc.radius = disc.diameter / 2.0;
  disc.rim_first = extreme.first;
  disc.rim_second = extreme.second;
  return disc;
}

}  // namespace

Point2 locate_macula_direction(const ColorImage& fundus, const FilterParams& filter,
                               const HarrisParams& harris) {
  filter.validate();
  harris.validate();
  return vessel_ellipse(estimate_background(green_channel(fundus), filter), filter, harris, nullptr).center;
}

OpticDisc detect_optic_disc(const ColorImage& roi, const FilterParams& filter, const HarrisParams& harris) {
  filter.validate();
  harris.validate();
  return disc_from(estimate_background(green_channel(roi), filter), filter, harris, nullptr);
}

std::vector<Point2> min_avg_intensity_points(const GrayImage& img, int window, int max_points) {
  if (window < 3 || window % 2 == 0) throw InvalidArgument("intensity window must be odd and at least 3");
  if (max_points < 0) throw InvalidArgument("max points must be non-negative");
  const long rows = static_cast<long>(img.rows());
  const long cols = static_cast<long>(img.cols());
  const long half = window / 2;

  // Window means over the in-image part of each window.
  std::vector<double> sums(static_cast<std::size_t>((rows + 1) * (cols + 1)), 0.0);
  auto s = [&](long x, long y) -> double& { return sums[static_cast<std::size_t>(y * (cols + 1) + x)]; };
  const double ref = img.empty() ? 0.0 : img[0];
  for (long y = 0; y < rows; ++y) {
    double run = 0.0;
    for (long x = 0; x < cols; ++x) {
      run += img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) - ref;
      s(x + 1, y + 1) = s(x + 1, y) + run;
    }
  }
  RealPlane mean(img.rows(), img.cols());
  for (long y = 0; y < rows; ++y) {
    const long y0 = std::max(0L, y - half), y1 = std::min(rows, y + half + 1);
    for (long x = 0; x < cols; ++x) {
      const long x0 = std::max(0L, x - half), x1 = std::min(cols, x + half + 1);
      const double total = s(x1, y1) - s(x0, y1) - s(x1, y0) + s(x0, y0);
      mean.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
          ref + total / static_cast<double>((x1 - x0) * (y1 - y0));
    }
  }

  struct Minimum {
    double value;
    PixelPoint at;
  };
  std::vector<Minimum> minima;
  for (long y = 0; y < rows; ++y) {
    for (long x = 0; x < cols; ++x) {
      const double v = mean.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
      bool strict = true;
      int neighbours = 0;
      for (long dy = -1; dy <= 1 && strict; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) {
          const long nx = x + dx, ny = y + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= cols || ny >= rows) continue;
          ++neighbours;
          if (mean.at(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny)) <= v) {
            strict = false;
            break;
          }
        }
      }
      if (strict && neighbours > 0) minima.push_back({v, {static_cast<int>(x), static_cast<int>(y)}});
    }
  }
  std::sort(minima.begin(), minima.end(), [](const Minimum& a, const Minimum& b) {
    if (a.value != b.value) return a.value < b.value;
    return row_major_less(a.at, b.at);
  });
  if (minima.size() > static_cast<std::size_t>(max_points)) minima.resize(static_cast<std::size_t>(max_points));

  std::vector<Point2> out;
  out.reserve(minima.size());
  for (const auto& m : minima) out.push_back(to_point(m.at));
  return out;
}

SearchSpace build_search_space(const OpticDisc& disc, int direction, const Rect& image_bounds,
                               double length_factor) {
  if (!(disc.diameter > 0.0)) throw InvalidArgument("optic disc diameter must be positive");
  if (direction != 1 && direction != -1) throw InvalidArgument("direction must be +1 or -1");
  if (!(length_factor > 0.0)) throw InvalidArgument("search length factor must be positive");

  const int ox = round_half_up(disc.center.x);
  const int oy = round_half_up(disc.center.y);
  const int offset = round_half_up(1.5 * disc.diameter);
  const int width = round_half_up(length_factor * disc.diameter);
  const int height = round_half_up(0.5 * disc.diameter);

  SearchSpace space;
  space.direction = direction;
  const int left = direction > 0 ? ox + offset : ox - offset - width + 1;
  space.rect = {{left, oy - height / 2}, width, height};
  const Rect clipped = intersect(space.rect, image_bounds);
  if (!(clipped == space.rect)) {
    space.rect = clipped;
    space.clipped = true;
  }
  return space;
}

MaculaEstimate select_macula(std::span<const Point2> candidates, const OpticDisc& disc,
                             const SearchSpace& space) {
  MaculaEstimate est;
  est.candidates.reserve(candidates.size());
  for (const Point2& p : candidates) est.candidates.push_back({p, distance(p, disc.center)});

  double total = 0.0;
  bool found = false;
  for (const auto& c : est.candidates) {
    if (!space.rect.contains(c.point)) continue;
    ++est.in_space;
    total += c.distance;
    if (!found) {
      est.selected = c;
      est.min_distance = est.max_distance = c.distance;
      found = true;
      continue;
    }
    est.max_distance = std::max(est.max_distance, c.distance);
    const bool closer = c.distance < est.selected.distance ||
                        (c.distance == est.selected.distance &&
                         (c.point.y < est.selected.point.y ||
                          (c.point.y == est.selected.point.y && c.point.x < est.selected.point.x)));
    if (closer) est.selected = c;
    est.min_distance = std::min(est.min_distance, c.distance);
  }
  if (!found) throw DegenerateInput("no macula candidate inside the search space");
  est.mean_distance = total / static_cast<double>(est.in_space);
  return est;
}

NroiRegion select_nroi(const SearchSpace& space, const MaculaEstimate& macula, const OpticDisc& disc) {
  const int side = round_half_up(0.5 * disc.diameter);
  if (side < 1 || space.rect.width < side || space.rect.height < side) {
    throw DegenerateInput("search space is smaller than the NROI square");
  }
  const int top = space.rect.top() + (space.rect.height - side) / 2;
  const Rect left_end{{space.rect.left(), top}, side, side};
  const Rect right_end{{space.rect.right() - side, top}, side, side};
  const Rect& near_end = space.direction > 0 ? left_end : right_end;
  const Rect& far_end = space.direction > 0 ? right_end : left_end;

  const double near_gap = distance(near_end.center(), macula.selected.point);
  const double far_gap = distance(far_end.center(), macula.selected.point);
  return {near_gap > far_gap ? near_end : far_end};
}

Localization localize(const ColorImage& fundus, const LocalizationParams& params, LocalizationTrace* trace) {
  params.validate();
  const Background bg = estimate_background(green_channel(fundus), params.filter);
  if (trace) {
    trace->gray = bg.gray;
    trace->background = bg.background;
  }

  Localization loc;
  loc.ellipse = vessel_ellipse(bg, params.filter, params.harris, trace);
  loc.disc = disc_from(bg, params.filter, params.harris, trace);
  if (!(loc.disc.diameter > 0.0)) throw LocalizationError("optic disc", "zero diameter");
  loc.direction = loc.ellipse.center.x >= loc.disc.center.x ? 1 : -1;
  loc.search = build_search_space(loc.disc, loc.direction, fundus.bounds(), params.search_length_factor);
  if (loc.search.rect.empty()) throw LocalizationError("search space", "search space lies outside the image");

  const std::vector<Point2> points =
      min_avg_intensity_points(bg.gray, params.intensity_window, params.max_intensity_points);
  if (trace) trace->intensity_points = points;
  try {
    loc.macula = select_macula(points, loc.disc, loc.search);
  } catch (const DegenerateInput& e) {
    throw LocalizationError("macula", e.what());
  }
  try {
    loc.nroi = select_nroi(loc.search, loc.macula, loc.disc);
  } catch (const DegenerateInput& e) {
    throw LocalizationError("nroi", e.what());
  }
  return loc;
}

}  // namespace fundusmark
