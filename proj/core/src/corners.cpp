#include "fundusmark/corners.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fundusmark {

int HarrisParams::effective_radius() const {
  return window_radius >= 0 ? window_radius : static_cast<int>(std::ceil(3.0 * sigma));
}

void HarrisParams::validate() const {
  if (!(sigma > 0.0)) throw InvalidArgument("harris sigma must be positive");
  if (nms_radius < 1) throw InvalidArgument("harris nms radius must be at least 1");
  if (!(response_floor > 0.0 && response_floor < 1.0)) {
    throw InvalidArgument("harris response floor must lie in (0, 1)");
  }
}

Gradients gradients(const GrayImage& img) {
  Gradients g{RealPlane(img.rows(), img.cols()), RealPlane(img.rows(), img.cols())};
  const long rows = static_cast<long>(img.rows());
  const long cols = static_cast<long>(img.cols());
  for (long y = 0; y < rows; ++y) {
    for (long x = 0; x < cols; ++x) {
      const auto ux = static_cast<std::size_t>(x);
      const auto uy = static_cast<std::size_t>(y);
      g.ix.at(ux, uy) = img.clamped(x + 1, y) - img.clamped(x - 1, y);
      g.iy.at(ux, uy) = img.clamped(x, y + 1) - img.clamped(x, y - 1);
    }
  }
  return g;
}

namespace {

std::vector<double> gaussian_taps(double sigma, int radius) {
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : taps) v /= total;
  return taps;
}

// Separable convolution with replicate borders.
RealPlane smooth(const RealPlane& src, const std::vector<double>& taps) {
  const long radius = static_cast<long>(taps.size() / 2);
  const long rows = static_cast<long>(src.rows());
  const long cols = static_cast<long>(src.cols());
  RealPlane tmp(src.rows(), src.cols());
  for (long y = 0; y < rows; ++y) {
    for (long x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (long k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * src.clamped(x + k, y);
      }
      tmp.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  }
  RealPlane out(src.rows(), src.cols());
  for (long y = 0; y < rows; ++y) {
    for (long x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (long k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * tmp.clamped(x, y + k);
      }
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  }
  return out;
}

}  // namespace

StructureTensor structure_tensor(const RealPlane& ix, const RealPlane& iy, const HarrisParams& params) {
  if (!ix.same_shape(iy)) throw DimensionError("gradient planes differ in size");
  params.validate();
  RealPlane xx(ix.rows(), ix.cols()), xy(ix.rows(), ix.cols()), yy(ix.rows(), ix.cols());
  for (std::size_t i = 0; i < ix.size(); ++i) {
    xx[i] = ix[i] * ix[i];
    xy[i] = ix[i] * iy[i];
    yy[i] = iy[i] * iy[i];
  }
  const auto taps = gaussian_taps(params.sigma, params.effective_radius());
  return {smooth(xx, taps), smooth(xy, taps), smooth(yy, taps)};
}

RealPlane corner_response(const StructureTensor& t, double k) {
  if (!t.a.same_shape(t.b) || !t.a.same_shape(t.c)) {
    throw DimensionError("structure tensor planes differ in size");
  }
  RealPlane h(t.a.rows(), t.a.cols());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double det = t.a[i] * t.c[i] - t.b[i] * t.b[i];
    const double trace = t.a[i] + t.c[i];
    h[i] = det - k * trace * trace;
  }
  return h;
}

std::vector<CornerPoint> select_corners(const RealPlane& response, const HarrisParams& params) {
  params.validate();
  std::vector<CornerPoint> corners;
  if (response.empty()) return corners;
  const double peak = *std::max_element(response.values().begin(), response.values().end());
  if (!(peak > 0.0)) return corners;
  const double floor = params.response_floor * peak;
  const long r = params.nms_radius;
  const long rows = static_cast<long>(response.rows());
  const long cols = static_cast<long>(response.cols());

  for (long y = 0; y < rows; ++y) {
    for (long x = 0; x < cols; ++x) {
      const double v = response.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
      if (v < floor) continue;
      bool strict_max = true;
      for (long dy = -r; dy <= r && strict_max; ++dy) {
        const long ny = y + dy;
        if (ny < 0 || ny >= rows) continue;
        for (long dx = -r; dx <= r; ++dx) {
          const long nx = x + dx;
          if ((dx == 0 && dy == 0) || nx < 0 || nx >= cols) continue;
          if (response.at(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny)) >= v) {
            strict_max = false;
            break;
          }
        }
      }
      if (strict_max) corners.push_back({{static_cast<int>(x), static_cast<int>(y)}, v});
    }
  }
  std::sort(corners.begin(), corners.end(), [](const CornerPoint& a, const CornerPoint& b) {
    if (a.response != b.response) return a.response > b.response;
    return row_major_less(a.location, b.location);
  });
  return corners;
}

std::vector<CornerPoint> detect_corners(const GrayImage& img, const HarrisParams& params) {
  params.validate();
  const auto side = static_cast<std::size_t>(2 * params.nms_radius + 1);
  if (img.rows() < side || img.cols() < side) {
    throw InvalidArgument("image is smaller than the corner suppression window");
  }
  const Gradients g = gradients(img);
  return select_corners(corner_response(structure_tensor(g.ix, g.iy, params), params.k), params);
}

HarrisDiameter max_harris_diameter(std::span<const CornerPoint> points) {
  if (points.size() < 2) throw DegenerateInput("at least two corners are needed for a diameter");
  HarrisDiameter best;
  long long best_sq = -1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      PixelPoint p = points[i].location;
      PixelPoint q = points[j].location;
      if (row_major_less(q, p)) std::swap(p, q);
      const long long dx = q.x - p.x;
      const long long dy = q.y - p.y;
      const long long sq = dx * dx + dy * dy;
      const bool better =
          sq > best_sq ||
          (sq == best_sq && (row_major_less(p, best.first) ||
                             (p == best.first && row_major_less(q, best.second))));
      if (better) {
        best_sq = sq;
        best.first = p;
        best.second = q;
      }
    }
  }
  best.diameter = std::sqrt(static_cast<double>(best_sq));
  return best;
}

}  // namespace fundusmark
