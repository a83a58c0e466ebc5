#include "fundusmark/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fundusmark/image_io.hpp"

namespace fundusmark {

namespace {

struct Segment {
  Point2 a;
  Point2 b;
  double half_width;
};

double segment_distance(const Point2& p, const Segment& s) {
  const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (s.a.x + t * dx), p.y - (s.a.y + t * dy));
}

// Two arcades on an ellipse temporal to the disc, tapering away from it,
// with a few short side branches.
std::vector<Segment> vessel_tree(const PhantomSpec& spec) {
  const double d = 2.0 * spec.disc_radius;
  const Point2 c{spec.disc_center.x + 0.85 * d, spec.disc_center.y};
  const double ax = 0.95 * d, ay = 0.55 * d;
  auto on_arc = [&](double deg) {
    const double t = deg * std::numbers::pi / 180.0;
    return Point2{c.x + ax * std::cos(t), c.y - ay * std::sin(t)};
  };

  std::vector<Segment> out;
  auto arc = [&](double from, double to) {
    const int steps = static_cast<int>(std::abs(to - from) / 3.0);
    for (int i = 0; i < steps; ++i) {
      const double f0 = static_cast<double>(i) / steps, f1 = static_cast<double>(i + 1) / steps;
      out.push_back({on_arc(from + (to - from) * f0), on_arc(from + (to - from) * f1), 7.0 - 3.0 * f0});
    }
  };
  arc(165.0, 35.0);
  arc(195.0, 325.0);

  auto branch = [&](double deg, double angle_deg, double length) {
    const Point2 start = on_arc(deg);
    const double t = angle_deg * std::numbers::pi / 180.0;
    out.push_back({start, {start.x + length * d * std::cos(t), start.y - length * d * std::sin(t)}, 3.5});
  };
  branch(120.0, 100.0, 0.18);
  branch(75.0, 60.0, 0.15);
  branch(240.0, 260.0, 0.18);
  branch(285.0, 300.0, 0.15);
  return out;
}

}  // namespace

ColorImage render_phantom(const PhantomSpec& spec) {
  if (spec.rows < 16 || spec.cols < 16 || !(spec.disc_radius > 0.0)) {
    throw InvalidArgument("phantom is too small");
  }
  const auto rows = static_cast<std::size_t>(spec.rows);
  const auto cols = static_cast<std::size_t>(spec.cols);
  const double d = 2.0 * spec.disc_radius;
  const Point2 macula{spec.disc_center.x + spec.macula_distance * d, spec.disc_center.y + spec.macula_dy * d};
  const double macula_sigma = 0.09 * d;
  const std::vector<Segment> vessels = vessel_tree(spec);

  std::mt19937_64 rng(spec.seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  const double mid_x = (spec.cols - 1) / 2.0, mid_y = (spec.rows - 1) / 2.0;
  const double falloff = mid_x * mid_x + mid_y * mid_y;

  GrayImage green(rows, cols);
  for (std::size_t y = 0; y < rows; ++y) {
    for (std::size_t x = 0; x < cols; ++x) {
      const Point2 p{static_cast<double>(x), static_cast<double>(y)};
      const double r2 = (p.x - mid_x) * (p.x - mid_x) + (p.y - mid_y) * (p.y - mid_y);
      double g = spec.background - 8.0 * r2 / falloff + spec.texture * (2.0 * uniform() - 1.0);

      const double from_disc = distance(p, spec.disc_center);
      const double inside = std::clamp((spec.disc_radius - from_disc) / 2.0 + 0.5, 0.0, 1.0);
      g = g * (1.0 - inside) + (245.0 + spec.texture * (2.0 * uniform() - 1.0)) * inside;

      double vessel = 0.0;
      for (const Segment& s : vessels) {
        const double reach = s.half_width + 1.0;
        if (p.x < std::min(s.a.x, s.b.x) - reach || p.x > std::max(s.a.x, s.b.x) + reach ||
            p.y < std::min(s.a.y, s.b.y) - reach || p.y > std::max(s.a.y, s.b.y) + reach) {
          continue;
        }
        const double dist = segment_distance(p, s);
        if (dist > s.half_width + 1.0) continue;
        vessel = std::max(vessel, std::clamp((s.half_width + 1.0 - dist) / 2.0, 0.0, 1.0));
      }
      g -= 90.0 * vessel;

      const double m2 = (p.x - macula.x) * (p.x - macula.x) + (p.y - macula.y) * (p.y - macula.y);
      g -= 105.0 * std::exp(-m2 / (2.0 * macula_sigma * macula_sigma));

      green.at(x, y) = clamp_intensity(g);
    }
  }
  if (spec.mirrored) {
    for (std::size_t y = 0; y < rows; ++y) std::reverse(green.row(y), green.row(y) + cols);
  }

  GrayImage red(rows, cols), blue(rows, cols);
  for (std::size_t i = 0; i < green.size(); ++i) {
    red[i] = clamp_intensity(0.6 * green[i] + 95.0);
    blue[i] = clamp_intensity(0.35 * green[i]);
  }
  return quantize(ColorImage(red, green, blue));
}

PhantomSpec standard_phantom(int variant) {
  PhantomSpec spec;
  switch (variant) {
    case 0:
      break;
    case 1:
      spec.mirrored = true;
      spec.macula_dy = 0.05;
      spec.background = 168.0;
      spec.seed = 2;
      break;
    case 2:
      spec.rows = 640;
      spec.cols = 1660;
      spec.disc_center = {290.0, 320.0};
      spec.disc_radius = 265.0;
      spec.macula_distance = 1.7;
      spec.background = 176.0;
      spec.seed = 3;
      break;
    case 3:
      spec.rows = 280;
      spec.cols = 680;
      spec.disc_center = {120.0, 140.0};
      spec.disc_radius = 105.0;
      spec.seed = 4;
      break;
    default:
      throw InvalidArgument("unknown phantom variant");
  }
  return spec;
}

}  // namespace fundusmark
