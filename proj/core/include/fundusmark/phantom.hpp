#pragma once

#include <cstdint>

#include "fundusmark/raster.hpp"

namespace fundusmark {

// Synthetic fundus: bright optic disc, dark macula temporal to it, two
// vessel arcades with side branches, smooth shading and fine texture.
// Rendering is deterministic for a given spec on every platform.
struct PhantomSpec {
  int rows = 660;
  int cols = 1700;
  Point2 disc_center{300.0, 330.0};
  double disc_radius = 275.0;
  double macula_distance = 1.75;  // in disc diameters, along +x
  double macula_dy = 0.0;         // in disc diameters
  double background = 172.0;      // mean green level
  double texture = 2.0;           // amplitude of per-pixel texture
  bool mirrored = false;          // flip horizontally after rendering
  std::uint64_t seed = 1;
};

ColorImage render_phantom(const PhantomSpec& spec);

// Large phantoms (variants 0..2) carry a 256-bit capacity NROI; variant 3
// is a small, fast one.
PhantomSpec standard_phantom(int variant);

}  // namespace fundusmark
