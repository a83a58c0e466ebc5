#pragma once

#include <cstddef>

#include "fundusmark/raster.hpp"

namespace fundusmark {

// Level-1 Haar subbands. Each 2x2 block [[a, b], [c, d]] maps to
//   LL = (a+b+c+d)/2   HL = (a-b+c-d)/2   LH = (a+b-c-d)/2   HH = (a-b-c+d)/2
// which is orthonormal, so subband energy equals input energy.
struct SubbandSet {
  RealPlane ll;
  RealPlane lh;
  RealPlane hl;
  RealPlane hh;
  std::size_t original_rows = 0;
  std::size_t original_cols = 0;
};

// Odd sizes are padded by replicating the last row/column.
SubbandSet dwt2_haar(const GrayImage& img);

// Exact inverse; padding is dropped and values are not clamped.
GrayImage idwt2_haar(const SubbandSet& bands);

}  // namespace fundusmark
