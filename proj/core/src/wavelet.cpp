#include "fundusmark/wavelet.hpp"

namespace fundusmark {

SubbandSet dwt2_haar(const GrayImage& img) {
  SubbandSet bands;
  bands.original_rows = img.rows();
  bands.original_cols = img.cols();
  const std::size_t half_rows = (img.rows() + 1) / 2;
  const std::size_t half_cols = (img.cols() + 1) / 2;
  bands.ll = RealPlane(half_rows, half_cols);
  bands.lh = RealPlane(half_rows, half_cols);
  bands.hl = RealPlane(half_rows, half_cols);
  bands.hh = RealPlane(half_rows, half_cols);

  for (std::size_t j = 0; j < half_rows; ++j) {
    const auto y = static_cast<long>(2 * j);
    for (std::size_t i = 0; i < half_cols; ++i) {
      const auto x = static_cast<long>(2 * i);
      // clamped() supplies the replicated row/column for odd sizes.
      const double a = img.clamped(x, y);
      const double b = img.clamped(x + 1, y);
      const double c = img.clamped(x, y + 1);
      const double d = img.clamped(x + 1, y + 1);
      bands.ll.at(i, j) = (a + b + c + d) / 2.0;
      bands.hl.at(i, j) = (a - b + c - d) / 2.0;
      bands.lh.at(i, j) = (a + b - c - d) / 2.0;
      bands.hh.at(i, j) = (a - b - c + d) / 2.0;
    }
  }
  return bands;
}

GrayImage idwt2_haar(const SubbandSet& bands) {
  if (!bands.ll.same_shape(bands.lh) || !bands.ll.same_shape(bands.hl) ||
      !bands.ll.same_shape(bands.hh)) {
    throw DimensionError("subbands differ in size");
  }
  if ((bands.original_rows + 1) / 2 != bands.ll.rows() ||
      (bands.original_cols + 1) / 2 != bands.ll.cols()) {
    throw DimensionError("subband size does not match the recorded image size");
  }
  GrayImage out(bands.original_rows, bands.original_cols);
  for (std::size_t j = 0; j < bands.ll.rows(); ++j) {
    for (std::size_t i = 0; i < bands.ll.cols(); ++i) {
      const double ll = bands.ll.at(i, j);
      const double hl = bands.hl.at(i, j);
      const double lh = bands.lh.at(i, j);
      const double hh = bands.hh.at(i, j);
      const double block[2][2] = {{(ll + hl + lh + hh) / 2.0, (ll - hl + lh - hh) / 2.0},
                                  {(ll + hl - lh - hh) / 2.0, (ll - hl - lh + hh) / 2.0}};
      for (std::size_t dy = 0; dy < 2; ++dy) {
        const std::size_t y = 2 * j + dy;
        if (y >= out.rows()) continue;
        for (std::size_t dx = 0; dx < 2; ++dx) {
          const std::size_t x = 2 * i + dx;
          if (x < out.cols()) out.at(x, y) = block[dy][dx];
        }
      }
    }
  }
  return out;
}

}  // namespace fundusmark
