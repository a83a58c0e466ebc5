#include <gtest/gtest.h>

#include <cmath>

#include "support/oracles.hpp"

namespace fm = fundusmark;
using fm::testing::random_gray;

namespace {

double energy(const fm::RealPlane& p) {
  double e = 0.0;
  for (double v : p.values()) e += v * v;
  return e;
}

double max_abs_diff(const fm::GrayImage& a, const fm::GrayImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Haar, ConstantBlock) {
  const fm::SubbandSet s = fm::dwt2_haar(fm::GrayImage(2, 2, 1.0));
  EXPECT_EQ(s.ll.at(0, 0), 2.0);
  EXPECT_EQ(s.lh.at(0, 0), 0.0);
  EXPECT_EQ(s.hl.at(0, 0), 0.0);
  EXPECT_EQ(s.hh.at(0, 0), 0.0);
}

TEST(Haar, ClosedFormBlock) {
  const fm::SubbandSet s = fm::dwt2_haar(fm::GrayImage(2, 2, std::vector<double>{4, 2, 2, 0}));
  EXPECT_EQ(s.ll.at(0, 0), 4.0);
  EXPECT_EQ(s.hl.at(0, 0), 2.0);
  EXPECT_EQ(s.lh.at(0, 0), 2.0);
  EXPECT_EQ(s.hh.at(0, 0), 0.0);
}

TEST(Haar, EnergyIsConserved) {
  const fm::GrayImage img = random_gray(64, 64, 1);
  const fm::SubbandSet s = fm::dwt2_haar(img);
  const double e = energy(s.ll) + energy(s.lh) + energy(s.hl) + energy(s.hh);
  EXPECT_NEAR(e, energy(img), 1e-9 * energy(img));
}

TEST(Haar, EnergyOfPaddedInputForOddSizes) {
  const fm::GrayImage img = random_gray(9, 7, 2);
  fm::GrayImage padded(10, 8);
  for (std::size_t y = 0; y < 10; ++y) {
    for (std::size_t x = 0; x < 8; ++x) padded.at(x, y) = img.clamped(static_cast<long>(x), static_cast<long>(y));
  }
  const fm::SubbandSet s = fm::dwt2_haar(img);
  EXPECT_EQ(s.ll.rows(), 5u);
  EXPECT_EQ(s.ll.cols(), 4u);
  const double e = energy(s.ll) + energy(s.lh) + energy(s.hl) + energy(s.hh);
  EXPECT_NEAR(e, energy(padded), 1e-6 * energy(padded));
}

TEST(Haar, OddSizeRoundTrip) {
  const fm::GrayImage img = random_gray(33, 47, 3);
  EXPECT_LT(max_abs_diff(fm::idwt2_haar(fm::dwt2_haar(img)), img), 1e-9);
}

TEST(Haar, AllZeroBandsGiveZeroImage) {
  fm::SubbandSet s;
  s.ll = s.lh = s.hl = s.hh = fm::RealPlane(3, 4, 0.0);
  s.original_rows = 5;
  s.original_cols = 8;
  EXPECT_EQ(fm::idwt2_haar(s), fm::GrayImage(5, 8, 0.0));
}

TEST(Haar, InverseOfConstantBlock) {
  fm::SubbandSet s;
  s.ll = fm::RealPlane(1, 1, 2.0);
  s.lh = s.hl = s.hh = fm::RealPlane(1, 1, 0.0);
  s.original_rows = s.original_cols = 2;
  EXPECT_EQ(fm::idwt2_haar(s), fm::GrayImage(2, 2, 1.0));
}

TEST(Haar, InverseDoesNotClamp) {
  fm::SubbandSet s;
  s.ll = fm::RealPlane(1, 1, 600.0);
  s.lh = s.hl = s.hh = fm::RealPlane(1, 1, 0.0);
  s.original_rows = s.original_cols = 2;
  EXPECT_EQ(fm::idwt2_haar(s).at(1, 1), 300.0);
}

TEST(Haar, RejectsInconsistentBands) {
  fm::SubbandSet s = fm::dwt2_haar(fm::GrayImage(4, 4, 1.0));
  s.hh = fm::RealPlane(3, 2);
  EXPECT_THROW(fm::idwt2_haar(s), fm::DimensionError);
  s = fm::dwt2_haar(fm::GrayImage(4, 4, 1.0));
  s.original_rows = 7;
  EXPECT_THROW(fm::idwt2_haar(s), fm::DimensionError);
}

TEST(Haar, Linearity) {
  const fm::GrayImage x = random_gray(12, 15, 4), y = random_gray(12, 15, 5);
  fm::GrayImage mix(12, 15);
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 0.3 * x[i] - 1.7 * y[i];
  const fm::SubbandSet a = fm::dwt2_haar(x), b = fm::dwt2_haar(y), m = fm::dwt2_haar(mix);
  for (std::size_t i = 0; i < m.hh.size(); ++i) {
    EXPECT_NEAR(m.ll[i], 0.3 * a.ll[i] - 1.7 * b.ll[i], 1e-9);
    EXPECT_NEAR(m.lh[i], 0.3 * a.lh[i] - 1.7 * b.lh[i], 1e-9);
    EXPECT_NEAR(m.hl[i], 0.3 * a.hl[i] - 1.7 * b.hl[i], 1e-9);
    EXPECT_NEAR(m.hh[i], 0.3 * a.hh[i] - 1.7 * b.hh[i], 1e-9);
  }
}

TEST(Haar, ConstantImageHasNoDetail) {
  const fm::SubbandSet s = fm::dwt2_haar(fm::GrayImage(7, 9, 81.0));
  for (std::size_t i = 0; i < s.hh.size(); ++i) {
    EXPECT_EQ(s.lh[i], 0.0);
    EXPECT_EQ(s.hl[i], 0.0);
    EXPECT_EQ(s.hh[i], 0.0);
  }
}

TEST(Haar, SubbandOrientation) {
  // A horizontal stripe pattern (rows alternate) is a vertical change, which
  // lands in LH; alternating columns land in HL.
  fm::GrayImage rows(4, 4), cols(4, 4);
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 4; ++x) {
      rows.at(x, y) = y % 2 ? 0.0 : 10.0;
      cols.at(x, y) = x % 2 ? 0.0 : 10.0;
    }
  }
  const fm::SubbandSet r = fm::dwt2_haar(rows), c = fm::dwt2_haar(cols);
  EXPECT_EQ(r.lh.at(0, 0), 10.0);
  EXPECT_EQ(r.hl.at(0, 0), 0.0);
  EXPECT_EQ(c.hl.at(0, 0), 10.0);
  EXPECT_EQ(c.lh.at(0, 0), 0.0);
}
