#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "support/oracles.hpp"

namespace fm = fundusmark;

namespace {

std::vector<fm::Point2> ellipse_points(fm::Point2 c, double a, double b, double tilt, int n) {
  std::vector<fm::Point2> pts;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n + 0.1;
    const double x = a * std::cos(t), y = b * std::sin(t);
    pts.push_back({c.x + x * std::cos(tilt) - y * std::sin(tilt), c.y + x * std::sin(tilt) + y * std::cos(tilt)});
  }
  return pts;
}

fm::OpticDisc disc_at(fm::Point2 center, double diameter) {
  fm::OpticDisc d;
  d.center = center;
  d.diameter = diameter;
  d.radius = diameter / 2.0;
  return d;
}

const fm::Rect kHuge{{-5000, -5000}, 10000, 10000};

}  // namespace

TEST(FitEllipse, CircleCentre) {
  const fm::EllipseFit fit = fm::fit_ellipse(ellipse_points({5, 5}, 10, 10, 0.0, 8));
  EXPECT_NEAR(fit.center.x, 5.0, 1e-6);
  EXPECT_NEAR(fit.center.y, 5.0, 1e-6);
  EXPECT_LT(fit.residual, 1e-12);
}

TEST(FitEllipse, TranslatedAxisAlignedEllipse) {
  // x^2/16 + y^2/4 = 1 moved to (3, -2).
  const fm::EllipseFit fit = fm::fit_ellipse(ellipse_points({3, -2}, 4, 2, 0.0, 9));
  EXPECT_NEAR(fit.center.x, 3.0, 1e-6);
  EXPECT_NEAR(fit.center.y, -2.0, 1e-6);
  double norm = 0.0;
  for (double c : fit.conic) norm += c * c;
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_LT(fit.conic[1] * fit.conic[1] - 4.0 * fit.conic[0] * fit.conic[2], 0.0);
}

TEST(FitEllipse, FourPointsAreUnderdetermined) {
  const auto pts = ellipse_points({0, 0}, 3, 2, 0.0, 4);
  EXPECT_THROW(fm::fit_ellipse(pts), fm::DegenerateInput);
}

TEST(FitEllipse, FivePointsDetermineTheConic) {
  const fm::EllipseFit fit = fm::fit_ellipse(ellipse_points({-7, 12}, 6, 3, 0.4, 5));
  EXPECT_NEAR(fit.center.x, -7.0, 1e-6);
  EXPECT_NEAR(fit.center.y, 12.0, 1e-6);
}

TEST(FitEllipse, HyperbolaIsRejected) {
  std::vector<fm::Point2> pts;
  for (double t : {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5}) {
    pts.push_back({std::cosh(t), std::sinh(t)});
    pts.push_back({-std::cosh(t), std::sinh(t)});
  }
  EXPECT_THROW(fm::fit_ellipse(pts), fm::DegenerateInput);
}

TEST(FitEllipse, CollinearPointsAreDegenerate) {
  std::vector<fm::Point2> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({static_cast<double>(i), 2.0 * i});
  EXPECT_THROW(fm::fit_ellipse(pts), fm::DegenerateInput);
}

TEST(FitEllipse, TranslationAndScaleCovariance) {
  const auto pts = ellipse_points({20, 30}, 15, 6, 0.7, 12);
  const fm::Point2 c = fm::fit_ellipse(pts).center;
  std::vector<fm::Point2> moved, scaled;
  for (const auto& p : pts) {
    moved.push_back({p.x - 13.0, p.y + 4.5});
    scaled.push_back({p.x * 2.5, p.y * 2.5});
  }
  const fm::Point2 cm = fm::fit_ellipse(moved).center, cs = fm::fit_ellipse(scaled).center;
  EXPECT_NEAR(cm.x, c.x - 13.0, 1e-6);
  EXPECT_NEAR(cm.y, c.y + 4.5, 1e-6);
  EXPECT_NEAR(cs.x, c.x * 2.5, 1e-6);
  EXPECT_NEAR(cs.y, c.y * 2.5, 1e-6);
}

TEST(FitEllipse, NoisyPointsStillFit) {
  auto pts = ellipse_points({50, 40}, 30, 12, 0.2, 40);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (auto& p : pts) {
    p.x += noise(rng);
    p.y += noise(rng);
  }
  const fm::EllipseFit fit = fm::fit_ellipse(pts);
  EXPECT_NEAR(fit.center.x, 50.0, 0.5);
  EXPECT_NEAR(fit.center.y, 40.0, 0.5);
}

TEST(DetectOpticDisc, SyntheticBrightDisc) {
  fm::ColorImage img(200, 200, 30.0);
  for (std::size_t y = 0; y < 200; ++y) {
    for (std::size_t x = 0; x < 200; ++x) {
      if (std::hypot(x - 100.0, y - 100.0) <= 40.0) img.green().at(x, y) = 220.0;
    }
  }
  const fm::OpticDisc disc = fm::detect_optic_disc(img, {}, {});
  EXPECT_GE(disc.diameter, 72.0);
  EXPECT_LE(disc.diameter, 88.0);
  EXPECT_LE(fm::distance(disc.center, {100, 100}), 5.0);
  EXPECT_EQ(disc.radius, disc.diameter / 2.0);
  EXPECT_DOUBLE_EQ(disc.diameter, fm::distance(fm::to_point(disc.rim_first), fm::to_point(disc.rim_second)));
}

TEST(DetectOpticDisc, FlatImageHasNoCorners) {
  try {
    fm::detect_optic_disc(fm::ColorImage(60, 60, 90.0), {}, {});
    FAIL() << "expected LocalizationError";
  } catch (const fm::LocalizationError& e) {
    EXPECT_EQ(e.stage(), "optic disc");
    EXPECT_NE(std::string(e.what()).find("no corners detected"), std::string::npos);
  }
}

TEST(LocateMaculaDirection, BlankImageHasNoCorners) {
  try {
    fm::locate_macula_direction(fm::ColorImage(80, 80, 120.0), {}, {});
    FAIL() << "expected LocalizationError";
  } catch (const fm::LocalizationError& e) {
    EXPECT_EQ(e.stage(), "vessel tree");
    EXPECT_NE(std::string(e.what()).find("no corners detected"), std::string::npos);
  }
}

TEST(LocateMaculaDirection, EllipseCentreSitsOnMaculaSideAndFlipsWithMirror) {
  fm::PhantomSpec spec = fm::standard_phantom(3);
  const fm::Point2 right = fm::locate_macula_direction(fm::render_phantom(spec), {}, {});
  EXPECT_GT(right.x, spec.disc_center.x + spec.disc_radius);

  spec.mirrored = true;
  const fm::Point2 left = fm::locate_macula_direction(fm::render_phantom(spec), {}, {});
  const double mirrored_disc_x = spec.cols - 1 - spec.disc_center.x;
  EXPECT_LT(left.x, mirrored_disc_x - spec.disc_radius);
}

TEST(MinAvgIntensity, ConstantImageHasNoMinima) {
  EXPECT_TRUE(fm::min_avg_intensity_points(fm::GrayImage(30, 30, 100.0), 11, 32).empty());
}

TEST(MinAvgIntensity, SingleBlobGivesItsCentre) {
  fm::GrayImage img(61, 71);
  for (std::size_t y = 0; y < 61; ++y) {
    for (std::size_t x = 0; x < 71; ++x) {
      const double r2 = (x - 40.0) * (x - 40.0) + (y - 25.0) * (y - 25.0);
      img.at(x, y) = 200.0 - 120.0 * std::exp(-r2 / (2.0 * 36.0));
    }
  }
  const auto pts = fm::min_avg_intensity_points(img, 11, 32);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_LE(std::abs(pts[0].x - 40.0), 1.0);
  EXPECT_LE(std::abs(pts[0].y - 25.0), 1.0);
}

TEST(MinAvgIntensity, SortedAscendingAndCapped) {
  const fm::GrayImage img = fm::testing::random_gray(60, 60, 4);
  const auto all = fm::min_avg_intensity_points(img, 3, 1000);
  const auto capped = fm::min_avg_intensity_points(img, 3, 5);
  ASSERT_GT(all.size(), 5u);
  ASSERT_EQ(capped.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(capped[i], all[i]);
  EXPECT_THROW(fm::min_avg_intensity_points(img, 4, 5), fm::InvalidArgument);
}

TEST(SearchSpace, ForwardGeometry) {
  const fm::SearchSpace s = fm::build_search_space(disc_at({0, 0}, 100), 1, kHuge, 1.0);
  EXPECT_EQ(s.rect, (fm::Rect{{150, -25}, 100, 50}));
  EXPECT_FALSE(s.clipped);
}

TEST(SearchSpace, BackwardIsPixelMirror) {
  const fm::SearchSpace s = fm::build_search_space(disc_at({0, 0}, 100), -1, kHuge, 1.0);
  // x in (-250, -150]
  EXPECT_EQ(s.rect.left(), -249);
  EXPECT_EQ(s.rect.right() - 1, -150);
  EXPECT_EQ(s.rect.top(), -25);
  EXPECT_EQ(s.rect.height, 50);

  for (double d : {37.0, 100.0, 211.4, 551.3}) {
    const fm::OpticDisc disc = disc_at({300, 120}, d);
    const fm::Rect f = fm::build_search_space(disc, 1, kHuge, 1.3).rect;
    const fm::Rect b = fm::build_search_space(disc, -1, kHuge, 1.3).rect;
    EXPECT_EQ(2 * 300 - (f.right() - 1), b.left());
    EXPECT_EQ(2 * 300 - f.left(), b.right() - 1);
    EXPECT_EQ(f.top(), b.top());
  }
}

TEST(SearchSpace, ClipsToImageAndFlags) {
  const fm::SearchSpace s = fm::build_search_space(disc_at({50, 50}, 100), 1, {{0, 0}, 220, 100}, 1.0);
  EXPECT_TRUE(s.clipped);
  EXPECT_EQ(s.rect, (fm::Rect{{200, 25}, 20, 50}));
}

TEST(SearchSpace, LengthFactorAndValidation) {
  const fm::SearchSpace s = fm::build_search_space(disc_at({0, 0}, 100), 1, kHuge, 1.5);
  EXPECT_EQ(s.rect.width, 150);
  EXPECT_THROW(fm::build_search_space(disc_at({0, 0}, 0), 1, kHuge, 1.0), fm::InvalidArgument);
  EXPECT_THROW(fm::build_search_space(disc_at({0, 0}, 10), 0, kHuge, 1.0), fm::InvalidArgument);
}

TEST(SelectMacula, SeventeenCandidateStatistics) {
  // Seventeen candidate distances, laid out
  // temporally (to the left) of the disc centre.
  const std::vector<double> distances{670.6642, 671.2544, 667.8791, 667.1585, 664.9906, 663.7985,
                                      659.5836, 653.5323, 654.4635, 652.5094, 640.7968, 637.6225,
                                      630.6905, 628.6911, 624.6875, 622.5018, 618.5455};
  const fm::Point2 o{854.5, 169.5};
  const fm::OpticDisc disc = disc_at(o, 400.0);
  const fm::SearchSpace space = fm::build_search_space(disc, -1, kHuge, 1.0);
  std::vector<fm::Point2> candidates;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double angle = (static_cast<double>(i) - 8.0) * 0.01;
    candidates.push_back({o.x - distances[i] * std::cos(angle), o.y + distances[i] * std::sin(angle)});
  }
  candidates.push_back({o.x + 400.0, o.y});  // nasal side, outside the space
  candidates.push_back({o.x - 100.0, o.y});  // too close to the disc

  const fm::MaculaEstimate est = fm::select_macula(candidates, disc, space);
  EXPECT_EQ(est.candidates.size(), candidates.size());
  EXPECT_EQ(est.in_space, 17u);
  EXPECT_NEAR(est.min_distance, 618.5455, 1e-9);
  EXPECT_NEAR(est.mean_distance, 648.7865, 5e-5);
  EXPECT_NEAR(est.max_distance, 671.2544, 1e-9);
  EXPECT_NEAR(est.selected.distance, 618.5455, 1e-9);
  EXPECT_TRUE(space.rect.contains(est.selected.point));
}

TEST(SelectMacula, SingleInSpaceCandidateIsSelected) {
  const fm::OpticDisc disc = disc_at({0, 0}, 100);
  const fm::SearchSpace space = fm::build_search_space(disc, 1, kHuge, 1.0);
  const std::vector<fm::Point2> pts{{-300, 0}, {200, 3}, {0, 400}};
  const fm::MaculaEstimate est = fm::select_macula(pts, disc, space);
  EXPECT_EQ(est.selected.point, (fm::Point2{200, 3}));
  EXPECT_EQ(est.in_space, 1u);
}

TEST(SelectMacula, NoCandidateInsideIsAnError) {
  const fm::OpticDisc disc = disc_at({0, 0}, 100);
  const fm::SearchSpace space = fm::build_search_space(disc, 1, kHuge, 1.0);
  const std::vector<fm::Point2> pts{{-300, 0}, {0, 400}};
  EXPECT_THROW(fm::select_macula(pts, disc, space), fm::DegenerateInput);
}

TEST(SelectNroi, MaculaNearDiscPicksFarEnd) {
  const fm::OpticDisc disc = disc_at({0, 0}, 100);
  const fm::SearchSpace space = fm::build_search_space(disc, 1, kHuge, 1.0);
  const std::vector<fm::Point2> pts{{160, 0}};
  const fm::NroiRegion nroi = fm::select_nroi(space, fm::select_macula(pts, disc, space), disc);
  EXPECT_EQ(nroi.rect, (fm::Rect{{200, -25}, 50, 50}));
  EXPECT_FALSE(nroi.rect.contains(pts[0]));
}

TEST(SelectNroi, MaculaAtFarEndPicksNearEnd) {
  const fm::OpticDisc disc = disc_at({0, 0}, 100);
  const fm::SearchSpace space = fm::build_search_space(disc, 1, kHuge, 1.0);
  const std::vector<fm::Point2> pts{{240, 5}};
  const fm::NroiRegion nroi = fm::select_nroi(space, fm::select_macula(pts, disc, space), disc);
  EXPECT_EQ(nroi.rect, (fm::Rect{{150, -25}, 50, 50}));
}

TEST(SelectNroi, BackwardSpaceMirrorsEnds) {
  const fm::OpticDisc disc = disc_at({0, 0}, 100);
  const fm::SearchSpace space = fm::build_search_space(disc, -1, kHuge, 1.0);
  const std::vector<fm::Point2> pts{{-160, 0}};
  const fm::NroiRegion nroi = fm::select_nroi(space, fm::select_macula(pts, disc, space), disc);
  EXPECT_EQ(nroi.rect, (fm::Rect{{-249, -25}, 50, 50}));
}

TEST(SelectNroi, SpaceOfExactlyHalfDiameterIsTheNroi) {
  const fm::OpticDisc disc = disc_at({0, 0}, 100);
  const fm::SearchSpace space = fm::build_search_space(disc, 1, kHuge, 0.5);
  const std::vector<fm::Point2> pts{{170, 0}};
  EXPECT_EQ(fm::select_nroi(space, fm::select_macula(pts, disc, space), disc).rect, space.rect);
}

TEST(SelectNroi, NarrowSpaceIsAnError) {
  const fm::OpticDisc disc = disc_at({0, 0}, 100);
  const fm::SearchSpace space = fm::build_search_space(disc, 1, kHuge, 0.4);
  const std::vector<fm::Point2> pts{{170, 0}};
  EXPECT_THROW(fm::select_nroi(space, fm::select_macula(pts, disc, space), disc), fm::DegenerateInput);
}

TEST(LocalizationParams, Validation) {
  fm::LocalizationParams p;
  EXPECT_NO_THROW(p.validate());
  p.search_length_factor = 0.0;
  EXPECT_THROW(p.validate(), fm::InvalidArgument);
  p = {};
  p.intensity_window = 10;
  EXPECT_THROW(p.validate(), fm::InvalidArgument);
}
