#include <random>

#include <gtest/gtest.h>

#include "deformtrack/camera.hpp"
#include "deformtrack/error.hpp"
#include "deformtrack/nn_index.hpp"
#include "deformtrack/synth.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

using namespace deformtrack;

namespace {

CameraModel unit_camera(int w, int h, double cx, double cy) {
  CameraModel c;
  c.fx = c.fy = 1.0;
  c.cx = cx;
  c.cy = cy;
  c.width = w;
  c.height = h;
  return c;
}

}  // namespace

TEST(LiftDepth, SinglePixel) {
  DepthFrame f(1, 1, 1.0);
  const PointCloud c = lift_depth(f, unit_camera(1, 1, 0.5, 0.5));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c.points[0].x(), -0.5);
  EXPECT_DOUBLE_EQ(c.points[0].y(), -0.5);
  EXPECT_DOUBLE_EQ(c.points[0].z(), 1.0);
  EXPECT_EQ(c.pixels[0], (PixelIndex{0, 0}));
}

TEST(LiftDepth, AllInvalidGivesEmptyCloud) {
  DepthFrame f(4, 3, 0.0);
  f.at(1, 1) = -2.0;
  f.at(2, 3) = std::numeric_limits<double>::quiet_NaN();
  f.at(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(lift_depth(f, unit_camera(4, 3, 2.0, 1.5)).empty());
}

TEST(LiftDepth, TwoByTwoMatchesHandBackProjection) {
  CameraModel cam;
  cam.fx = 500;
  cam.fy = 400;
  cam.cx = 1.0;
  cam.cy = 0.5;
  cam.width = 2;
  cam.height = 2;
  cam.rotation = Eigen::AngleAxisd(0.3, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  cam.translation = {0.1, -0.2, 0.3};
  DepthFrame f(2, 2);
  f.depth = {1.0, 2.0, 0.5, 4.0};
  const PointCloud c = lift_depth(f, cam);
  ASSERT_EQ(c.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    const int r = static_cast<int>(i) / 2, col = static_cast<int>(i) % 2;
    const double z = f.depth[i];
    const Eigen::Vector3d pc((col - 1.0) * z / 500.0, (r - 0.5) * z / 400.0, z);
    const Eigen::Vector3d expect = cam.rotation * pc + cam.translation;
    EXPECT_LT((c.points[i] - expect).norm(), 1e-9);
  }
}

TEST(LiftDepth, DimensionMismatchIsConfigurationError) {
  DepthFrame f(3, 3, 1.0);
  try {
    lift_depth(f, unit_camera(4, 3, 2, 1.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Configuration);
  }
}

TEST(LiftDepth, CountEqualsValidPixelsAndProjectRoundTrips) {
  const CameraModel cam = synth_camera();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> z(0.3, 3.0), u(0, 1);
  DepthFrame f(cam.width, cam.height);
  std::size_t valid = 0;
  for (auto& d : f.depth) {
    d = u(rng) < 0.3 ? 0.0 : z(rng);
    valid += d > 0 ? 1 : 0;
  }
  const PointCloud c = lift_depth(f, cam);
  ASSERT_EQ(c.size(), valid);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto ip = project_point(c.points[i], cam);
    ASSERT_TRUE(ip.has_value());
    EXPECT_LE(std::abs(ip->u - c.pixels[i].col), 0.5);
    EXPECT_LE(std::abs(ip->v - c.pixels[i].row), 0.5);
  }
}

TEST(ProjectPoint, OutOfView) {
  const CameraModel cam = synth_camera();
  EXPECT_FALSE(project_point({0, 0, -1}, cam).has_value());
  EXPECT_FALSE(project_point({0, 0, 0}, cam).has_value());
  const double z = 1.0;
  const Point3 right((cam.width + 10 - cam.cx) * z / cam.fx, 0, z);
  EXPECT_FALSE(project_point(right, cam).has_value());
}

TEST(CameraModel, Validation) {
  CameraModel c = synth_camera();
  EXPECT_NO_THROW(c.validate());
  c.rotation(0, 1) = 0.1;
  EXPECT_THROW(c.validate(), Error);
  c = synth_camera();
  c.cx = -1;
  EXPECT_THROW(c.validate(), Error);
}

TEST(NNIndex, Examples) {
  const NNIndex idx({Point3(0, 0, 0), Point3(1, 0, 0)});
  auto r = nearest(idx, {0.4, 0, 0});
  EXPECT_EQ(r.index, 0u);
  EXPECT_DOUBLE_EQ(r.distance, 0.4);
  r = nearest(idx, {1, 0, 0});
  EXPECT_EQ(r.index, 1u);
  EXPECT_EQ(r.distance, 0.0);
}

TEST(NNIndex, EmptyCloudIsInvalidInput) {
  try {
    build_index(PointCloud{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(NNIndex, TiesGoToLowestIndex) {
  const NNIndex idx({Point3(1, 0, 0), Point3(-1, 0, 0), Point3(0, 1, 0), Point3(1, 0, 0)});
  EXPECT_EQ(idx.nearest({0, 0, 0}).index, 0u);
  EXPECT_EQ(idx.nearest({1, 0, 0}).index, 0u);
}

TEST(NNIndex, MatchesLinearScan) {
  std::mt19937_64 rng(11);
  const auto pts = scenes::random_points(rng, 1000, 1.0);
  const NNIndex idx(pts);
  for (const auto& q : scenes::random_points(rng, 100, 1.2)) {
    const auto a = idx.nearest(q);
    const auto b = oracle::nearest(pts, q);
    EXPECT_EQ(a.index, b.index);
    EXPECT_EQ(a.distance, b.distance);
  }
}

TEST(NNIndex, PropertyRandomCloudsUpTo10k) {
  std::mt19937_64 rng(12);
  for (std::size_t n : {1u, 2u, 7u, 64u, 500u, 10000u}) {
    // Quantized coordinates force many exact ties.
    auto pts = scenes::random_points(rng, n, 1.0);
    for (auto& p : pts) p = (p * 20).array().round() / 20;
    const NNIndex idx(pts);
    for (const auto& q : scenes::random_points(rng, 50, 1.0)) {
      const auto a = idx.nearest(q);
      const auto b = oracle::nearest(pts, q);
      ASSERT_EQ(a.index, b.index) << "n=" << n;
      EXPECT_LE(std::abs(a.distance - (pts[a.index] - q).norm()), 1e-9 * std::max(1.0, a.distance));
    }
  }
}

TEST(NNIndex, KnnAndRadiusMatchScan) {
  std::mt19937_64 rng(13);
  const auto pts = scenes::random_points(rng, 300, 1.0);
  const NNIndex idx(pts);
  for (const auto& q : scenes::random_points(rng, 20, 1.0)) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < pts.size(); ++i) all.emplace_back((pts[i] - q).norm(), i);
    std::sort(all.begin(), all.end());
    const auto k = idx.knn(q, 7);
    ASSERT_EQ(k.size(), 7u);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(k[i].index, all[i].second);
    std::vector<std::size_t> in;
    for (const auto& [d, i] : all)
      if (d <= 0.4) in.push_back(i);
    std::sort(in.begin(), in.end());
    EXPECT_EQ(idx.radius_search(q, 0.4), in);
    EXPECT_EQ(idx.count_within(q, 0.4, 1000), in.size());
  }
}
