#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "deformtrack/anchors.hpp"
#include "deformtrack/assignment.hpp"
#include "deformtrack/error.hpp"
#include "deformtrack/raster.hpp"
#include "deformtrack/segmentation.hpp"
#include "deformtrack/skeleton.hpp"
#include "deformtrack/synth.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

using namespace deformtrack;

namespace {

// Tube around a polyline, facing the camera at depth z0.
PointCloud tube(const std::vector<Point3>& line, double radius, double spacing) {
  PointCloud c;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const Eigen::Vector3d d = line[i] - line[i - 1];
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(d.norm() / spacing));
    const Eigen::Vector3d t = d.normalized();
    const Eigen::Vector3d n1 = t.cross(Eigen::Vector3d::UnitZ()).normalized(), n2 = t.cross(n1);
    for (std::size_t s = 0; s < steps; ++s) {
      const Point3 center = line[i - 1] + d * (static_cast<double>(s) / static_cast<double>(steps));
      for (int k = 0; k < 24; ++k) {
        const double a = 2 * std::numbers::pi * k / 24.0;
        c.points.push_back(center + radius * (std::cos(a) * n1 + std::sin(a) * n2));
      }
    }
  }
  return c;
}

std::vector<Point3> arc(Point3 center, double r, double a0, double a1, int n) {
  std::vector<Point3> pts;
  for (int i = 0; i <= n; ++i) {
    const double a = a0 + (a1 - a0) * i / n;
    pts.push_back(center + Point3(r * std::cos(a), r * std::sin(a), 0));
  }
  return pts;
}

PointCloud square_sheet(double side, double angle, double spacing) {
  PointCloud c;
  const Eigen::Matrix3d R = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const auto n = static_cast<int>(std::round(side / spacing));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      c.points.push_back(R * Point3(i * spacing - side / 2, j * spacing - side / 2, 0) + Point3(0, 0, 0.8));
  return c;
}

std::vector<Point3> square_corners(double side, double angle) {
  const Eigen::Matrix3d R = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  std::vector<Point3> out;
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0}) out.push_back(R * Point3(sx * side / 2, sy * side / 2, 0) + Point3(0, 0, 0.8));
  return out;
}

// Largest distance between matched pairs under the optimal assignment.
double matched_max_distance(const std::vector<Point3>& a, const std::vector<Point3>& b) {
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (a[i] - b[j]).norm();
  const auto assign = solve_assignment(cost);
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, assign[i] < 0 ? INFINITY : cost(static_cast<Eigen::Index>(i), assign[i]));
  return worst;
}

std::vector<Point3> of_role(const AnchorDetection& d, AnchorRole role) {
  std::vector<Point3> out;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.roles[i] == role) out.push_back(d.positions[i]);
  return out;
}

}  // namespace

TEST(RasterizeMask, SinglePointAndDilation) {
  const CameraModel cam = synth_camera();
  PointCloud c;
  c.points = {Point3(0, 0, 1)};  // projects to (319.5, 239.5)
  const BinaryMask m0 = rasterize_mask(c, cam, 0);
  EXPECT_EQ(m0.count(), 1u);
  const BinaryMask m1 = rasterize_mask(c, cam, 1);
  EXPECT_EQ(m1.count(), 9u);
  const auto px = m0.pixels().front();
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) EXPECT_TRUE(m1.get(px.row + dr, px.col + dc));
}

TEST(RasterizeMask, DilationClipsAtBorder) {
  CameraModel cam = synth_camera();
  PointCloud c;
  c.points = {lift_pixel(0, 0, 1.0, cam)};
  EXPECT_EQ(rasterize_mask(c, cam, 1).count(), 4u);
}

TEST(RasterizeMask, AllOutOfViewFails) {
  PointCloud c;
  c.points = {Point3(0, 0, -1)};
  try {
    rasterize_mask(c, synth_camera(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DetectionFailed);
  }
}

TEST(RasterizeMask, SyntheticRopeIsConnected) {
  const SynthSequence seq =
      gen_sequence(scenes::config(SynthKind::Rope, SynthMotion::Swing, 0.0015, 2), synth_camera());
  const SegmentedFrame s = segment_frame(seq.frames[1], seq.reference, seq.camera, seq.exclusion[1], {}, 1);
  const BinaryMask m = rasterize_mask(s.cloud, seq.camera, 1);
  EXPECT_EQ(largest_component(m).count(), m.count());
}

TEST(Skeletonize, ThreePixelBar) {
  BinaryMask m(30, 9);
  for (int r = 3; r < 6; ++r)
    for (int c = 5; c < 25; ++c) m.set(r, c);
  const BinaryMask s = skeletonize(m);
  int minc = 100, maxc = -1;
  for (const auto& p : s.pixels()) {
    EXPECT_EQ(p.row, 4);
    minc = std::min(minc, p.col);
    maxc = std::max(maxc, p.col);
  }
  // Zhang-Suen's first sub-iteration peels south-east boundaries, so the east
  // end loses one pixel more than the west end.
  EXPECT_LE(std::abs(minc - 5), 1);
  EXPECT_LE(std::abs(maxc - 24), 2);
  EXPECT_EQ(static_cast<int>(s.count()), maxc - minc + 1);
}

TEST(Skeletonize, SinglePixelIsFixed) {
  BinaryMask m(5, 5);
  m.set(2, 2);
  EXPECT_EQ(skeletonize(m).data, m.data);
}

TEST(Skeletonize, PlusSignHasDegreeFourCenter) {
  BinaryMask m(15, 15);
  for (int i = 1; i < 14; ++i)
    for (int w = 6; w <= 8; ++w) {
      m.set(i, w);
      m.set(w, i);
    }
  const auto px = skeletonize(m).pixels();
  const SkeletonGraph g = build_mst(px);
  int deg4 = 0;
  for (std::size_t i = 0; i < px.size(); ++i)
    if (g.degree[i] == 4) {
      ++deg4;
      EXPECT_EQ(px[i], (PixelIndex{7, 7}));
    }
  EXPECT_EQ(deg4, 1);
}

TEST(Skeletonize, IdempotentOnRandomBlobs) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> pos(2, 37), rad(1, 5);
  for (int trial = 0; trial < 30; ++trial) {
    BinaryMask m(40, 40);
    for (int k = 0; k < 6; ++k) {
      const int cr = pos(rng), cc = pos(rng), rr = rad(rng);
      for (int r = cr - rr; r <= cr + rr; ++r)
        for (int c = cc - rr; c <= cc + rr; ++c)
          if (m.in_bounds(r, c)) m.set(r, c);
    }
    const BinaryMask s = skeletonize(m);
    EXPECT_EQ(skeletonize(s).data, s.data);
  }
}

TEST(BuildMst, CollinearPixels) {
  const std::vector<PixelIndex> px{{0, 0}, {0, 1}, {0, 2}};
  const SkeletonGraph g = build_mst(px);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.degree, (std::vector<int>{1, 2, 1}));
  for (const auto& e : g.edges) EXPECT_DOUBLE_EQ(e.weight, 1.0);
}

TEST(BuildMst, YShape) {
  std::vector<PixelIndex> px{{10, 10}};
  for (int i = 1; i <= 6; ++i) {
    px.push_back({10 - i, 10});      // up
    px.push_back({10 + i, 10 - i});  // down-left
    px.push_back({10 + i, 10 + i});  // down-right
  }
  const SkeletonGraph g = build_mst(px);
  EXPECT_EQ(std::count(g.degree.begin(), g.degree.end(), 1), 3);
  EXPECT_EQ(std::count(g.degree.begin(), g.degree.end(), 3), 1);
  EXPECT_EQ(g.degree[0], 3);
}

TEST(BuildMst, MatchesDensePrimOracle) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> coord(0, 40);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PixelIndex> px;
    while (px.size() < 50) {
      const PixelIndex p{coord(rng), coord(rng)};
      if (std::find(px.begin(), px.end(), p) == px.end()) px.push_back(p);
    }
    const SkeletonGraph g = build_mst(px);
    ASSERT_EQ(g.edges.size(), px.size() - 1);
    std::vector<double> w;
    for (const auto& e : g.edges) w.push_back(e.weight);
    std::sort(w.begin(), w.end());
    EXPECT_EQ(w, oracle::mst_weights(px));
    // Degree-1 count of any tree with >= 2 nodes.
    EXPECT_GE(std::count(g.degree.begin(), g.degree.end(), 1), 2);
  }
}

TEST(Fps, HandSimulatedLine) {
  std::vector<Point3> pts;
  for (int x = 0; x <= 10; ++x) pts.emplace_back(x, 0, 0);
  const std::vector<Point3> seeds{Point3(0, 0, 0)};
  EXPECT_EQ(fps(pts, 2, seeds), (std::vector<std::size_t>{10, 5}));
  EXPECT_TRUE(fps(pts, 0, seeds).empty());
}

TEST(Fps, TooManyIsInvalidInput) {
  std::vector<Point3> pts(3, Point3::Zero());
  try {
    fps(pts, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Fps, MatchesOracleAndRadiiAreMonotone) {
  std::mt19937_64 rng(43);
  const auto pts = scenes::random_points(rng, 200, 1.0);
  EXPECT_EQ(fps(pts, 10), oracle::fps(pts, 10, {}));
  const auto seeds = scenes::random_points(rng, 3, 1.0);
  const auto sel = fps(pts, 25, seeds);
  EXPECT_EQ(sel, oracle::fps(pts, 25, seeds));
  std::vector<Point3> chosen(seeds.begin(), seeds.end());
  double prev = INFINITY;
  for (auto i : sel) {
    double d = INFINITY;
    for (const auto& c : chosen) d = std::min(d, (pts[i] - c).norm());
    EXPECT_LE(d, prev);
    prev = d;
    chosen.push_back(pts[i]);
  }
}

TEST(Detect1DAnchors, StraightRope) {
  const PointCloud c = tube({Point3(-0.25, 0.02, 0.8), Point3(0.25, -0.03, 0.8)}, 0.005, 0.001);
  const AnchorDetection d = detect_1d_anchors(c, synth_camera());
  EXPECT_EQ(d.count(AnchorRole::Junction), 0u);
  const auto leaves = of_role(d, AnchorRole::Leaf);
  ASSERT_EQ(leaves.size(), 2u);
  EXPECT_LT(matched_max_distance(leaves, {Point3(-0.25, 0.02, 0.8), Point3(0.25, -0.03, 0.8)}), 0.010);
}

TEST(Detect1DAnchors, URopeHasTwoLeavesOnly) {
  std::vector<Point3> line{Point3(-0.1, -0.15, 0.8)};
  for (const auto& p : arc(Point3(0, 0, 0.8), 0.1, std::numbers::pi, 0, 40)) line.push_back(p);
  line.push_back(Point3(0.1, -0.15, 0.8));
  const AnchorDetection d = detect_1d_anchors(tube(line, 0.005, 0.001), synth_camera());
  EXPECT_EQ(d.count(AnchorRole::Leaf), 2u);
  EXPECT_EQ(d.count(AnchorRole::Junction), 0u);
}

TEST(Detect1DAnchors, SyntheticYBdlo) {
  const SynthSequence seq =
      gen_sequence(scenes::config(SynthKind::Bdlo, SynthMotion::Static, 0.0015, 2), synth_camera());
  const SegmentedFrame s = segment_frame(seq.frames[0], seq.reference, seq.camera, seq.exclusion[0], {}, 0);
  const AnchorDetection d = detect_1d_anchors(s.cloud, seq.camera);
  ASSERT_EQ(d.count(AnchorRole::Leaf), 3u);
  ASSERT_EQ(d.count(AnchorRole::Junction), 1u);
  std::vector<Point3> gt_leaves, gt_junction;
  for (std::size_t i = 0; i < seq.truth.anchor_roles.size(); ++i)
    (seq.truth.anchor_roles[i] == AnchorRole::Leaf ? gt_leaves : gt_junction).push_back(seq.truth.anchors[0][i]);
  EXPECT_LT(matched_max_distance(of_role(d, AnchorRole::Leaf), gt_leaves), 0.015);
  EXPECT_LT(matched_max_distance(of_role(d, AnchorRole::Junction), gt_junction), 0.015);
  // Anchors sit on the observed surface.
  const NNIndex idx(s.cloud.points);
  for (const auto& p : d.positions) EXPECT_LE(idx.nearest(p).distance, 0.010);
}

TEST(Detect1DAnchors, SinglePointFails) {
  PointCloud c;
  c.points = {Point3(0, 0, 0.8)};
  try {
    detect_1d_anchors(c, synth_camera());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DetectionFailed);
  }
}

TEST(Detect2DAnchors, SquareFourPicksCorners) {
  const AnchorDetection d = detect_2d_anchors(square_sheet(0.3, 0.0, 0.002), synth_camera(), 4);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d.count(AnchorRole::Contour), 4u);
  EXPECT_LT(matched_max_distance(d.positions, square_corners(0.3, 0.0)), 0.015);
}

TEST(Detect2DAnchors, SquareEightAddsEdgeMidpoints) {
  const AnchorDetection d = detect_2d_anchors(square_sheet(0.3, 0.0, 0.002), synth_camera(), 8);
  ASSERT_EQ(d.size(), 8u);
  std::vector<Point3> expect = square_corners(0.3, 0.0);
  for (const auto& m : {Point3(-0.15, 0, 0.8), Point3(0.15, 0, 0.8), Point3(0, -0.15, 0.8), Point3(0, 0.15, 0.8)})
    expect.push_back(m);
  EXPECT_LT(matched_max_distance(d.positions, expect), 0.015);
}

TEST(Detect2DAnchors, EquivariantUnderRotation) {
  const double angle = 0.4;
  const AnchorDetection a = detect_2d_anchors(square_sheet(0.3, 0.0, 0.002), synth_camera(), 4);
  const AnchorDetection b = detect_2d_anchors(square_sheet(0.3, angle, 0.002), synth_camera(), 4);
  const Eigen::Matrix3d R = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  std::vector<Point3> rotated;
  for (const auto& p : a.positions) rotated.push_back(R * (p - Point3(0, 0, 0.8)) + Point3(0, 0, 0.8));
  EXPECT_LT(matched_max_distance(b.positions, rotated), 0.015);
}

TEST(ExtractCorners, FoldedClothCornersNearTruth) {
  const SynthSequence seq =
      gen_sequence(scenes::config(SynthKind::Cloth, SynthMotion::Fold, 0.0015, 51), synth_camera());
  for (std::size_t t : {0u, 25u, 50u}) {
    const SegmentedFrame s = segment_frame(seq.frames[t], seq.reference, seq.camera, seq.exclusion[t], {}, 0);
    const AnchorDetection d = extract_corners(detect_2d_anchors(s.cloud, seq.camera, 8));
    ASSERT_EQ(d.size(), 4u);
    EXPECT_FALSE(d.contour.empty());
    EXPECT_LT(matched_max_distance(d.positions, seq.truth.anchors[t]), 0.015) << "frame " << t;
  }
}

TEST(ExtractCorners, FewerThanFourFails) {
  AnchorDetection d;
  d.positions = {Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0)};
  d.roles.assign(3, AnchorRole::Contour);
  EXPECT_THROW(extract_corners(d), Error);
}
