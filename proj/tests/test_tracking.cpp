#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "deformtrack/error.hpp"
#include "deformtrack/init.hpp"
#include "deformtrack/metrics.hpp"
#include "deformtrack/synth.hpp"
#include "deformtrack/tracking.hpp"
#include "support/scenes.hpp"

using namespace deformtrack;

namespace {

AnchorDetection detection(std::vector<Point3> pos, std::vector<AnchorRole> roles) {
  AnchorDetection d;
  d.positions = std::move(pos);
  d.roles = std::move(roles);
  return d;
}

Trajectory single_keypoint(const std::vector<double>& xs) {
  Trajectory t;
  t.topology.num_keypoints = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    t.keypoints.push_back({{{xs[i], 0, 0}}, static_cast<int>(i)});
    t.timestamps.push_back(static_cast<double>(i) / 30.0);
    t.flags.push_back(kFrameOk);
  }
  return t;
}

struct Prepared {
  SynthSequence seq;
  std::vector<SegmentedFrame> segs;
  InitResult init;
};

Prepared prepare(const SynthConfig& cfg) {
  Prepared p;
  p.seq = gen_sequence(cfg, synth_camera());
  for (std::size_t t = 0; t < p.seq.frames.size(); ++t)
    p.segs.push_back(segment_frame(p.seq.frames[t], p.seq.reference, p.seq.camera, p.seq.exclusion[t],
                                   SegmentationParams{}, static_cast<int>(t)));
  p.init = initialize(p.segs[0], p.seq.camera, InitConfig{});
  return p;
}

}  // namespace

TEST(MatchAnchors, Identity) {
  const std::vector<Point3> prev{{0, 0, 0}, {1, 0, 0}};
  const std::vector<AnchorRef> refs{{0, AnchorRole::Leaf}, {5, AnchorRole::Leaf}};
  const auto m =
      match_anchors(detection({{0.01, 0, 0}, {1.01, 0, 0}}, {AnchorRole::Leaf, AnchorRole::Leaf}), prev, refs, 0.05);
  EXPECT_LT((m.positions[0] - Point3(0.01, 0, 0)).norm(), 1e-15);
  EXPECT_LT((m.positions[1] - Point3(1.01, 0, 0)).norm(), 1e-15);
  EXPECT_EQ(m.retained_count(), 0u);
}

TEST(MatchAnchors, DetectionOrderDoesNotMatter) {
  const std::vector<Point3> prev{{0, 0, 0}, {1, 0, 0}};
  const std::vector<AnchorRef> refs{{0, AnchorRole::Leaf}, {5, AnchorRole::Leaf}};
  const auto m =
      match_anchors(detection({{1.01, 0, 0}, {0.01, 0, 0}}, {AnchorRole::Leaf, AnchorRole::Leaf}), prev, refs, 0.05);
  EXPECT_LT((m.positions[0] - Point3(0.01, 0, 0)).norm(), 1e-15);
  EXPECT_LT((m.positions[1] - Point3(1.01, 0, 0)).norm(), 1e-15);
}

TEST(MatchAnchors, MissingJunctionRetained) {
  const std::vector<Point3> prev{{0, 0, 0}, {0.5, 0, 0}, {1, 0, 0}};
  const std::vector<AnchorRef> refs{{0, AnchorRole::Leaf}, {3, AnchorRole::Junction}, {6, AnchorRole::Leaf}};
  const auto m =
      match_anchors(detection({{0, 0.01, 0}, {1, 0.01, 0}}, {AnchorRole::Leaf, AnchorRole::Leaf}), prev, refs, 0.05);
  EXPECT_EQ(m.positions[1], prev[1]);
  EXPECT_TRUE(m.retained[1]);
  EXPECT_FALSE(m.retained[0]);
  EXPECT_FALSE(m.retained[2]);
  EXPECT_EQ(m.retained_count(), 1u);
}

TEST(MatchAnchors, RolesAreNotMixedAndGateApplies) {
  const std::vector<Point3> prev{{0, 0, 0}, {0.5, 0, 0}};
  const std::vector<AnchorRef> refs{{0, AnchorRole::Leaf}, {1, AnchorRole::Junction}};
  // A leaf detection right on the old junction must not feed the junction;
  // the leaf detection is too far from the old leaf.
  const auto m = match_anchors(detection({{0.5, 0, 0}}, {AnchorRole::Leaf}), prev, refs, 0.05);
  EXPECT_TRUE(m.retained[0]);
  EXPECT_TRUE(m.retained[1]);
}

TEST(MatchAnchors, RandomPermutationsRecovered) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    // Anchors at least 0.1 apart, jittered by under 5 mm.
    std::vector<Point3> prev;
    for (int k = 0; k < 4; ++k) prev.emplace_back(0.1 * k, 0.2 * (k % 2), 0);
    std::vector<AnchorRef> refs;
    for (std::size_t k = 0; k < 4; ++k) refs.push_back({k, AnchorRole::Contour});
    std::vector<std::size_t> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Point3> det;
    const auto jitter = scenes::random_points(rng, 4, 0.0028);
    for (std::size_t k = 0; k < 4; ++k) det.push_back(prev[perm[k]] + jitter[k]);
    const auto m = match_anchors(detection(det, std::vector<AnchorRole>(4, AnchorRole::Contour)), prev, refs, 0.05);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(m.positions[perm[k]], det[k]);
  }
}

TEST(TrackFrame, StaticIsFixedPoint) {
  auto cfg = scenes::config(SynthKind::Rope, SynthMotion::Static, 0.0, 2);
  const Prepared p = prepare(cfg);
  InitConfig ic;
  const auto det = detect_anchors(p.segs[0].cloud, p.seq.camera, ObjectClass::OneDim, ic);
  // x_prev at the solution of frame 0.
  const auto r =
      track_frame(p.init.keypoints, p.init.anchor_positions, p.segs[0], det, p.init.topology, TrackingParams{});
  for (std::size_t i = 0; i < r.keypoints.size(); ++i)
    EXPECT_LT((r.keypoints.positions[i] - p.init.keypoints.positions[i]).norm(), 1e-6) << i;
  EXPECT_EQ(r.flags, static_cast<std::uint32_t>(kFrameOk));
}

TEST(TrackFrame, FollowsSmallTranslation) {
  auto cfg = scenes::config(SynthKind::Rope, SynthMotion::Translate, 0.0, 2);
  const Prepared p = prepare(cfg);
  const Point3 shift = p.seq.truth.keypoints[1].positions[0] - p.seq.truth.keypoints[0].positions[0];
  ASSERT_NEAR(shift.norm(), 0.005, 1e-12);
  const auto det = detect_anchors(p.segs[1].cloud, p.seq.camera, ObjectClass::OneDim, InitConfig{});
  const auto r =
      track_frame(p.init.keypoints, p.init.anchor_positions, p.segs[1], det, p.init.topology, TrackingParams{});
  EXPECT_LT(chamfer(r.keypoints, build_index(p.segs[1].cloud)), 3.0);
  // Anchors follow the detections; the chain as a whole moves with them.
  Point3 mean = Point3::Zero();
  for (std::size_t i = 0; i < r.keypoints.size(); ++i) mean += r.keypoints.positions[i] - p.init.keypoints.positions[i];
  mean /= static_cast<double>(r.keypoints.size());
  EXPECT_GT(mean.dot(shift.normalized()), 0.0);
  for (std::size_t a = 0; a < r.anchor_positions.size(); ++a)
    EXPECT_LT((r.anchor_positions[a] - (p.init.anchor_positions[a] + shift)).norm(), 0.005);
}

TEST(TrackFrame, EmptyFrameCarriesForward) {
  auto cfg = scenes::config(SynthKind::Rope, SynthMotion::Static, 0.0, 2);
  const Prepared p = prepare(cfg);
  SegmentedFrame empty;
  empty.frame_index = 1;
  const auto r = track_frame(p.init.keypoints, p.init.anchor_positions, empty, AnchorDetection{}, p.init.topology,
                             TrackingParams{});
  EXPECT_EQ(r.keypoints.positions, p.init.keypoints.positions);
  EXPECT_TRUE(r.flags & kFrameSkipped);
}

TEST(Smooth, ConstantUnchanged) {
  const auto t = single_keypoint(std::vector<double>(20, 0.3));
  for (std::size_t w : {1u, 3u, 5u, 9u}) EXPECT_EQ(temporal_smooth(t, w).keypoints, t.keypoints);
}

TEST(Smooth, LinearInteriorUnchanged) {
  std::vector<double> xs;
  for (int i = 0; i < 20; ++i) xs.push_back(0.001 * i);
  const auto t = single_keypoint(xs);
  const auto s = temporal_smooth(t, 5);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(s.keypoints[i].positions[0].x(), xs[i], 1e-15);
}

TEST(Smooth, SpikeWindowThree) {
  std::vector<double> xs(9, 0.0);
  xs[4] = 0.009;
  const auto s = temporal_smooth(single_keypoint(xs), 3);
  EXPECT_NEAR(s.keypoints[4].positions[0].x(), 0.003, 1e-15);
  EXPECT_NEAR(s.keypoints[3].positions[0].x(), 0.003, 1e-15);
  EXPECT_NEAR(s.keypoints[2].positions[0].x(), 0.0, 1e-15);
}

TEST(Smooth, BoundaryShrinksSymmetrically) {
  const std::vector<double> xs{1, 2, 4, 8, 16, 32};
  const auto s = temporal_smooth(single_keypoint(xs), 5);
  EXPECT_DOUBLE_EQ(s.keypoints[0].positions[0].x(), 1.0);
  EXPECT_DOUBLE_EQ(s.keypoints[1].positions[0].x(), (1 + 2 + 4) / 3.0);
  EXPECT_DOUBLE_EQ(s.keypoints[2].positions[0].x(), (1 + 2 + 4 + 8 + 16) / 5.0);
  EXPECT_DOUBLE_EQ(s.keypoints[5].positions[0].x(), 32.0);
}

TEST(Smooth, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> xs(40);
  for (auto& x : xs) x = u(rng);
  const auto t = single_keypoint(xs);
  for (std::size_t window : {1u, 3u, 7u, 11u}) {
    const auto s = temporal_smooth(t, window);
    const long w = static_cast<long>(window - 1) / 2, n = static_cast<long>(xs.size());
    for (long i = 0; i < n; ++i) {
      const long h = std::min({w, i, n - 1 - i});
      double m = 0;
      for (long k = i - h; k <= i + h; ++k) m += xs[static_cast<std::size_t>(k)];
      m /= static_cast<double>(2 * h + 1);
      EXPECT_NEAR(s.keypoints[static_cast<std::size_t>(i)].positions[0].x(), m, 1e-12);
    }
  }
}

TEST(Smooth, RejectsEvenWindow) { EXPECT_THROW(temporal_smooth(single_keypoint({0, 1, 2}), 4), Error); }

TEST(TrackSequence, ZeroMotionStaysAtX1) {
  auto cfg = scenes::config(SynthKind::Rope, SynthMotion::Static, 0.0, 20);
  const auto run = scenes::run(gen_sequence(cfg, synth_camera()), scenes::RunOptions{});
  ASSERT_EQ(run.track.smoothed.frames(), 20u);
  for (const auto& kp : run.track.smoothed.keypoints)
    for (std::size_t i = 0; i < kp.size(); ++i)
      EXPECT_LT((kp.positions[i] - run.init.keypoints.positions[i]).norm(), 1e-6);
}

TEST(TrackSequence, SwingingRope) {
  const auto run = scenes::run(
      gen_sequence(scenes::config(SynthKind::Rope, SynthMotion::Swing, 0.0015), synth_camera()), scenes::RunOptions{});
  EXPECT_EQ(run.track.smoothed.frames(), 100u);
  EXPECT_LT(run.summary.mean_chamfer_mm, 8.0);
  EXPECT_LT(run.summary.mean_edge_rmse_mm, 5.0);
  // Shape invariants through the pipeline.
  for (const auto& kp : run.track.raw.keypoints) EXPECT_EQ(kp.size(), run.init.topology.num_keypoints);
  EXPECT_EQ(run.track.smoothed.topology, run.init.topology);
  EXPECT_NO_THROW(run.track.smoothed.validate());
}

TEST(TrackSequence, ClothFoldKeepsIndices) {
  const auto run = scenes::run(
      gen_sequence(scenes::config(SynthKind::Cloth, SynthMotion::Fold, 0.0015), synth_camera()), scenes::RunOptions{});
  std::size_t swapped = 0;
  for (auto s : run.truth.swapped) swapped += s;
  const double pairs = static_cast<double>(run.track.smoothed.frames() * run.init.topology.num_keypoints);
  EXPECT_GE(1.0 - static_cast<double>(swapped) / pairs, 0.99);
}

TEST(TrackSequence, AnchorIdentityStable) {
  for (SynthKind kind : {SynthKind::Rope, SynthKind::Bdlo, SynthKind::Cloth}) {
    const auto run = scenes::run(gen_sequence(scenes::config(kind, SynthMotion::Swing, 0.0015), synth_camera()),
                                 scenes::RunOptions{});
    const auto& gt = run.seq.truth.anchors;
    const auto& tracked = run.track.anchor_positions;
    // Tie tracked anchor k to its nearest ground-truth anchor in frame 0.
    std::vector<std::size_t> tie;
    for (const auto& a : tracked[0]) {
      std::size_t best = 0;
      for (std::size_t g = 1; g < gt[0].size(); ++g)
        if ((gt[0][g] - a).norm() < (gt[0][best] - a).norm()) best = g;
      tie.push_back(best);
    }
    const double gate = TrackingParams{}.anchor_match_max_dist;
    for (std::size_t t = 0; t < tracked.size(); ++t)
      for (std::size_t k = 0; k < tracked[t].size(); ++k)
        EXPECT_LT((tracked[t][k] - gt[t][tie[k]]).norm(), gate) << to_string(kind) << " frame " << t << " anchor " << k;
  }
}
