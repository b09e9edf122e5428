#include "deformtrack/tracking.hpp"

#include <algorithm>
#include <string>

#include "deformtrack/assignment.hpp"
#include "deformtrack/error.hpp"

namespace deformtrack {

void TrackingParams::validate() const {
  solver.validate();
  if (smoothing_window < 1 || smoothing_window % 2 == 0)
    throw Error(ErrorKind::Configuration, "tracking", "smoothing_window must be odd and >= 1");
  if (!(anchor_match_max_dist > 0.0))
    throw Error(ErrorKind::Configuration, "tracking", "anchor_match_max_dist must be positive");
}

std::size_t AnchorMatch::retained_count() const {
  return static_cast<std::size_t>(std::count(retained.begin(), retained.end(), 1));
}

AnchorMatch match_anchors(const AnchorDetection& detected, std::span<const Point3> previous,
                          std::span<const AnchorRef> anchors, double max_dist) {
  if (previous.size() != anchors.size())
    throw Error(ErrorKind::InvalidInput, "anchor-matching", "previous positions do not match the anchor set");
  AnchorMatch out;
  out.positions.assign(previous.begin(), previous.end());
  out.retained.assign(anchors.size(), 1);

  for (AnchorRole role : {AnchorRole::Leaf, AnchorRole::Junction, AnchorRole::Contour}) {
    std::vector<std::size_t> idx, det;
    for (std::size_t a = 0; a < anchors.size(); ++a)
      if (anchors[a].role == role) idx.push_back(a);
    for (std::size_t d = 0; d < detected.size(); ++d)
      if (detected.roles[d] == role) det.push_back(d);
    if (idx.empty() || det.empty()) continue;

    Eigen::MatrixXd cost(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(det.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < det.size(); ++c)
        cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            (previous[idx[r]] - detected.positions[det[c]]).norm();
    const auto assign = solve_assignment(cost);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      if (assign[r] < 0) continue;
      const Point3& p = detected.positions[det[static_cast<std::size_t>(assign[r])]];
      if ((p - previous[idx[r]]).norm() > max_dist) continue;
      out.positions[idx[r]] = p;
      out.retained[idx[r]] = 0;
    }
  }
  return out;
}

FrameResult track_frame(const KeypointSet& x_prev, std::span<const Point3> prev_anchor_positions,
                        const SegmentedFrame& seg, const AnchorDetection& detected, const Topology& topology,
                        const TrackingParams& params) {
  if (x_prev.size() != topology.num_keypoints)
    throw Error(ErrorKind::InvalidInput, "tracking", "previous keypoints do not match the topology");
  FrameResult out;
  if (seg.cloud.empty()) {
    out.keypoints = x_prev;
    out.keypoints.frame_index = seg.frame_index;
    out.anchor_positions.assign(prev_anchor_positions.begin(), prev_anchor_positions.end());
    out.flags = kFrameSkipped;
    return out;
  }
  const AnchorMatch match =
      match_anchors(detected, prev_anchor_positions, topology.anchors, params.anchor_match_max_dist);
  if (match.retained_count() > 0) out.flags |= kAnchorRetained;
  const NNIndex index(seg.cloud.points);
  KeypointSet start = x_prev;
  if (params.predict_translation) {
    Eigen::Vector3d shift = Eigen::Vector3d::Zero();
    std::size_t used = 0;
    for (std::size_t a = 0; a < match.positions.size(); ++a) {
      if (match.retained[a]) continue;
      shift += match.positions[a] - prev_anchor_positions[a];
      ++used;
    }
    if (used > 0) {
      shift /= static_cast<double>(used);
      for (auto& p : start.positions) p += shift;
    }
  }
  SolveResult solved = gauss_seidel_solve(start, index, topology, match.positions, params.solver);
  out.keypoints = std::move(solved.keypoints);
  out.keypoints.frame_index = seg.frame_index;
  out.anchor_positions = match.positions;
  out.diagnostics = solved.diagnostics;
  return out;
}

void Trajectory::validate() const {
  if (timestamps.size() != keypoints.size() || flags.size() != keypoints.size())
    throw Error(ErrorKind::InvalidInput, "trajectory", "per-frame arrays differ in length");
  for (std::size_t t = 0; t < keypoints.size(); ++t) {
    if (keypoints[t].size() != topology.num_keypoints)
      throw Error(ErrorKind::InvalidInput, "trajectory",
                  "frame " + std::to_string(t) + " has the wrong keypoint count");
    if (t > 0 && timestamps[t] < timestamps[t - 1])
      throw Error(ErrorKind::InvalidInput, "trajectory", "timestamps are not monotone");
  }
}

Trajectory temporal_smooth(const Trajectory& traj, std::size_t window) {
  if (window < 1 || window % 2 == 0) throw Error(ErrorKind::Configuration, "smoothing", "window must be odd and >= 1");
  Trajectory out = traj;
  const std::size_t T = traj.frames();
  const std::size_t w = (window - 1) / 2;
  for (std::size_t t = 0; t < T; ++t) {
    const std::size_t h = std::min({w, t, T - 1 - t});
    if (h == 0) continue;
    for (std::size_t i = 0; i < traj.topology.num_keypoints; ++i) {
      Point3 sum = Point3::Zero();
      for (std::size_t s = t - h; s <= t + h; ++s) sum += traj.keypoints[s].positions[i];
      out.keypoints[t].positions[i] = sum / static_cast<double>(2 * h + 1);
    }
  }
  return out;
}

TrackingOutput track_sequence(const KeypointSet& x1, std::span<const Point3> anchors1,
                              std::span<const TrackingInput> frames, const Topology& topology,
                              const TrackingParams& params) {
  params.validate();
  if (frames.empty()) throw Error(ErrorKind::InvalidInput, "tracking", "sequence has no frames");
  if (x1.size() != topology.num_keypoints)
    throw Error(ErrorKind::InvalidInput, "tracking", "initial keypoints do not match the topology");

  TrackingOutput out;
  Trajectory& raw = out.raw;
  raw.topology = topology;
  raw.keypoints.push_back(x1);
  raw.keypoints.back().frame_index = frames[0].segmented.frame_index;
  raw.timestamps.push_back(frames[0].timestamp);
  raw.flags.push_back(kFrameOk);
  out.anchor_positions.emplace_back(anchors1.begin(), anchors1.end());
  out.diagnostics.emplace_back();

  for (std::size_t t = 1; t < frames.size(); ++t) {
    const TrackingInput& in = frames[t];
    FrameResult r;
    if (in.failed) {
      r.keypoints = raw.keypoints.back();
      r.keypoints.frame_index = in.segmented.frame_index;
      r.anchor_positions = out.anchor_positions.back();
      r.flags = kFrameSkipped;
    } else {
      r = track_frame(raw.keypoints.back(), out.anchor_positions.back(), in.segmented, in.detection, topology, params);
    }
    raw.keypoints.push_back(std::move(r.keypoints));
    raw.timestamps.push_back(in.timestamp);
    raw.flags.push_back(r.flags);
    out.anchor_positions.push_back(std::move(r.anchor_positions));
    out.diagnostics.push_back(r.diagnostics);
  }
  raw.validate();
  out.smoothed = temporal_smooth(raw, params.smoothing_window);
  return out;
}

}  // namespace deformtrack
