#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "deformtrack/anchors.hpp"
#include "deformtrack/segmentation.hpp"
#include "deformtrack/solver.hpp"
#include "deformtrack/topology.hpp"

namespace deformtrack {

struct TrackingParams {
  SolverParams solver;
  std::size_t smoothing_window = 5;     // frames, odd
  double anchor_match_max_dist = 0.05;  // m
  /// Shift the warm start by the mean displacement of the re-detected anchors
  /// before solving. Off by default: the plain warm start is x_prev.
  bool predict_translation = false;

  void validate() const;
};

/// Per-frame status bits.
enum FrameFlag : std::uint32_t {
  kFrameOk = 0,
  kFrameSkipped = 1u << 0,    // no usable segmentation, previous keypoints carried
  kAnchorRetained = 1u << 1,  // at least one anchor kept its previous position
};

struct AnchorMatch {
  std::vector<Point3> positions;  // parallel to the previous anchor list
  std::vector<char> retained;
  std::size_t retained_count() const;
};

/// Assigns detected anchors to anchor indices within each role by minimum
/// total distance to the previous positions. Indices with no detection within
/// `max_dist` keep their previous position and are marked retained.
AnchorMatch match_anchors(const AnchorDetection& detected, std::span<const Point3> previous,
                          std::span<const AnchorRef> anchors, double max_dist);

struct FrameResult {
  KeypointSet keypoints;
  std::vector<Point3> anchor_positions;
  std::uint32_t flags = kFrameOk;
  SolverDiagnostics diagnostics;
};

/// One tracking step warm-started from x_prev. An empty segmented cloud
/// carries x_prev forward with kFrameSkipped.
FrameResult track_frame(const KeypointSet& x_prev, std::span<const Point3> prev_anchor_positions,
                        const SegmentedFrame& seg, const AnchorDetection& detected, const Topology& topology,
                        const TrackingParams& params);

struct Trajectory {
  std::vector<KeypointSet> keypoints;
  Topology topology;
  std::vector<double> timestamps;  // s
  std::vector<std::uint32_t> flags;

  std::size_t frames() const { return keypoints.size(); }
  /// Throws Error{InvalidInput} on inconsistent sizes or timestamps.
  void validate() const;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Unweighted mean over [t-w, t+w] with w = (window-1)/2, shrunk
/// symmetrically near the ends of the sequence.
Trajectory temporal_smooth(const Trajectory& traj, std::size_t window);

struct TrackingInput {
  SegmentedFrame segmented;
  AnchorDetection detection;
  double timestamp = 0.0;
  /// Set when the frame could not be segmented or its anchors detected; the
  /// frame is then skipped.
  bool failed = false;
};

struct TrackingOutput {
  Trajectory smoothed;
  Trajectory raw;                                     // solver output before smoothing
  std::vector<std::vector<Point3>> anchor_positions;  // per frame
  std::vector<SolverDiagnostics> diagnostics;
};

/// Frame 0 is taken to be x1 itself (the initialization frame); frames
/// 1..T-1 are tracked in order, then the whole trajectory is smoothed.
TrackingOutput track_sequence(const KeypointSet& x1, std::span<const Point3> anchors1,
                              std::span<const TrackingInput> frames, const Topology& topology,
                              const TrackingParams& params);

}  // namespace deformtrack
