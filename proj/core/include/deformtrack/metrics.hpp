#pragma once

#include <cstddef>
#include <span>

#include "deformtrack/nn_index.hpp"
#include "deformtrack/topology.hpp"

namespace deformtrack {

struct FrameMetrics {
  double edge_rmse_mm = 0.0;
  double chamfer_mm = 0.0;
  double fscore_pct = 0.0;
};

struct SequenceMetrics {
  double mean_edge_rmse_mm = 0.0;
  double mean_chamfer_mm = 0.0;
  double mean_fscore_pct = 0.0;
  double e_below_pct = 0.0;  // frames with edge RMSE below e_thresh
  double f_below_pct = 0.0;  // frames with chamfer below f_thresh
  std::size_t frames = 0;
};

/// Root mean square of (|xi - xj| - d_ij) over edges, in mm.
double edge_rmse(const KeypointSet& x, const Topology& topology);

/// Mean distance from each keypoint to its nearest cloud point, in mm.
/// One-directional: cloud points far from every keypoint do not count.
double chamfer(const KeypointSet& x, const NNIndex& cloud_index);

struct FScoreParams {
  double tau_mm = 10.0;
  /// Recall is measured on every k-th cloud point, k chosen so that at most
  /// this many points are used.
  std::size_t max_recall_points = 5000;
};

/// Harmonic mean of keypoint precision and cloud recall at tau, as a
/// percentage.
double fscore(const KeypointSet& x, const PointCloud& cloud, const FScoreParams& params = {});
double fscore(const KeypointSet& x, const NNIndex& cloud_index, const FScoreParams& params = {});

FrameMetrics frame_metrics(const KeypointSet& x, const Topology& topology, const NNIndex& cloud_index,
                           const FScoreParams& params = {});

/// Throws Error{InvalidInput} on an empty list.
SequenceMetrics aggregate(std::span<const FrameMetrics> frames, double e_thresh_mm = 5.0, double f_thresh_mm = 10.0);

}  // namespace deformtrack
