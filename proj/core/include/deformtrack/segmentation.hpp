#pragma once

#include <cstddef>
#include <vector>

#include "deformtrack/camera.hpp"
#include "deformtrack/types.hpp"

namespace deformtrack {

struct SegmentationParams {
  double diff_threshold = 0.02;    // m
  double exclusion_radius = 0.03;  // m
  double dbscan_eps = 0.02;        // m
  std::size_t dbscan_min_pts = 8;
  int stride = 1;

  void validate() const;
};

struct SegmentedFrame {
  PointCloud cloud;
  int frame_index = 0;
};

/// Pixels where `current` is valid and either `reference` is invalid or the
/// current surface sits more than `threshold` in front of the reference.
BinaryMask depth_difference_mask(const DepthFrame& current, const DepthFrame& reference, double threshold);

/// Keeps points farther than `radius` from every exclusion point.
PointCloud filter_exclusion(const PointCloud& cloud, const PointCloud& exclusion, double radius);

struct ClusterResult {
  /// Point indices per cluster, each ascending. Clusters are ordered by their
  /// lowest member index.
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> noise;
  /// Per-point cluster id, -1 for noise.
  std::vector<int> labels;
};

/// Density clustering. A point is core when at least `min_pts` points
/// (itself included) lie within `eps`. Core points within `eps` of each other
/// share a cluster; a non-core point joins the cluster of its nearest core
/// neighbor within `eps` (lowest index on ties), otherwise it is noise.
ClusterResult dbscan(const PointCloud& cloud, double eps, std::size_t min_pts);

/// Largest cluster as a cloud (pixel provenance kept). Ties go to the lowest
/// cluster id. Throws Error{SegmentationFailed} when there are no clusters.
PointCloud largest_cluster(const PointCloud& cloud, const ClusterResult& clusters);

/// difference mask -> lift -> exclusion filter -> DBSCAN -> largest cluster.
/// Throws Error{SegmentationFailed} naming the stage that came up empty.
SegmentedFrame segment_frame(const DepthFrame& current, const DepthFrame& reference, const CameraModel& cam,
                             const PointCloud& exclusion, const SegmentationParams& params, int frame_index = 0);

}  // namespace deformtrack
