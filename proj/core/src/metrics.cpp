#include "deformtrack/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "deformtrack/error.hpp"

namespace deformtrack {

double edge_rmse(const KeypointSet& x, const Topology& topology) {
  if (x.size() != topology.num_keypoints || topology.rest_lengths.size() != topology.edges.size())
    throw Error(ErrorKind::InvalidInput, "metrics", "keypoints, edges and rest lengths are inconsistent");
  if (topology.edges.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t e = 0; e < topology.edges.size(); ++e) {
    const double r =
        (x.positions[topology.edges[e].i] - x.positions[topology.edges[e].j]).norm() - topology.rest_lengths[e];
    sum += r * r;
  }
  return 1000.0 * std::sqrt(sum / static_cast<double>(topology.edges.size()));
}

double chamfer(const KeypointSet& x, const NNIndex& cloud_index) {
  if (x.size() == 0) return 0.0;
  double sum = 0.0;
  for (const auto& p : x.positions) sum += cloud_index.nearest(p).distance;
  return 1000.0 * sum / static_cast<double>(x.size());
}

double fscore(const KeypointSet& x, const NNIndex& cloud_index, const FScoreParams& params) {
  if (x.size() == 0) return 0.0;
  const double tau = params.tau_mm / 1000.0;
  std::size_t hit = 0;
  for (const auto& p : x.positions)
    if (cloud_index.nearest(p).distance <= tau) ++hit;
  const double precision = static_cast<double>(hit) / static_cast<double>(x.size());

  const NNIndex kp_index(x.positions);
  const std::size_t n = cloud_index.size();
  const std::size_t cap = std::max<std::size_t>(params.max_recall_points, 1);
  const std::size_t step = (n + cap - 1) / cap;
  std::size_t used = 0, covered = 0;
  for (std::size_t i = 0; i < n; i += step) {
    ++used;
    if (kp_index.nearest(cloud_index.point(i)).distance <= tau) ++covered;
  }
  const double recall = static_cast<double>(covered) / static_cast<double>(used);
  if (precision + recall == 0.0) return 0.0;
  return 100.0 * 2.0 * precision * recall / (precision + recall);
}

double fscore(const KeypointSet& x, const PointCloud& cloud, const FScoreParams& params) {
  if (cloud.empty()) throw Error(ErrorKind::InvalidInput, "metrics", "cloud is empty");
  return fscore(x, NNIndex(cloud.points), params);
}

FrameMetrics frame_metrics(const KeypointSet& x, const Topology& topology, const NNIndex& cloud_index,
                           const FScoreParams& params) {
  return {edge_rmse(x, topology), chamfer(x, cloud_index), fscore(x, cloud_index, params)};
}

SequenceMetrics aggregate(std::span<const FrameMetrics> frames, double e_thresh_mm, double f_thresh_mm) {
  if (frames.empty()) throw Error(ErrorKind::InvalidInput, "metrics", "no frames to aggregate");
  SequenceMetrics s;
  s.frames = frames.size();
  std::size_t e_ok = 0, f_ok = 0;
  for (const auto& f : frames) {
    s.mean_edge_rmse_mm += f.edge_rmse_mm;
    s.mean_chamfer_mm += f.chamfer_mm;
    s.mean_fscore_pct += f.fscore_pct;
    if (f.edge_rmse_mm < e_thresh_mm) ++e_ok;
    if (f.chamfer_mm < f_thresh_mm) ++f_ok;
  }
  const double n = static_cast<double>(frames.size());
  s.mean_edge_rmse_mm /= n;
  s.mean_chamfer_mm /= n;
  s.mean_fscore_pct /= n;
  s.e_below_pct = 100.0 * static_cast<double>(e_ok) / n;
  s.f_below_pct = 100.0 * static_cast<double>(f_ok) / n;
  return s;
}

}  // namespace deformtrack
