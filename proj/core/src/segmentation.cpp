#include "deformtrack/segmentation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include "deformtrack/error.hpp"
#include "deformtrack/nn_index.hpp"

namespace deformtrack {

void SegmentationParams::validate() const {
  if (!(diff_threshold > 0) || !(exclusion_radius > 0) || !(dbscan_eps > 0) || dbscan_min_pts == 0)
    throw Error(ErrorKind::Configuration, "segmentation", "all segmentation parameters must be positive");
  if (stride < 1) throw Error(ErrorKind::Configuration, "segmentation", "stride must be >= 1");
}

BinaryMask depth_difference_mask(const DepthFrame& current, const DepthFrame& reference, double threshold) {
  if (current.width != reference.width || current.height != reference.height)
    throw Error(ErrorKind::Configuration, "differencing", "current and reference frames differ in size");
  BinaryMask mask(current.width, current.height);
  for (int r = 0; r < current.height; ++r) {
    for (int c = 0; c < current.width; ++c) {
      const double z = current.at(r, c);
      if (!is_valid_depth(z)) continue;
      const double z0 = reference.at(r, c);
      if (!is_valid_depth(z0) || z < z0 - threshold) mask.set(r, c);
    }
  }
  return mask;
}

namespace {

PointCloud subset(const PointCloud& cloud, const std::vector<std::size_t>& keep) {
  PointCloud out;
  out.points.reserve(keep.size());
  for (auto i : keep) out.points.push_back(cloud.points[i]);
  if (cloud.has_pixels()) {
    out.pixels.reserve(keep.size());
    for (auto i : keep) out.pixels.push_back(cloud.pixels[i]);
  }
  return out;
}

}  // namespace

PointCloud filter_exclusion(const PointCloud& cloud, const PointCloud& exclusion, double radius) {
  if (exclusion.empty() || cloud.empty()) return cloud;
  const NNIndex index(exclusion.points);
  std::vector<std::size_t> keep;
  keep.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (index.nearest(cloud.points[i]).distance > radius) keep.push_back(i);
  return subset(cloud, keep);
}

ClusterResult dbscan(const PointCloud& cloud, double eps, std::size_t min_pts) {
  ClusterResult result;
  const std::size_t n = cloud.size();
  result.labels.assign(n, -1);
  if (n == 0) return result;

  const NNIndex index(cloud.points);
  std::vector<char> core(n, 0);
  for (std::size_t i = 0; i < n; ++i) core[i] = index.count_within(cloud.points[i], eps, min_pts) >= min_pts;

  // Connected components over core points. Cells have diagonal eps, so core
  // points sharing a cell are always linked; neighboring cells are linked
  // when any cross pair is within eps.
  const double cell = eps / std::sqrt(3.0);
  const Point3 lo = std::accumulate(cloud.points.begin(), cloud.points.end(), cloud.points.front(),
                                    [](const Point3& a, const Point3& b) { return Point3(a.cwiseMin(b)); });
  auto key_of = [&](const Point3& p) {
    const Eigen::Vector3d k = ((p - lo) / cell).array().floor();
    return std::array<std::int64_t, 3>{static_cast<std::int64_t>(k.x()), static_cast<std::int64_t>(k.y()),
                                       static_cast<std::int64_t>(k.z())};
  };
  std::map<std::array<std::int64_t, 3>, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i)
    if (core[i]) cells[key_of(cloud.points[i])].push_back(i);

  std::vector<std::size_t> parent(cells.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::array<std::int64_t, 3>, std::size_t> cell_id;
  std::vector<const std::vector<std::size_t>*> members;
  for (const auto& [k, v] : cells) {
    cell_id.emplace(k, members.size());
    members.push_back(&v);
  }
  const double eps2 = eps * eps;
  for (const auto& [k, id] : cell_id) {
    for (std::int64_t dx = -2; dx <= 2; ++dx)
      for (std::int64_t dy = -2; dy <= 2; ++dy)
        for (std::int64_t dz = -2; dz <= 2; ++dz) {
          const std::array<std::int64_t, 3> nk{k[0] + dx, k[1] + dy, k[2] + dz};
          if (!(k < nk)) continue;
          const auto it = cell_id.find(nk);
          if (it == cell_id.end()) continue;
          const std::size_t a = find(id), b = find(it->second);
          if (a == b) continue;
          bool linked = false;
          for (auto p : *members[id]) {
            for (auto q : *members[it->second])
              if ((cloud.points[p] - cloud.points[q]).squaredNorm() <= eps2) {
                linked = true;
                break;
              }
            if (linked) break;
          }
          if (linked) parent[std::max(a, b)] = std::min(a, b);
        }
  }
  std::vector<int> comp(n, -1);
  for (const auto& [k, id] : cell_id)
    for (auto p : *members[id]) comp[p] = static_cast<int>(find(id));
  int num_comp = static_cast<int>(cells.size());

  // Border points attach to their nearest core neighbor.
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (auto q : index.radius_search(cloud.points[i], eps)) {
      if (!core[q]) continue;
      const double d2 = (cloud.points[q] - cloud.points[i]).squaredNorm();
      if (d2 <= eps2 && d2 < best) {
        best = d2;
        comp[i] = comp[q];
      }
    }
  }

  // Renumber so clusters are ordered by their lowest member index.
  std::vector<int> remap(static_cast<std::size_t>(num_comp), -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] < 0) {
      result.noise.push_back(i);
      continue;
    }
    int& id = remap[static_cast<std::size_t>(comp[i])];
    if (id < 0) {
      id = next++;
      result.clusters.emplace_back();
    }
    result.labels[i] = id;
    result.clusters[static_cast<std::size_t>(id)].push_back(i);
  }
  return result;
}

PointCloud largest_cluster(const PointCloud& cloud, const ClusterResult& clusters) {
  if (clusters.clusters.empty()) throw Error(ErrorKind::SegmentationFailed, "clustering", "no clusters found");
  std::size_t best = 0;
  for (std::size_t c = 1; c < clusters.clusters.size(); ++c)
    if (clusters.clusters[c].size() > clusters.clusters[best].size()) best = c;
  return subset(cloud, clusters.clusters[best]);
}

SegmentedFrame segment_frame(const DepthFrame& current, const DepthFrame& reference, const CameraModel& cam,
                             const PointCloud& exclusion, const SegmentationParams& params, int frame_index) {
  params.validate();
  check_frame_matches(current, cam);
  check_frame_matches(reference, cam);

  const BinaryMask mask = depth_difference_mask(current, reference, params.diff_threshold);
  if (mask.count() == 0) throw Error(ErrorKind::SegmentationFailed, "differencing", "no changed pixels");

  PointCloud cloud = lift_depth_masked(current, cam, mask, params.stride);
  if (cloud.empty()) throw Error(ErrorKind::SegmentationFailed, "lifting", "no points after downsampling");

  cloud = filter_exclusion(cloud, exclusion, params.exclusion_radius);
  if (cloud.empty()) throw Error(ErrorKind::SegmentationFailed, "exclusion", "all points removed by exclusion filter");

  const ClusterResult clusters = dbscan(cloud, params.dbscan_eps, params.dbscan_min_pts);
  SegmentedFrame out;
  out.cloud = largest_cluster(cloud, clusters);
  out.frame_index = frame_index;
  return out;
}

}  // namespace deformtrack
