#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "deformtrack/types.hpp"

namespace deformtrack {

/// Exact nearest-neighbor index over a fixed point set (3-d tree).
///
/// Ties are broken by the lowest point index, so results do not depend on
/// tree layout. The index owns a copy of the points; queries are const and
/// safe to run concurrently.
class NNIndex {
 public:
  struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;
  };

  /// Throws Error{InvalidInput} on an empty point set.
  explicit NNIndex(std::vector<Point3> points, std::size_t leaf_size = 12);

  std::size_t size() const { return points_.size(); }
  const Point3& point(std::size_t i) const { return points_[i]; }
  const std::vector<Point3>& points() const { return points_; }

  Neighbor nearest(const Point3& query) const;

  /// k nearest, ordered by (distance, index). Returns min(k, size()) entries.
  std::vector<Neighbor> knn(const Point3& query, std::size_t k) const;

  /// Indices of all points with distance <= radius, ascending.
  std::vector<std::size_t> radius_search(const Point3& query, double radius) const;

  /// Number of points within radius, stopping early once `cap` is reached.
  std::size_t count_within(const Point3& query, double radius, std::size_t cap) const;

 private:
  struct Node {
    // Leaf when left == -1; then [begin, end) indexes order_.
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    int axis = 0;
    double split = 0.0;
    Eigen::Vector3d lo;
    Eigen::Vector3d hi;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);

  std::vector<Point3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

NNIndex build_index(const PointCloud& cloud);

struct NearestResult {
  Point3 point;
  double distance = 0.0;
  std::size_t index = 0;
};

NearestResult nearest(const NNIndex& index, const Point3& query);

}  // namespace deformtrack
