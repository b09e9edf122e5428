#include "deformtrack/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "deformtrack/error.hpp"

namespace deformtrack {

namespace {

double box_distance2(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, const Point3& q) {
  double d2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    double d = 0.0;
    if (q[a] < lo[a])
      d = lo[a] - q[a];
    else if (q[a] > hi[a])
      d = q[a] - hi[a];
    d2 += d * d;
  }
  return d2;
}

// (distance^2, index) lexicographic order.
bool closer(double d2a, std::size_t ia, double d2b, std::size_t ib) { return d2a < d2b || (d2a == d2b && ia < ib); }

}  // namespace

NNIndex::NNIndex(std::vector<Point3> points, std::size_t leaf_size)
    : points_(std::move(points)), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (points_.empty()) throw Error(ErrorKind::InvalidInput, "nn-index", "cannot index an empty cloud");
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorKind::InvalidInput, "nn-index", "cloud too large");
  order_.resize(points_.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
  build(0, static_cast<std::uint32_t>(order_.size()));
}

std::int32_t NNIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  nodes_[id].lo = lo;
  nodes_[id].hi = hi;
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= leaf_size_) return id;

  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return points_[a][axis] < points_[b][axis] || (points_[a][axis] == points_[b][axis] && a < b);
                   });
  nodes_[id].axis = axis;
  nodes_[id].split = points_[order_[mid]][axis];
  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

NNIndex::Neighbor NNIndex::nearest(const Point3& query) const {
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance2(node.lo, node.hi, query) > best_d2) continue;
    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        const double d2 = (points_[idx] - query).squaredNorm();
        if (closer(d2, idx, best_d2, best)) {
          best_d2 = d2;
          best = idx;
        }
      }
      continue;
    }
    // Visit the nearer child first (pushed last).
    const bool go_left = query[node.axis] < node.split;
    stack.push_back(go_left ? node.right : node.left);
    stack.push_back(go_left ? node.left : node.right);
  }
  return {best, (points_[best] - query).norm()};
}

std::vector<NNIndex::Neighbor> NNIndex::knn(const Point3& query, std::size_t k) const {
  k = std::min(k, points_.size());
  if (k == 0) return {};
  using Entry = std::pair<double, std::size_t>;  // max-heap on (d2, index)
  std::priority_queue<Entry> heap;
  auto worst = [&] { return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.top().first; };
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance2(node.lo, node.hi, query) > worst()) continue;
    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        const double d2 = (points_[idx] - query).squaredNorm();
        if (heap.size() < k) {
          heap.emplace(d2, idx);
        } else if (closer(d2, idx, heap.top().first, heap.top().second)) {
          heap.pop();
          heap.emplace(d2, idx);
        }
      }
      continue;
    }
    const bool go_left = query[node.axis] < node.split;
    stack.push_back(go_left ? node.right : node.left);
    stack.push_back(go_left ? node.left : node.right);
  }
  std::vector<Neighbor> out;
  out.reserve(heap.size());
  while (!heap.empty()) {
    out.push_back({heap.top().second, std::sqrt(heap.top().first)});
    heap.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> NNIndex::radius_search(const Point3& query, double radius) const {
  std::vector<std::size_t> out;
  const double r2 = radius * radius;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance2(node.lo, node.hi, query) > r2) continue;
    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i)
        if ((points_[order_[i]] - query).squaredNorm() <= r2) out.push_back(order_[i]);
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t NNIndex::count_within(const Point3& query, double radius, std::size_t cap) const {
  std::size_t n = 0;
  const double r2 = radius * radius;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty() && n < cap) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance2(node.lo, node.hi, query) > r2) continue;
    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end && n < cap; ++i)
        if ((points_[order_[i]] - query).squaredNorm() <= r2) ++n;
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
  return n;
}

NNIndex build_index(const PointCloud& cloud) { return NNIndex(cloud.points); }

NearestResult nearest(const NNIndex& index, const Point3& query) {
  const auto nb = index.nearest(query);
  return {index.point(nb.index), nb.distance, nb.index};
}

}  // namespace deformtrack
