#include "deformtrack/topology.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "deformtrack/error.hpp"

namespace deformtrack {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::TopologyFailed, "topology", msg); }

}  // namespace

void Topology::validate() const {
  const std::size_t n = num_keypoints;
  if (n == 0) fail("topology has no keypoints");
  std::set<Edge> seen;
  for (const auto& e : edges) {
    if (e.i >= n || e.j >= n) fail("edge references a missing keypoint");
    if (e.i >= e.j) fail("edges must be stored with i < j");
    if (!seen.insert(e).second) fail("duplicate edge");
  }
  if (!std::is_sorted(edges.begin(), edges.end())) fail("edges are not in ascending order");
  if (!rest_lengths.empty() && rest_lengths.size() != edges.size()) fail("rest length count differs from edge count");
  for (double d : rest_lengths)
    if (!(d > 0.0)) fail("rest lengths must be positive");
  if (!edge_groups.empty() && edge_groups.size() != edges.size()) fail("edge group count differs from edge count");

  // Connectivity.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t comps = n;
  for (const auto& e : edges) {
    const auto a = find(e.i), b = find(e.j);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
      --comps;
    }
  }
  if (comps != 1) fail("keypoint graph is disconnected");

  if (object_class == ObjectClass::OneDim && edges.size() != n - 1) fail("1D topology must be a tree");
  if (object_class == ObjectClass::TwoDim && grid_shape) {
    if (grid_shape->rows * grid_shape->cols != n) fail("grid shape does not match keypoint count");
    std::vector<Edge> expected;
    std::vector<int> groups;
    grid_edges(*grid_shape, expected, groups);
    if (expected != edges) fail("edges do not form the 4-neighbor grid");
  }

  std::set<std::size_t> anchor_ids;
  for (const auto& a : anchors) {
    if (a.index >= n) fail("anchor index out of range");
    if (!anchor_ids.insert(a.index).second) fail("duplicate anchor index");
  }
}

std::vector<char> Topology::anchor_mask() const {
  std::vector<char> mask(num_keypoints, 0);
  for (const auto& a : anchors) mask[a.index] = 1;
  return mask;
}

std::vector<int> Topology::degrees() const {
  std::vector<int> deg(num_keypoints, 0);
  for (const auto& e : edges) {
    ++deg[e.i];
    ++deg[e.j];
  }
  return deg;
}

void grid_edges(const GridShape& shape, std::vector<Edge>& edges, std::vector<int>& groups) {
  edges.clear();
  groups.clear();
  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t c = 0; c < shape.cols; ++c) {
      const std::size_t i = shape.index(r, c);
      if (c + 1 < shape.cols) {
        edges.push_back({i, shape.index(r, c + 1)});
        groups.push_back(0);
      }
      if (r + 1 < shape.rows) {
        edges.push_back({i, shape.index(r + 1, c)});
        groups.push_back(1);
      }
    }
  }
}

void sort_edges(Topology& topology) {
  std::vector<std::size_t> order(topology.edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (auto& e : topology.edges)
    if (e.i > e.j) std::swap(e.i, e.j);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return topology.edges[a] < topology.edges[b]; });
  auto permute = [&](auto& v) {
    if (v.size() != order.size()) return;
    auto copy = v;
    for (std::size_t k = 0; k < order.size(); ++k) v[k] = copy[order[k]];
  };
  permute(topology.edges);
  permute(topology.rest_lengths);
  permute(topology.edge_groups);
}

}  // namespace deformtrack
