#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "deformtrack/anchors.hpp"
#include "deformtrack/classify.hpp"
#include "deformtrack/types.hpp"

namespace deformtrack {

struct Edge {
  std::size_t i = 0;  // i < j
  std::size_t j = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct AnchorRef {
  std::size_t index = 0;
  AnchorRole role = AnchorRole::Leaf;

  friend bool operator==(const AnchorRef&, const AnchorRef&) = default;
};

struct GridShape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t index(std::size_t r, std::size_t c) const { return r * cols + c; }
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// Keypoint connectivity, rest lengths and anchor set. Edges are kept in
/// ascending (i, j) order; the solver visits them in that order.
///
/// `edge_groups` partitions edges for rest-length averaging: the branch id
/// for 1D objects, 0 (along a grid row) or 1 (along a grid column) for 2D.
struct Topology {
  ObjectClass object_class = ObjectClass::OneDim;
  std::size_t num_keypoints = 0;
  std::vector<Edge> edges;
  std::vector<double> rest_lengths;
  std::vector<int> edge_groups;
  std::vector<AnchorRef> anchors;
  std::optional<GridShape> grid_shape;

  /// Throws Error{TopologyFailed} if any structural invariant is broken.
  void validate() const;

  std::vector<char> anchor_mask() const;
  std::vector<int> degrees() const;

  friend bool operator==(const Topology&, const Topology&) = default;
};

struct KeypointSet {
  std::vector<Point3> positions;
  int frame_index = 0;

  std::size_t size() const { return positions.size(); }
  friend bool operator==(const KeypointSet&, const KeypointSet&) = default;
};

/// 4-neighbor edges of an R x C grid in ascending order, with groups.
void grid_edges(const GridShape& shape, std::vector<Edge>& edges, std::vector<int>& groups);

/// Sorts edges (and their parallel arrays) into ascending (i, j) order.
void sort_edges(Topology& topology);

}  // namespace deformtrack
