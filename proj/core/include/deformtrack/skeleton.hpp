#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "deformtrack/types.hpp"

namespace deformtrack {

/// Zhang-Suen thinning to a one-pixel-wide 8-connected medial axis. The
/// result is a fixed point: thinning it again changes nothing.
BinaryMask skeletonize(const BinaryMask& mask);

struct SkeletonEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

/// Minimum spanning tree over skeleton pixels with Euclidean pixel-distance
/// weights.
struct SkeletonGraph {
  std::vector<PixelIndex> nodes;
  std::vector<SkeletonEdge> edges;
  std::vector<int> degree;

  double total_weight() const;
  std::vector<std::vector<std::size_t>> adjacency() const;  // neighbor node ids
};

struct MstOptions {
  /// Candidate edges per pixel. The complete graph is used instead when the
  /// candidate graph does not connect every pixel, or when candidate_k is 0.
  std::size_t candidate_k = 12;
};

/// Kruskal over k-nearest candidate edges, ordered by (weight, a, b) so the
/// tree is deterministic. Node order is the input order.
SkeletonGraph build_mst(std::span<const PixelIndex> pixels, const MstOptions& options = {});

/// Dense Prim over the complete graph; reference for build_mst.
SkeletonGraph build_mst_dense(std::span<const PixelIndex> pixels);

struct SkeletonBranchPath {
  std::size_t from = 0;  // key node ids: leaves first, then merged junctions
  std::size_t to = 0;
  std::vector<PixelIndex> path;  // from -> to, inclusive
  double length_px = 0.0;
};

struct SkeletonAnalysis {
  SkeletonGraph tree;                 // after spur pruning
  std::vector<PixelIndex> leaves;     // degree 1
  std::vector<PixelIndex> junctions;  // merged degree >= 3 clusters (centroid pixel)
  std::vector<SkeletonBranchPath> branches;
  std::size_t pruned_spurs = 0;

  std::size_t key_count() const { return leaves.size() + junctions.size(); }
};

struct SkeletonAnalysisParams {
  double merge_radius_px = 5.0;
  /// Leaf-to-junction branches shorter than this are removed as thinning
  /// artifacts (only while more than two leaves remain).
  double min_branch_px = 10.0;
};

/// Prunes short spurs, classifies nodes by MST degree (1 = leaf, >= 3 =
/// junction; degree 2 is never a key node), merges nearby junction pixels
/// and splits the tree into branches between key nodes.
SkeletonAnalysis analyze_skeleton(const SkeletonGraph& mst, const SkeletonAnalysisParams& params = {});

}  // namespace deformtrack
