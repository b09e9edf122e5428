#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "deformtrack/anchors.hpp"
#include "deformtrack/camera.hpp"
#include "deformtrack/classify.hpp"
#include "deformtrack/segmentation.hpp"
#include "deformtrack/solver.hpp"
#include "deformtrack/topology.hpp"

namespace deformtrack {

/// Anchor positions followed by n_total - |A| farthest-point samples of the
/// cloud seeded from the anchors.
std::vector<Point3> warm_start_1d(const PointCloud& cloud, const AnchorDetection& anchors, std::size_t n_total);

/// Visiting order of `points` from `leaf_a` to `leaf_b` minimizing the sum of
/// squared step lengths. Exact (Held-Karp) for up to `exact_limit` points,
/// nearest-neighbor + 2-opt above that.
std::vector<std::size_t> order_chain(std::span<const Point3> points, const Point3& leaf_a, const Point3& leaf_b,
                                     std::size_t exact_limit = 16);

double chain_cost(std::span<const Point3> points, std::span<const std::size_t> order);

/// One branch of a 1D object between two anchors, with its interior
/// keypoints already ordered from `from` to `to`.
struct BranchChain {
  std::size_t from = 0;  // anchor ids
  std::size_t to = 0;
  std::vector<Point3> interior;
};

struct KeypointLayout {
  KeypointSet keypoints;
  Topology topology;
};

/// Assembles a tree of chains. Keypoints are numbered depth-first from the
/// lexicographically smallest leaf; at each anchor, child branches are
/// visited in lexicographic order of their far anchor. Edge groups are
/// branch ids in visiting order. Throws Error{TopologyFailed} when the
/// branches do not connect all anchors into a tree.
KeypointLayout build_1d_topology(std::span<const Point3> anchor_positions, std::span<const AnchorRole> anchor_roles,
                                 std::span<const BranchChain> branches);

/// Full 1D layout: partition the cloud by nearest skeleton branch, allocate
/// interior keypoints to branches in proportion to branch length (at least
/// two each), FPS within each branch from its end anchors, order each branch
/// and assemble. With `respace`, each branch's interior is then moved to
/// uniform arc length along its ordered polyline (anchor, samples, anchor).
KeypointLayout layout_1d(const PointCloud& cloud, const AnchorDetection& anchors, std::size_t n_total,
                         bool respace = false);

/// Per-branch interior keypoint counts (largest remainder, minimum 2).
std::vector<std::size_t> allocate_branch_keypoints(std::span<const double> branch_lengths, std::size_t interior);

/// Rectangular grid from contour anchors: the four anchors with the largest
/// pairwise spread become corners; the lexicographically smallest corner is
/// (0,0) and its contour neighbor with larger x is (0,C-1). Boundary rows and
/// columns follow the contour by arc length when a contour is present,
/// interior keypoints are bilinear in the corners.
KeypointLayout init_grid_2d(const AnchorDetection& anchors, const GridShape& shape);

/// Uniform rest length per edge group: summed edge lengths / edge count.
Topology compute_rest_lengths(const KeypointSet& x, const Topology& topology);

struct InitConfig {
  std::size_t num_keypoints = 15;       // 1D objects
  GridShape grid{8, 8};                 // 2D objects
  std::size_t num_contour_anchors = 8;  // FPS samples the corners are chosen from
  std::optional<ObjectClass> force_class;
  ClassifyParams classify;
  Detect1DParams detect_1d;
  Detect2DParams detect_2d;
  SolverParams solver{200, true, true, true, 1e-5};
  /// Edge-only sweeps (no cloud projection) applied to the warm start before
  /// the full solve; evens out the spacing FPS leaves behind. 0 disables.
  std::size_t relax_sweeps = 200;
  /// Even out 1D warm-start spacing by arc length along each ordered branch.
  /// FPS on a curve leaves gaps that differ by up to 2x, and where the
  /// interior ends up then depends on the noise.
  bool respace_chains = true;
};

struct InitResult {
  KeypointSet keypoints;
  Topology topology;
  AnchorDetection detection;
  std::vector<Point3> anchor_positions;  // parallel to topology.anchors
  std::optional<Classification> classification;
  SolverDiagnostics diagnostics;
};

/// Per-frame anchor detection used by both initialization and tracking:
/// skeleton anchors for 1D objects, the four refined contour corners for 2D.
AnchorDetection detect_anchors(const PointCloud& cloud, const CameraModel& cam, ObjectClass cls,
                               const InitConfig& config);

/// classify -> detect anchors -> warm start -> topology -> rest lengths ->
/// solve. Anchor keypoints equal their detections and every other keypoint
/// is a member of the segmented cloud on return.
InitResult initialize(const SegmentedFrame& seg, const CameraModel& cam, const InitConfig& config);

/// Anchor positions for the topology's anchor set read from a layout.
std::vector<Point3> anchor_positions_of(const KeypointSet& x, const Topology& topology);

}  // namespace deformtrack
