#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "deformtrack/camera.hpp"
#include "deformtrack/skeleton.hpp"
#include "deformtrack/types.hpp"

namespace deformtrack {

enum class AnchorRole { Leaf, Junction, Contour };

const char* to_string(AnchorRole role);
AnchorRole anchor_role_from_string(const std::string& s);

/// 3D skeleton branch between two detected anchors.
struct AnchorBranch {
  std::size_t from = 0;  // indices into AnchorDetection::positions
  std::size_t to = 0;
  std::vector<Point3> polyline;  // from -> to

  double length() const;
};

/// Anchors detected in one frame, plus the geometry the initializer needs:
/// skeleton branches for 1D objects, the ordered outer contour for 2D ones.
struct AnchorDetection {
  std::vector<Point3> positions;
  std::vector<AnchorRole> roles;
  std::vector<AnchorBranch> branches;
  std::vector<Point3> contour;

  std::size_t size() const { return positions.size(); }
  std::size_t count(AnchorRole role) const;
};

/// Greedy farthest point sampling. Distances start from `seeds`; with no
/// seeds the first pick is index 0. Returns `k` indices in selection order,
/// ties broken by lowest index. Throws Error{InvalidInput} if k > points.
std::vector<std::size_t> fps(std::span<const Point3> points, std::size_t k, std::span<const Point3> seeds = {});

struct Detect1DParams {
  int dilation_px = 1;
  int lift_radius_px = 3;
  bool extend_leaves = true;
  SkeletonAnalysisParams skeleton;
  MstOptions mst;
};

/// Rasterize -> Zhang-Suen skeleton -> MST -> degree classification. Leaves
/// are pushed out along their branch to the end of the mask, junction pixel
/// clusters are merged, and every anchor is lifted onto the cloud through
/// the nearest occupied pixel (within lift_radius_px; anchors that cannot be
/// lifted are dropped). Throws Error{DetectionFailed} with fewer than two
/// leaves.
AnchorDetection detect_1d_anchors(const PointCloud& cloud, const CameraModel& cam, const Detect1DParams& params = {});

struct Detect2DParams {
  int dilation_px = 1;
  int lift_radius_px = 3;
};

/// Outer contour of the largest mask region, lifted to 3D, then FPS seeded at
/// the contour point farthest from the cloud centroid.
AnchorDetection detect_2d_anchors(const PointCloud& cloud, const CameraModel& cam, std::size_t num_contour_anchors,
                                  const Detect2DParams& params = {});

/// Four corners from contour anchors: the four with the largest summed
/// pairwise distance, each then moved along the contour while that sum grows.
/// Corners come back in contour order; the contour is kept. Throws
/// Error{DetectionFailed} with fewer than four anchors.
AnchorDetection extract_corners(const AnchorDetection& detection);

}  // namespace deformtrack
