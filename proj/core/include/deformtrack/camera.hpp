#pragma once

#include <optional>

#include <Eigen/Core>

#include "deformtrack/types.hpp"

namespace deformtrack {

/// Pinhole camera with a rigid world_from_camera extrinsic. Depth values are
/// camera-frame z (not ray length).
struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.5;
  double cy = 0.5;
  int width = 1;
  int height = 1;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // world_from_camera
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  /// Throws Error{Configuration} when intrinsics or the rotation are invalid.
  void validate() const;

  Point3 to_world(const Eigen::Vector3d& p_cam) const { return rotation * p_cam + translation; }
  Eigen::Vector3d to_camera(const Point3& p_world) const { return rotation.transpose() * (p_world - translation); }
};

/// Subpixel image coordinate (u along columns, v along rows).
struct ImagePoint {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // camera-frame z

  PixelIndex pixel() const;
};

/// Back-project every valid pixel. `stride` > 1 keeps every stride-th row and
/// column. The result carries pixel provenance.
PointCloud lift_depth(const DepthFrame& frame, const CameraModel& cam, int stride = 1);

/// Same as lift_depth but only for pixels selected by `mask`.
PointCloud lift_depth_masked(const DepthFrame& frame, const CameraModel& cam, const BinaryMask& mask, int stride = 1);

Point3 lift_pixel(int row, int col, double z, const CameraModel& cam);

/// Returns std::nullopt for points behind the camera or outside the image.
std::optional<ImagePoint> project_point(const Point3& p, const CameraModel& cam);

void check_frame_matches(const DepthFrame& frame, const CameraModel& cam);

}  // namespace deformtrack
