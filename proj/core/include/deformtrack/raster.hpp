#pragma once

#include <optional>
#include <vector>

#include "deformtrack/camera.hpp"
#include "deformtrack/types.hpp"

namespace deformtrack {

/// Marks the pixel hit by each projected point, then dilates with a
/// (2*dilation_px+1)^2 square. Throws Error{DetectionFailed} when no point is
/// in view.
BinaryMask rasterize_mask(const PointCloud& cloud, const CameraModel& cam, int dilation_px);

BinaryMask dilate(const BinaryMask& mask, int radius_px);

/// Largest 8-connected region; ties go to the region found first in
/// row-major order.
BinaryMask largest_component(const BinaryMask& mask);

/// Ordered outer boundary of the region containing the first foreground pixel
/// in row-major order (Moore neighbor tracing, clockwise in image
/// coordinates). Each boundary pixel appears once.
std::vector<PixelIndex> trace_boundary(const BinaryMask& mask);

/// Z-buffered map from pixels to cloud points: for each pixel hit by a
/// projected point it keeps the point nearest the camera. Used to lift 2D
/// detections back onto the observed surface.
class PixelLookup {
 public:
  PixelLookup(const PointCloud& cloud, const CameraModel& cam);

  /// Point at the pixel nearest to `px` (pixel distance, scan order on ties)
  /// within a square search window of `max_radius_px`.
  std::optional<Point3> lift(PixelIndex px, int max_radius_px) const;
  bool occupied(PixelIndex px) const;
  const BinaryMask& mask() const { return mask_; }

 private:
  BinaryMask mask_;
  std::vector<int> slot_;  // index into points_, -1 when empty
  std::vector<double> depth_;
  std::vector<Point3> points_;
};

}  // namespace deformtrack
