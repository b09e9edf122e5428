#pragma once

#include <span>
#include <string>
#include <vector>

#include "deformtrack/camera.hpp"
#include "deformtrack/init.hpp"
#include "deformtrack/segmentation.hpp"
#include "deformtrack/tracking.hpp"

namespace deformtrack {

/// Segmentation and anchor detection for one frame, ready for the tracking
/// loop. A segmentation failure marks the frame failed (it is then skipped).
/// A detection failure leaves the detection empty, so every anchor keeps its
/// previous position for that frame.
struct Observation {
  TrackingInput input;
  std::string failure;  // stage message, empty on success
  bool detection_failed = false;
};

Observation observe_frame(const DepthFrame& current, const DepthFrame& reference, const CameraModel& cam,
                          const PointCloud& exclusion, const SegmentationParams& seg, ObjectClass cls,
                          const InitConfig& init, int frame_index);

}  // namespace deformtrack
