#include "deformtrack/pipeline.hpp"

#include "deformtrack/error.hpp"

namespace deformtrack {

Observation observe_frame(const DepthFrame& current, const DepthFrame& reference, const CameraModel& cam,
                          const PointCloud& exclusion, const SegmentationParams& seg, ObjectClass cls,
                          const InitConfig& init, int frame_index) {
  Observation obs;
  obs.input.timestamp = current.timestamp;
  obs.input.segmented.frame_index = frame_index;
  try {
    obs.input.segmented = segment_frame(current, reference, cam, exclusion, seg, frame_index);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SegmentationFailed) throw;
    obs.input.failed = true;
    obs.failure = e.what();
    return obs;
  }
  try {
    obs.input.detection = detect_anchors(obs.input.segmented.cloud, cam, cls, init);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DetectionFailed) throw;
    obs.detection_failed = true;
    obs.failure = e.what();
  }
  return obs;
}

}  // namespace deformtrack
