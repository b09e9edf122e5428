#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "deformtrack/anchors.hpp"
#include "deformtrack/camera.hpp"
#include "deformtrack/topology.hpp"
#include "deformtrack/tracking.hpp"

namespace deformtrack {

enum class SynthKind { Rope, Bdlo, Cloth };
enum class SynthMotion { Static, Swing, Fold, Translate };

const char* to_string(SynthKind kind);
const char* to_string(SynthMotion motion);
SynthKind synth_kind_from_string(const std::string& s);
SynthMotion synth_motion_from_string(const std::string& s);

struct SynthConfig {
  SynthKind kind = SynthKind::Rope;
  SynthMotion motion = SynthMotion::Swing;
  /// Rope length, BDLO branch length, or cloth side length (m); 0 picks
  /// 0.6, 0.25 or 0.3 by kind.
  double size = 0.0;
  double tube_radius = 0.005;     // m, 1D objects
  double speed = 1.0;             // motion scale
  double translate_step = 0.005;  // m per frame at speed 1
  std::size_t frames = 100;
  double frame_rate = 30.0;     // Hz
  double noise_sigma = 0.0015;  // m, on depth
  std::uint64_t seed = 1;
  /// Randomize the rest shape and in-plane orientation from `seed`.
  bool random_pose = false;
  double object_depth = 0.8;       // m from the camera
  double background_offset = 0.5;  // m behind the object
  bool arms = true;
  /// Ground-truth keypoint count for 1D objects; grid for cloth.
  std::size_t num_keypoints = 15;
  GridShape grid{8, 8};

  void validate() const;
};

/// Camera used for generated sequences: 640x480, f = 525 px, identity pose.
CameraModel synth_camera();

/// Per-pixel source of a generated depth value.
enum PixelLabel : std::uint8_t { kLabelBackground = 0, kLabelObject = 1, kLabelArm = 2 };

struct GroundTruth {
  SynthKind kind = SynthKind::Rope;
  /// Requested keypoints per frame: uniform arc length along each branch for
  /// 1D objects (junction first for BDLO), row-major grid for cloth.
  std::vector<KeypointSet> keypoints;
  /// Dense material samples per frame; sample m is the same material point
  /// in every frame.
  std::vector<std::vector<Point3>> dense;
  /// Leaves and junction for 1D objects, the four corners for cloth.
  std::vector<std::vector<Point3>> anchors;
  std::vector<AnchorRole> anchor_roles;
  std::vector<std::vector<std::uint8_t>> labels;  // per frame, row-major

  std::size_t frames() const { return keypoints.size(); }
};

struct SynthSequence {
  SynthConfig config;
  CameraModel camera;
  DepthFrame reference;  // background only
  std::vector<DepthFrame> frames;
  std::vector<PointCloud> exclusion;
  GroundTruth truth;
};

/// Object geometry at one frame, before rendering.
struct SynthShape {
  /// Dense centerline polylines, one per branch (1D objects). BDLO branches
  /// start at the shared junction.
  std::vector<std::vector<Point3>> centerlines;
  /// Surface samples of the object, dense enough to render without holes.
  std::vector<Point3> surface;
  std::vector<Point3> dense;
  KeypointSet keypoints;
  std::vector<Point3> anchors;
  std::vector<AnchorRole> anchor_roles;
  /// Axis-aligned boxes standing in for the robot arms (center, half size).
  std::vector<std::pair<Point3, double>> arms;
};

SynthShape synth_shape(const SynthConfig& config, std::size_t frame);

/// Throws Error{Configuration} for invalid configs or when the object leaves
/// the image.
SynthSequence gen_sequence(const SynthConfig& config, const CameraModel& cam);

/// Ground truth re-indexed to a tracked trajectory: each tracked keypoint in
/// frame 0 is tied to its nearest dense material sample, which is then
/// followed through all frames.
std::vector<KeypointSet> align_truth(const KeypointSet& first, const GroundTruth& truth);

struct TruthReport {
  std::vector<double> mean_error_mm;  // per frame
  std::vector<std::size_t> swapped;   // per frame, keypoints whose nearest truth is another index
  std::size_t swap_frames = 0;        // frames with at least one swapped keypoint
  double mean_error_all_mm = 0.0;
};

/// Compares a trajectory to index-aligned ground truth. Throws
/// Error{InvalidInput} on mismatched shapes.
TruthReport evaluate_against_truth(const Trajectory& traj, const std::vector<KeypointSet>& truth);

}  // namespace deformtrack
