#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "deformtrack/init.hpp"
#include "deformtrack/metrics.hpp"
#include "deformtrack/pipeline.hpp"
#include "deformtrack/synth.hpp"
#include "deformtrack/tracking.hpp"

namespace scenes {

using namespace deformtrack;

std::vector<Point3> random_points(std::mt19937_64& rng, std::size_t n, double scale);

/// Helix of radius `radius` along z, sampled as a tube of `tube` radius.
PointCloud helix_cloud(double radius, double pitch, double turns, double tube, double spacing);
/// Flat square sheet in the xy plane, grid-sampled.
PointCloud sheet_cloud(double size, double spacing);

SynthConfig config(SynthKind kind, SynthMotion motion, double noise, std::size_t frames = 100, std::uint64_t seed = 1);

/// A generated sequence run through segmentation, initialization on frame 0
/// and tracking.
struct Run {
  SynthSequence seq;
  std::vector<TrackingInput> inputs;  // inputs[t].segmented is the frame-t cloud
  InitResult init;
  TrackingOutput track;
  std::vector<FrameMetrics> metrics;  // smoothed trajectory vs segmented clouds
  SequenceMetrics summary;
  TruthReport truth;  // smoothed trajectory vs aligned truth
  std::vector<KeypointSet> aligned_truth;
  double track_seconds = 0.0;  // tracking loop only
};

struct RunOptions {
  SegmentationParams seg;
  InitConfig init;
  TrackingParams tracking;
};

/// Segments every frame and detects anchors once; returns the observations
/// so several tracker variants can share them.
std::vector<Observation> observe(const SynthSequence& seq, const RunOptions& options, ObjectClass cls);

Run run(const SynthSequence& seq, const RunOptions& options);
/// Same as run() but reuses observations made with the same segmentation.
Run run(const SynthSequence& seq, std::vector<Observation> observations, const RunOptions& options);

}  // namespace scenes
