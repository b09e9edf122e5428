#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deformtrack/camera.hpp"
#include "deformtrack/classify.hpp"
#include "deformtrack/metrics.hpp"
#include "deformtrack/solver.hpp"
#include "deformtrack/synth.hpp"
#include "deformtrack/topology.hpp"
#include "deformtrack/tracking.hpp"

namespace deformtrack {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

struct Provenance {
  std::string tool_version = kToolVersion;
  std::string config_hash;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct FrameRef {
  int index = 0;
  double timestamp = 0.0;  // s
  std::string depth;       // relative to the sequence directory
  std::string exclusion;   // empty when the frame has no exclusion cloud
};

struct SequenceManifest {
  int version = kFormatVersion;
  std::string units = "meters";
  double frame_rate = 30.0;
  CameraModel camera;
  std::string reference;
  std::vector<FrameRef> frames;
};

/// Reads dir/manifest.json and checks that every referenced file exists.
/// Throws Error{InvalidInput} naming the offending field.
SequenceManifest read_manifest(const std::filesystem::path& dir);
void write_manifest(const std::filesystem::path& dir, const SequenceManifest& manifest);

enum class DepthEncoding { Float32Meters, Uint16Millimeters };

/// Raw little-endian grid plus a JSON sidecar at `path` + ".json".
DepthFrame read_depth(const std::filesystem::path& path);
void write_depth(const std::filesystem::path& path, const DepthFrame& frame,
                 DepthEncoding encoding = DepthEncoding::Float32Meters);

/// uint64 point count, then float32 x, y, z per point, little-endian.
PointCloud read_cloud(const std::filesystem::path& path);
void write_cloud(const std::filesystem::path& path, const PointCloud& cloud);

/// Manifest, depth frames, exclusion clouds and truth files.
void write_sequence(const std::filesystem::path& dir, const SynthSequence& seq);

void write_truth(const std::filesystem::path& path, const GroundTruth& truth);
/// Labels are not stored on disk and come back empty.
GroundTruth read_truth(const std::filesystem::path& path);

struct InitFile {
  Topology topology;
  KeypointSet keypoints;
  std::vector<Point3> anchor_positions;
  std::optional<Classification> classification;
  SolverDiagnostics diagnostics;
  Provenance provenance;
};

void write_init(const std::filesystem::path& path, const InitFile& init);
InitFile read_init(const std::filesystem::path& path);

struct TrajectoryFile {
  Trajectory smoothed;
  Trajectory raw;
  std::vector<std::vector<Point3>> anchor_positions;
  std::size_t smoothing_window = 1;
  Provenance provenance;
};

void write_trajectory(const std::filesystem::path& path, const TrajectoryFile& traj);
TrajectoryFile read_trajectory(const std::filesystem::path& path);

/// JSON summary plus a CSV time series (frame, edge_rmse_mm, chamfer_mm,
/// fscore_pct).
void write_metrics(const std::filesystem::path& json_path, const std::filesystem::path& csv_path,
                   const std::vector<FrameMetrics>& frames, const SequenceMetrics& summary,
                   const std::optional<TruthReport>& truth, const Provenance& provenance);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace deformtrack
