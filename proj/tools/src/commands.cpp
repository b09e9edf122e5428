#include "deformtrack_cli/commands.hpp"

#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "deformtrack/error.hpp"
#include "deformtrack/io.hpp"
#include "deformtrack/pipeline.hpp"

namespace deformtrack::cli {

using nlohmann::json;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string frame_name(int index) {
  std::ostringstream s;
  s << std::setw(6) << std::setfill('0') << index;
  return s.str();
}

Provenance provenance(const Resolved& cfg) {
  Provenance p;
  p.config_hash = cfg.hash;
  return p;
}

struct LoadedSequence {
  SequenceManifest manifest;
  DepthFrame reference;
  fs::path dir;

  DepthFrame depth(std::size_t i) const { return read_depth(dir / manifest.frames[i].depth); }
  PointCloud exclusion(std::size_t i) const {
    const auto& e = manifest.frames[i].exclusion;
    return e.empty() ? PointCloud{} : read_cloud(dir / e);
  }
};

LoadedSequence load_sequence(const fs::path& dir) {
  LoadedSequence s;
  s.dir = dir;
  s.manifest = read_manifest(dir);
  s.reference = read_depth(dir / s.manifest.reference);
  check_frame_matches(s.reference, s.manifest.camera);
  return s;
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

// Ground truth restricted to the frames a trajectory covers.
GroundTruth slice_truth(const GroundTruth& truth, const Trajectory& traj) {
  GroundTruth out;
  out.kind = truth.kind;
  out.anchor_roles = truth.anchor_roles;
  for (const auto& kp : traj.keypoints) {
    const auto t = static_cast<std::size_t>(kp.frame_index);
    if (kp.frame_index < 0 || t >= truth.frames())
      throw Error(ErrorKind::InvalidInput, "eval",
                  "trajectory frame " + std::to_string(kp.frame_index) + " is not covered by the ground truth");
    out.keypoints.push_back(truth.keypoints[t]);
    out.dense.push_back(truth.dense[t]);
    out.anchors.push_back(truth.anchors[t]);
  }
  return out;
}

}  // namespace

Resolved resolve(const fs::path& config_file, const json& overrides) {
  Resolved r;
  r.document = resolve_config(config_file, overrides);
  r.config = config_from_json(r.document);
  r.hash = config_hash(r.document);
  return r;
}

void cmd_synth(const Resolved& cfg, const fs::path& out_dir, std::ostream& out) {
  const SynthSequence seq = gen_sequence(cfg.config.synth, synth_camera());
  write_sequence(out_dir, seq);
  json meta = {{"version", kFormatVersion},
               {"provenance", {{"tool_version", kToolVersion}, {"config_hash", cfg.hash}}},
               {"synth", cfg.document.at("synth")}};
  write_text(out_dir / "synth.json", meta.dump(1) + "\n");
  out << "synth: " << to_string(seq.config.kind) << " " << to_string(seq.config.motion) << ", " << seq.frames.size()
      << " frames -> " << out_dir.string() << "\n";
}

void cmd_segment(const Resolved& cfg, const fs::path& sequence, const fs::path& out_dir, std::ostream& out) {
  const LoadedSequence seq = load_sequence(sequence);
  fs::create_directories(out_dir);
  json frames = json::array();
  std::size_t ok = 0;
  for (std::size_t i = 0; i < seq.manifest.frames.size(); ++i) {
    const auto& ref = seq.manifest.frames[i];
    json entry = {{"index", ref.index}};
    try {
      const SegmentedFrame seg = segment_frame(seq.depth(i), seq.reference, seq.manifest.camera, seq.exclusion(i),
                                               cfg.config.segmentation, ref.index);
      const std::string name = frame_name(ref.index) + ".cloud";
      write_cloud(out_dir / name, seg.cloud);
      entry["status"] = "ok";
      entry["points"] = seg.cloud.size();
      entry["cloud"] = name;
      ++ok;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SegmentationFailed) throw;
      entry["status"] = "failed";
      entry["message"] = e.what();
    }
    frames.push_back(std::move(entry));
  }
  json report = {{"version", kFormatVersion},
                 {"provenance", {{"tool_version", kToolVersion}, {"config_hash", cfg.hash}}},
                 {"frames", std::move(frames)}};
  write_text(out_dir / "segment.json", report.dump(1) + "\n");
  out << "segment: " << ok << "/" << seq.manifest.frames.size() << " frames segmented -> " << out_dir.string() << "\n";
  if (ok == 0) throw Error(ErrorKind::SegmentationFailed, "segment", "no frame could be segmented");
}

void cmd_init(const Resolved& cfg, const fs::path& sequence, int frame, const fs::path& out_file, std::ostream& out) {
  const LoadedSequence seq = load_sequence(sequence);
  if (frame < 0 || static_cast<std::size_t>(frame) >= seq.manifest.frames.size())
    throw Error(ErrorKind::InvalidInput, "init", "frame " + std::to_string(frame) + " is not in the sequence");
  const auto i = static_cast<std::size_t>(frame);
  const SegmentedFrame seg = segment_frame(seq.depth(i), seq.reference, seq.manifest.camera, seq.exclusion(i),
                                           cfg.config.segmentation, seq.manifest.frames[i].index);
  const InitResult r = initialize(seg, seq.manifest.camera, cfg.config.init);

  InitFile f;
  f.topology = r.topology;
  f.keypoints = r.keypoints;
  f.anchor_positions = r.anchor_positions;
  f.classification = r.classification;
  f.diagnostics = r.diagnostics;
  f.provenance = provenance(cfg);
  ensure_parent(out_file);
  write_init(out_file, f);
  out << "init: " << to_string(r.topology.object_class) << ", " << r.topology.num_keypoints << " keypoints, "
      << r.topology.edges.size() << " edges, " << r.topology.anchors.size() << " anchors, max edge residual "
      << fmt("%.3f", r.diagnostics.max_edge_residual * 1e3) << " mm -> " << out_file.string() << "\n";
}

void cmd_track(const Resolved& cfg, const fs::path& sequence, const fs::path& init_file, const fs::path& out_file,
               std::ostream& out) {
  const LoadedSequence seq = load_sequence(sequence);
  const InitFile init = read_init(init_file);
  const auto& frames = seq.manifest.frames;

  std::size_t start = frames.size();
  for (std::size_t i = 0; i < frames.size(); ++i)
    if (frames[i].index == init.keypoints.frame_index) start = i;
  if (start == frames.size())
    throw Error(ErrorKind::InvalidInput, "track",
                "init frame " + std::to_string(init.keypoints.frame_index) + " is not in the sequence");

  std::vector<TrackingInput> inputs;
  std::size_t failed = 0, no_anchors = 0;
  for (std::size_t i = start; i < frames.size(); ++i) {
    if (i == start) {
      TrackingInput first;
      first.timestamp = frames[i].timestamp;
      first.segmented.frame_index = frames[i].index;
      inputs.push_back(std::move(first));
      continue;
    }
    DepthFrame depth = seq.depth(i);
    depth.timestamp = frames[i].timestamp;
    Observation obs =
        observe_frame(depth, seq.reference, seq.manifest.camera, seq.exclusion(i), cfg.config.segmentation,
                      init.topology.object_class, cfg.config.init, frames[i].index);
    failed += obs.input.failed ? 1 : 0;
    no_anchors += obs.detection_failed ? 1 : 0;
    inputs.push_back(std::move(obs.input));
  }

  const TrackingOutput r =
      track_sequence(init.keypoints, init.anchor_positions, inputs, init.topology, cfg.config.tracking);
  TrajectoryFile f;
  f.smoothed = r.smoothed;
  f.raw = r.raw;
  f.anchor_positions = r.anchor_positions;
  f.smoothing_window = cfg.config.tracking.smoothing_window;
  f.provenance = provenance(cfg);
  ensure_parent(out_file);
  write_trajectory(out_file, f);
  out << "track: " << inputs.size() << " frames (" << failed << " skipped, " << no_anchors
      << " without anchor detections) -> " << out_file.string() << "\n";
}

void cmd_eval(const Resolved& cfg, const EvalOptions& o, std::ostream& out) {
  const TrajectoryFile tf = read_trajectory(o.trajectory);
  const Trajectory& traj = o.raw ? tf.raw : tf.smoothed;

  fs::path truth_path = o.truth;
  if (truth_path.empty() && !o.sequence.empty() && fs::exists(o.sequence / "truth.json"))
    truth_path = o.sequence / "truth.json";
  if (o.sequence.empty() && truth_path.empty())
    throw Error(ErrorKind::InvalidInput, "eval", "need a sequence directory or a ground-truth file");

  std::optional<GroundTruth> truth;
  if (!truth_path.empty()) truth = slice_truth(read_truth(truth_path), traj);

  std::vector<FrameMetrics> per_frame;
  if (!o.sequence.empty()) {
    // Metrics against the segmented observation, as during tracking.
    const LoadedSequence seq = load_sequence(o.sequence);
    std::map<int, std::size_t> by_index;
    for (std::size_t i = 0; i < seq.manifest.frames.size(); ++i) by_index[seq.manifest.frames[i].index] = i;
    for (const auto& kp : traj.keypoints) {
      const auto it = by_index.find(kp.frame_index);
      if (it == by_index.end())
        throw Error(ErrorKind::InvalidInput, "eval",
                    "trajectory frame " + std::to_string(kp.frame_index) + " is not in the sequence");
      const std::size_t i = it->second;
      const SegmentedFrame seg = segment_frame(seq.depth(i), seq.reference, seq.manifest.camera, seq.exclusion(i),
                                               cfg.config.segmentation, kp.frame_index);
      per_frame.push_back(frame_metrics(kp, traj.topology, build_index(seg.cloud), cfg.config.fscore));
    }
  } else {
    // No observation available: measure against the dense truth samples.
    for (std::size_t t = 0; t < traj.frames(); ++t)
      per_frame.push_back(frame_metrics(traj.keypoints[t], traj.topology, NNIndex(truth->dense[t]), cfg.config.fscore));
  }
  const SequenceMetrics summary = aggregate(per_frame, cfg.config.e_thresh_mm, cfg.config.f_thresh_mm);

  std::optional<TruthReport> report;
  if (truth) report = evaluate_against_truth(traj, align_truth(traj.keypoints.front(), *truth));

  ensure_parent(o.out_json);
  ensure_parent(o.out_csv);
  write_metrics(o.out_json, o.out_csv, per_frame, summary, report, provenance(cfg));
  out << "eval: edge RMSE " << fmt("%.3f", summary.mean_edge_rmse_mm) << " mm, chamfer "
      << fmt("%.3f", summary.mean_chamfer_mm) << " mm, F " << fmt("%.2f", summary.mean_fscore_pct) << " %, E<"
      << fmt("%g", cfg.config.e_thresh_mm) << " " << fmt("%.1f", summary.e_below_pct) << " %, F<"
      << fmt("%g", cfg.config.f_thresh_mm) << " " << fmt("%.1f", summary.f_below_pct) << " %";
  if (report)
    out << ", truth error " << fmt("%.3f", report->mean_error_all_mm) << " mm, swap frames " << report->swap_frames;
  out << "\n";
}

}  // namespace deformtrack::cli
