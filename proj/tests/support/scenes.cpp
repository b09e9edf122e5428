#include "scenes.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

namespace scenes {

std::vector<Point3> random_points(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Point3> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  return pts;
}

PointCloud helix_cloud(double radius, double pitch, double turns, double tube, double spacing) {
  PointCloud c;
  const double len = turns * std::hypot(2 * std::numbers::pi * radius, pitch);
  const auto steps = static_cast<std::size_t>(len / spacing);
  const auto ring = static_cast<std::size_t>(std::ceil(2 * std::numbers::pi * tube / spacing)) + 3;
  for (std::size_t s = 0; s <= steps; ++s) {
    const double th = 2 * std::numbers::pi * turns * static_cast<double>(s) / static_cast<double>(steps);
    const Point3 center(radius * std::cos(th), radius * std::sin(th), pitch * th / (2 * std::numbers::pi));
    const Eigen::Vector3d tangent =
        Eigen::Vector3d(-radius * std::sin(th), radius * std::cos(th), pitch / (2 * std::numbers::pi)).normalized();
    const Eigen::Vector3d n1 = tangent.cross(Eigen::Vector3d::UnitZ()).normalized();
    const Eigen::Vector3d n2 = tangent.cross(n1);
    for (std::size_t k = 0; k < ring; ++k) {
      const double a = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(ring);
      c.points.push_back(center + tube * (std::cos(a) * n1 + std::sin(a) * n2));
    }
  }
  return c;
}

PointCloud sheet_cloud(double size, double spacing) {
  PointCloud c;
  const auto n = static_cast<int>(std::round(size / spacing));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) c.points.emplace_back(i * spacing, j * spacing, 0.0);
  return c;
}

SynthConfig config(SynthKind kind, SynthMotion motion, double noise, std::size_t frames, std::uint64_t seed) {
  SynthConfig c;
  c.kind = kind;
  c.motion = motion;
  c.noise_sigma = noise;
  c.frames = frames;
  c.seed = seed;
  return c;
}

std::vector<Observation> observe(const SynthSequence& seq, const RunOptions& o, ObjectClass cls) {
  std::vector<Observation> out;
  for (std::size_t t = 0; t < seq.frames.size(); ++t)
    out.push_back(observe_frame(seq.frames[t], seq.reference, seq.camera, seq.exclusion[t], o.seg, cls, o.init,
                                static_cast<int>(t)));
  return out;
}

Run run(const SynthSequence& seq, const RunOptions& o) {
  const SegmentedFrame first = segment_frame(seq.frames[0], seq.reference, seq.camera, seq.exclusion[0], o.seg, 0);
  const ObjectClass cls = o.init.force_class ? *o.init.force_class : classify_object(first.cloud, o.init.classify);
  return run(seq, observe(seq, o, cls), o);
}

Run run(const SynthSequence& seq, std::vector<Observation> observations, const RunOptions& o) {
  Run r;
  r.seq = seq;
  for (auto& ob : observations) r.inputs.push_back(std::move(ob.input));
  r.init = initialize(r.inputs[0].segmented, seq.camera, o.init);

  const auto t0 = std::chrono::steady_clock::now();
  r.track = track_sequence(r.init.keypoints, r.init.anchor_positions, r.inputs, r.init.topology, o.tracking);
  r.track_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const Trajectory& traj = r.track.smoothed;
  for (std::size_t t = 0; t < traj.frames(); ++t) {
    if (r.inputs[t].segmented.cloud.empty()) continue;
    r.metrics.push_back(frame_metrics(traj.keypoints[t], traj.topology, build_index(r.inputs[t].segmented.cloud)));
  }
  r.summary = aggregate(r.metrics);
  r.aligned_truth = align_truth(traj.keypoints.front(), seq.truth);
  r.truth = evaluate_against_truth(traj, r.aligned_truth);
  return r;
}

}  // namespace scenes
