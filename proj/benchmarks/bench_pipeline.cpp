#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "deformtrack/init.hpp"
#include "deformtrack/nn_index.hpp"
#include "deformtrack/segmentation.hpp"
#include "deformtrack/solver.hpp"
#include "deformtrack/synth.hpp"
#include "deformtrack/tracking.hpp"

using namespace deformtrack;

namespace {

std::vector<Point3> random_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<Point3> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), 0.8 + 0.1 * u(rng)};
  return pts;
}

// A short swinging rope, segmented and initialized once for every benchmark.
struct Scene {
  SynthSequence seq;
  std::vector<SegmentedFrame> segs;
  std::vector<AnchorDetection> detections;
  InitResult init;

  Scene() {
    SynthConfig c;
    c.frames = 10;
    seq = gen_sequence(c, synth_camera());
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
      segs.push_back(segment_frame(seq.frames[t], seq.reference, seq.camera, seq.exclusion[t], SegmentationParams{},
                                   static_cast<int>(t)));
      detections.push_back(detect_anchors(segs.back().cloud, seq.camera, ObjectClass::OneDim, InitConfig{}));
    }
    init = initialize(segs[0], seq.camera, InitConfig{});
  }
};

const Scene& scene() {
  static const Scene s;
  return s;
}

}  // namespace

static void BM_NearestNeighbor(benchmark::State& state) {
  const auto pts = random_cloud(static_cast<std::size_t>(state.range(0)), 1);
  const auto queries = random_cloud(1024, 2);
  const NNIndex index(pts);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.nearest(queries[q]));
    q = (q + 1) % queries.size();
  }
}
BENCHMARK(BM_NearestNeighbor)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_BuildIndex(benchmark::State& state) {
  const auto pts = random_cloud(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(NNIndex(pts));
}
BENCHMARK(BM_BuildIndex)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_Dbscan(benchmark::State& state) {
  PointCloud c;
  c.points = scene().segs[0].cloud.points;
  for (auto _ : state) benchmark::DoNotOptimize(dbscan(c, 0.02, 8));
  state.SetLabel(std::to_string(c.size()) + " points");
}
BENCHMARK(BM_Dbscan)->Unit(benchmark::kMillisecond);

static void BM_SegmentFrame(benchmark::State& state) {
  const auto& s = scene().seq;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        segment_frame(s.frames[1], s.reference, s.camera, s.exclusion[1], SegmentationParams{}, 1));
}
BENCHMARK(BM_SegmentFrame)->Unit(benchmark::kMillisecond);

static void BM_SolverSweep(benchmark::State& state) {
  const auto& s = scene();
  const NNIndex index(s.segs[1].cloud.points);
  SolverParams p;
  p.iterations = 1;
  p.convergence_tol = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(gauss_seidel_solve(s.init.keypoints, index, s.init.topology, s.init.anchor_positions, p));
}
BENCHMARK(BM_SolverSweep)->Unit(benchmark::kMicrosecond);

static void BM_TrackFrame(benchmark::State& state) {
  const auto& s = scene();
  for (auto _ : state)
    benchmark::DoNotOptimize(track_frame(s.init.keypoints, s.init.anchor_positions, s.segs[1], s.detections[1],
                                         s.init.topology, TrackingParams{}));
}
BENCHMARK(BM_TrackFrame)->Unit(benchmark::kMicrosecond);

static void BM_DetectAnchors(benchmark::State& state) {
  const auto& s = scene();
  for (auto _ : state)
    benchmark::DoNotOptimize(detect_anchors(s.segs[1].cloud, s.seq.camera, ObjectClass::OneDim, InitConfig{}));
}
BENCHMARK(BM_DetectAnchors)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
