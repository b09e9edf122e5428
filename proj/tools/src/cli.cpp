#include "deformtrack_cli/cli.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "deformtrack/error.hpp"
#include "deformtrack/io.hpp"
#include "deformtrack_cli/commands.hpp"

namespace deformtrack::cli {

using nlohmann::json;

namespace {

// Flags that override config keys. Values are only written when the flag was
// actually given, so the config file keeps precedence over built-in defaults.
class Overrides {
 public:
  template <typename T>
  void option(CLI::App* app, const std::string& flag, const std::string& pointer, const std::string& help) {
    auto v = std::make_shared<std::optional<T>>();
    app->add_option(flag, *v, help);
    apply_.push_back([v, pointer](json& j) {
      if (*v) j[pointer] = **v;
    });
  }

  void flag(CLI::App* app, const std::string& flag, const std::string& pointer, bool value, const std::string& help) {
    auto set = std::make_shared<bool>(false);
    app->add_flag(flag, *set, help);
    apply_.push_back([set, pointer, value](json& j) {
      if (*set) j[pointer] = value;
    });
  }

  json collect() const {
    json j = json::object();
    for (const auto& f : apply_) f(j);
    return j;
  }

 private:
  std::vector<std::function<void(json&)>> apply_;
};

void segmentation_flags(CLI::App* app, Overrides& o) {
  o.option<double>(app, "--diff-threshold", "/segmentation/diff_threshold", "Depth change threshold (m)");
  o.option<double>(app, "--exclusion-radius", "/segmentation/exclusion_radius", "Exclusion radius (m)");
  o.option<double>(app, "--eps", "/segmentation/dbscan_eps", "DBSCAN eps (m)");
  o.option<std::size_t>(app, "--min-pts", "/segmentation/dbscan_min_pts", "DBSCAN min points");
  o.option<int>(app, "--stride", "/segmentation/stride", "Depth pixel stride");
}

void detection_flags(CLI::App* app, Overrides& o) {
  o.option<int>(app, "--dilation", "/anchors/dilation_px", "Mask dilation (px)");
  o.option<int>(app, "--lift-radius", "/anchors/lift_radius_px", "Anchor lifting search radius (px)");
  o.option<double>(app, "--merge-radius", "/anchors/merge_radius_px", "Junction merge radius (px)");
  o.option<double>(app, "--min-branch", "/anchors/min_branch_px", "Spur pruning length (px)");
  o.option<std::size_t>(app, "--contour-anchors", "/anchors/num_contour_anchors", "Contour FPS samples (2D)");
}

void solver_flags(CLI::App* app, Overrides& o, const std::string& section) {
  const std::string s = "/" + section + "/solver/";
  o.option<std::size_t>(app, "--iterations", s + "iterations", "Solver sweeps M");
  o.option<double>(app, "--tol", s + "convergence_tol", "Early stop tolerance (m), 0 disables");
  o.flag(app, "--no-anchor", s + "use_anchor", false, "Disable anchor constraints");
  o.flag(app, "--no-edge", s + "use_edge", false, "Disable edge projection");
  o.flag(app, "--no-projection", s + "use_projection", false, "Disable cloud projection");
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Configuration:
    case ErrorKind::InvalidInput:
      return kExitInput;
    case ErrorKind::SegmentationFailed:
    case ErrorKind::ClassificationFailed:
    case ErrorKind::DetectionFailed:
    case ErrorKind::TopologyFailed:
      return kExitStage;
    case ErrorKind::Internal:
      return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topology-consistent keypoint extraction and tracking for deformable objects", "deformtrack"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string config_file;
  std::function<void(const Resolved&)> action;
  Overrides ov;
  auto with_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_file, "JSON config file")->check(CLI::ExistingFile);
  };

  // synth
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic sequence with ground truth");
  with_config(synth);
  synth->add_option("-o,--out", synth_out, "Output sequence directory")->required();
  ov.option<std::string>(synth, "--kind", "/synth/kind", "rope, bdlo or cloth");
  ov.option<std::string>(synth, "--motion", "/synth/motion", "static, swing, fold or translate");
  ov.option<double>(synth, "--size", "/synth/size", "Object size (m), 0 for the per-kind default");
  ov.option<double>(synth, "--speed", "/synth/speed", "Motion speed scale");
  ov.option<double>(synth, "--translate-step", "/synth/translate_step", "Translation per frame at speed 1 (m)");
  ov.option<std::size_t>(synth, "--frames", "/synth/frames", "Frame count");
  ov.option<double>(synth, "--frame-rate", "/synth/frame_rate", "Frame rate (Hz)");
  ov.option<double>(synth, "--noise", "/synth/noise_sigma", "Depth noise sigma (m)");
  ov.option<std::uint64_t>(synth, "--seed", "/synth/seed", "Random seed");
  ov.flag(synth, "--random-pose", "/synth/random_pose", true, "Randomize rest shape and orientation");
  ov.flag(synth, "--no-arms", "/synth/arms", false, "Leave out the arm distractors");
  ov.option<std::size_t>(synth, "--keypoints", "/synth/num_keypoints", "Ground-truth keypoints (1D)");
  ov.option<std::size_t>(synth, "--grid-rows", "/synth/grid_rows", "Ground-truth grid rows (cloth)");
  ov.option<std::size_t>(synth, "--grid-cols", "/synth/grid_cols", "Ground-truth grid columns (cloth)");
  synth->callback([&] { action = [&](const Resolved& r) { cmd_synth(r, synth_out, out); }; });

  // segment
  std::string seg_seq, seg_out;
  auto* segment = app.add_subcommand("segment", "Segment every frame of a sequence");
  with_config(segment);
  segment->add_option("-s,--sequence", seg_seq, "Sequence directory")->required()->check(CLI::ExistingDirectory);
  segment->add_option("-o,--out", seg_out, "Output directory for clouds")->required();
  segmentation_flags(segment, ov);
  segment->callback([&] { action = [&](const Resolved& r) { cmd_segment(r, seg_seq, seg_out, out); }; });

  // init
  std::string init_seq, init_out;
  int init_frame = 0;
  auto* init = app.add_subcommand("init", "Initialize keypoints and topology on one frame");
  with_config(init);
  init->add_option("-s,--sequence", init_seq, "Sequence directory")->required()->check(CLI::ExistingDirectory);
  init->add_option("-o,--out", init_out, "Output init file (JSON)")->required();
  init->add_option("--frame", init_frame, "Frame to initialize on")->capture_default_str();
  segmentation_flags(init, ov);
  detection_flags(init, ov);
  solver_flags(init, ov, "init");
  ov.option<std::size_t>(init, "-n,--keypoints", "/init/num_keypoints", "Keypoint count (1D)");
  ov.option<std::size_t>(init, "--grid-rows", "/init/grid_rows", "Grid rows (2D)");
  ov.option<std::size_t>(init, "--grid-cols", "/init/grid_cols", "Grid columns (2D)");
  ov.option<std::string>(init, "--class", "/init/object_class", "auto, 1d or 2d");
  ov.option<std::size_t>(init, "--relax-sweeps", "/init/relax_sweeps", "Edge-only sweeps before the solve");
  ov.flag(init, "--no-respace", "/init/respace_chains", false, "Keep the raw FPS spacing of 1D warm starts");
  ov.option<std::size_t>(init, "--classify-seeds", "/classify/num_seeds", "Classification seeds");
  ov.option<double>(init, "--classify-radius", "/classify/radius", "Classification radius (m)");
  ov.option<double>(init, "--ratio-threshold", "/classify/ratio_threshold", "lambda2/lambda1 threshold");
  ov.option<std::uint64_t>(init, "--classify-seed", "/classify/rng_seed", "Classification RNG seed");
  init->callback([&] { action = [&](const Resolved& r) { cmd_init(r, init_seq, init_frame, init_out, out); }; });

  // track
  std::string tr_seq, tr_init, tr_out;
  auto* track = app.add_subcommand("track", "Track keypoints through a sequence");
  with_config(track);
  track->add_option("-s,--sequence", tr_seq, "Sequence directory")->required()->check(CLI::ExistingDirectory);
  track->add_option("-i,--init", tr_init, "Init file from 'init'")->required()->check(CLI::ExistingFile);
  track->add_option("-o,--out", tr_out, "Output trajectory file (JSON)")->required();
  segmentation_flags(track, ov);
  detection_flags(track, ov);
  solver_flags(track, ov, "tracking");
  ov.option<std::size_t>(track, "-w,--window", "/tracking/smoothing_window", "Smoothing window (odd, frames)");
  ov.option<double>(track, "--max-anchor-dist", "/tracking/anchor_match_max_dist", "Anchor match gate (m)");
  ov.flag(track, "--predict-translation", "/tracking/predict_translation", true,
          "Shift the warm start by the mean anchor displacement");
  track->callback([&] { action = [&](const Resolved& r) { cmd_track(r, tr_seq, tr_init, tr_out, out); }; });

  // eval
  EvalOptions ev;
  std::string ev_traj, ev_seq, ev_truth, ev_json, ev_csv;
  auto* eval = app.add_subcommand("eval", "Compute metrics for a trajectory");
  with_config(eval);
  eval->add_option("-t,--trajectory", ev_traj, "Trajectory file")->required()->check(CLI::ExistingFile);
  eval->add_option("-s,--sequence", ev_seq, "Sequence directory")->check(CLI::ExistingDirectory);
  eval->add_option("--truth", ev_truth, "Ground-truth file (truth.json)")->check(CLI::ExistingFile);
  eval->add_option("--json", ev_json, "Output JSON report")->required();
  eval->add_option("--csv", ev_csv, "Output CSV time series")->required();
  eval->add_flag("--raw", ev.raw, "Evaluate the unsmoothed trajectory");
  segmentation_flags(eval, ov);
  ov.option<double>(eval, "--tau", "/metrics/tau_mm", "F-score threshold (mm)");
  ov.option<double>(eval, "--e-thresh", "/metrics/e_thresh_mm", "Edge RMSE frame threshold (mm)");
  ov.option<double>(eval, "--f-thresh", "/metrics/f_thresh_mm", "Chamfer frame threshold (mm)");
  eval->callback([&] {
    action = [&](const Resolved& r) {
      ev.trajectory = ev_traj;
      ev.sequence = ev_seq;
      ev.truth = ev_truth;
      ev.out_json = ev_json;
      ev.out_csv = ev_csv;
      cmd_eval(r, ev, out);
    };
  });

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const Resolved r = resolve(config_file, ov.collect());
    action(r);
    return kExitOk;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "] " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error [invalid-input] " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error [internal] " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace deformtrack::cli
