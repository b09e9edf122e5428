#include "deformtrack_cli/config.hpp"

#include <set>

#include "deformtrack/error.hpp"
#include "deformtrack/io.hpp"

namespace deformtrack::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Configuration, "config", msg); }

// Reads keys out of one section and rejects anything it did not consume.
class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    obj_ = &root.at(name_);
    if (!obj_->is_object()) config_error("section '" + name_ + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) return;
    const json& v = obj_->at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) bad(key);
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0)) bad(key);
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) bad(key);
    } else {
      if (!v.is_string()) bad(key);
    }
    out = v.get<T>();
  }

  Section sub(const char* key) {
    seen_.insert(key);
    return obj_ ? Section(*obj_, key, name_) : Section();
  }

  void finish() const {
    if (!obj_) return;
    for (const auto& [k, v] : obj_->items())
      if (!seen_.count(k)) config_error("unknown key '" + name_ + "." + k + "'");
  }

 private:
  Section() = default;
  Section(const json& root, const std::string& name, const std::string& parent) : Section(root, name) {
    name_ = parent + "." + name;
  }
  [[noreturn]] void bad(const char* key) const { config_error("key '" + name_ + "." + key + "' has the wrong type"); }

  const json* obj_ = nullptr;
  std::string name_;
  std::set<std::string> seen_;
};

json solver_json(const SolverParams& s) {
  return {{"iterations", s.iterations},
          {"use_anchor", s.use_anchor},
          {"use_edge", s.use_edge},
          {"use_projection", s.use_projection},
          {"convergence_tol", s.convergence_tol}};
}

void read_solver(Section sec, SolverParams& s) {
  sec.get("iterations", s.iterations);
  sec.get("use_anchor", s.use_anchor);
  sec.get("use_edge", s.use_edge);
  sec.get("use_projection", s.use_projection);
  sec.get("convergence_tol", s.convergence_tol);
  sec.finish();
}

}  // namespace

json config_to_json(const PipelineConfig& c) {
  json j;
  const auto& sg = c.segmentation;
  j["segmentation"] = {{"diff_threshold", sg.diff_threshold},
                       {"exclusion_radius", sg.exclusion_radius},
                       {"dbscan_eps", sg.dbscan_eps},
                       {"dbscan_min_pts", sg.dbscan_min_pts},
                       {"stride", sg.stride}};
  const auto& cl = c.init.classify;
  j["classify"] = {{"num_seeds", cl.num_seeds},
                   {"radius", cl.radius},
                   {"ratio_threshold", cl.ratio_threshold},
                   {"rng_seed", cl.rng_seed}};
  const auto& d1 = c.init.detect_1d;
  j["anchors"] = {{"dilation_px", d1.dilation_px},
                  {"lift_radius_px", d1.lift_radius_px},
                  {"extend_leaves", d1.extend_leaves},
                  {"merge_radius_px", d1.skeleton.merge_radius_px},
                  {"min_branch_px", d1.skeleton.min_branch_px},
                  {"mst_candidate_k", d1.mst.candidate_k},
                  {"num_contour_anchors", c.init.num_contour_anchors}};
  j["init"] = {{"num_keypoints", c.init.num_keypoints},
               {"grid_rows", c.init.grid.rows},
               {"grid_cols", c.init.grid.cols},
               {"object_class", c.init.force_class ? to_string(*c.init.force_class) : "auto"},
               {"relax_sweeps", c.init.relax_sweeps},
               {"respace_chains", c.init.respace_chains},
               {"solver", solver_json(c.init.solver)}};
  j["tracking"] = {{"smoothing_window", c.tracking.smoothing_window},
                   {"anchor_match_max_dist", c.tracking.anchor_match_max_dist},
                   {"predict_translation", c.tracking.predict_translation},
                   {"solver", solver_json(c.tracking.solver)}};
  j["metrics"] = {{"tau_mm", c.fscore.tau_mm},
                  {"max_recall_points", c.fscore.max_recall_points},
                  {"e_thresh_mm", c.e_thresh_mm},
                  {"f_thresh_mm", c.f_thresh_mm}};
  const auto& s = c.synth;
  j["synth"] = {{"kind", to_string(s.kind)},
                {"motion", to_string(s.motion)},
                {"size", s.size},
                {"tube_radius", s.tube_radius},
                {"speed", s.speed},
                {"translate_step", s.translate_step},
                {"frames", s.frames},
                {"frame_rate", s.frame_rate},
                {"noise_sigma", s.noise_sigma},
                {"seed", s.seed},
                {"random_pose", s.random_pose},
                {"object_depth", s.object_depth},
                {"background_offset", s.background_offset},
                {"arms", s.arms},
                {"num_keypoints", s.num_keypoints},
                {"grid_rows", s.grid.rows},
                {"grid_cols", s.grid.cols}};
  return j;
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) config_error("config must be a JSON object");
  static const std::set<std::string> sections{"segmentation", "classify", "anchors", "init",
                                              "tracking",     "metrics",  "synth"};
  for (const auto& [k, v] : j.items())
    if (!sections.count(k)) config_error("unknown section '" + k + "'");

  PipelineConfig c;
  {
    Section s(j, "segmentation");
    auto& p = c.segmentation;
    s.get("diff_threshold", p.diff_threshold);
    s.get("exclusion_radius", p.exclusion_radius);
    s.get("dbscan_eps", p.dbscan_eps);
    s.get("dbscan_min_pts", p.dbscan_min_pts);
    s.get("stride", p.stride);
    s.finish();
  }
  {
    Section s(j, "classify");
    auto& p = c.init.classify;
    s.get("num_seeds", p.num_seeds);
    s.get("radius", p.radius);
    s.get("ratio_threshold", p.ratio_threshold);
    s.get("rng_seed", p.rng_seed);
    s.finish();
  }
  {
    Section s(j, "anchors");
    auto& d1 = c.init.detect_1d;
    s.get("dilation_px", d1.dilation_px);
    s.get("lift_radius_px", d1.lift_radius_px);
    s.get("extend_leaves", d1.extend_leaves);
    s.get("merge_radius_px", d1.skeleton.merge_radius_px);
    s.get("min_branch_px", d1.skeleton.min_branch_px);
    s.get("mst_candidate_k", d1.mst.candidate_k);
    s.get("num_contour_anchors", c.init.num_contour_anchors);
    s.finish();
    c.init.detect_2d.dilation_px = d1.dilation_px;
    c.init.detect_2d.lift_radius_px = d1.lift_radius_px;
  }
  {
    Section s(j, "init");
    s.get("num_keypoints", c.init.num_keypoints);
    s.get("grid_rows", c.init.grid.rows);
    s.get("grid_cols", c.init.grid.cols);
    std::string cls = "auto";
    s.get("object_class", cls);
    if (cls == "auto") {
      c.init.force_class.reset();
    } else if (cls == "1d" || cls == "2d") {
      c.init.force_class = object_class_from_string(cls);
    } else {
      config_error("init.object_class must be auto, 1d or 2d");
    }
    s.get("relax_sweeps", c.init.relax_sweeps);
    s.get("respace_chains", c.init.respace_chains);
    read_solver(s.sub("solver"), c.init.solver);
    s.finish();
  }
  {
    Section s(j, "tracking");
    s.get("smoothing_window", c.tracking.smoothing_window);
    s.get("anchor_match_max_dist", c.tracking.anchor_match_max_dist);
    s.get("predict_translation", c.tracking.predict_translation);
    read_solver(s.sub("solver"), c.tracking.solver);
    s.finish();
  }
  {
    Section s(j, "metrics");
    s.get("tau_mm", c.fscore.tau_mm);
    s.get("max_recall_points", c.fscore.max_recall_points);
    s.get("e_thresh_mm", c.e_thresh_mm);
    s.get("f_thresh_mm", c.f_thresh_mm);
    s.finish();
    if (!(c.fscore.tau_mm > 0) || c.fscore.max_recall_points < 1) config_error("invalid metrics parameters");
  }
  {
    Section s(j, "synth");
    auto& p = c.synth;
    std::string kind = to_string(p.kind), motion = to_string(p.motion);
    s.get("kind", kind);
    s.get("motion", motion);
    try {
      p.kind = synth_kind_from_string(kind);
      p.motion = synth_motion_from_string(motion);
    } catch (const Error& e) {
      config_error(std::string("synth: ") + e.what());
    }
    s.get("size", p.size);
    s.get("tube_radius", p.tube_radius);
    s.get("speed", p.speed);
    s.get("translate_step", p.translate_step);
    s.get("frames", p.frames);
    s.get("frame_rate", p.frame_rate);
    s.get("noise_sigma", p.noise_sigma);
    s.get("seed", p.seed);
    s.get("random_pose", p.random_pose);
    s.get("object_depth", p.object_depth);
    s.get("background_offset", p.background_offset);
    s.get("arms", p.arms);
    s.get("num_keypoints", p.num_keypoints);
    s.get("grid_rows", p.grid.rows);
    s.get("grid_cols", p.grid.cols);
    s.finish();
  }

  c.segmentation.validate();
  c.init.classify.validate();
  c.init.solver.validate();
  c.tracking.validate();
  c.synth.validate();
  if (c.init.grid.rows < 2 || c.init.grid.cols < 2) config_error("init grid must be at least 2x2");
  if (c.init.num_contour_anchors < 4) config_error("anchors.num_contour_anchors must be at least 4");
  return c;
}

json default_config_json() { return config_to_json(PipelineConfig{}); }

json resolve_config(const std::filesystem::path& file, const json& overrides) {
  json j = default_config_json();
  if (!file.empty()) {
    json user;
    try {
      user = json::parse(read_text(file));
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::InvalidInput, "config", file.filename().string() + ": malformed JSON (" + e.what() + ")");
    }
    if (!user.is_object()) config_error("config must be a JSON object");
    // Validate the user's keys before merging so typos are not silently kept.
    config_from_json(user);
    j.merge_patch(user);
  }
  for (const auto& [ptr, value] : overrides.items()) j[json::json_pointer(ptr)] = value;
  config_from_json(j);
  return j;
}

std::string config_hash(const json& effective) { return fnv1a_hex(effective.dump()); }

}  // namespace deformtrack::cli
