#include "deformtrack/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "deformtrack/error.hpp"

namespace deformtrack {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

[[noreturn]] void input_error(const std::string& msg) { throw Error(ErrorKind::InvalidInput, "io", msg); }

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) input_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const fs::path& path, const void* data, std::size_t n) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidInput, "io", "cannot write " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

json parse_json(const fs::path& path) {
  try {
    return json::parse(read_bytes(path));
  } catch (const json::parse_error& e) {
    input_error(path.filename().string() + ": malformed JSON (" + e.what() + ")");
  }
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(1) + "\n"); }

// Typed field access that names the field on failure.
template <typename T>
T field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) input_error(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    input_error(where + ": field '" + key + "' has the wrong type");
  }
}

json point_json(const Point3& p) { return json::array({p.x(), p.y(), p.z()}); }

Point3 point_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) input_error(where + ": expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json points_json(const std::vector<Point3>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

std::vector<Point3> points_from(const json& j, const std::string& where) {
  if (!j.is_array()) input_error(where + ": expected a list of points");
  std::vector<Point3> out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back(point_from(p, where));
  return out;
}

json camera_json(const CameraModel& c) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) rot.push_back(c.rotation(r, k));
  return {{"fx", c.fx},       {"fy", c.fy},         {"cx", c.cx},      {"cy", c.cy},
          {"width", c.width}, {"height", c.height}, {"rotation", rot}, {"translation", point_json(c.translation)}};
}

CameraModel camera_from(const json& j) {
  const std::string w = "camera";
  CameraModel c;
  c.fx = field<double>(j, "fx", w);
  c.fy = field<double>(j, "fy", w);
  c.cx = field<double>(j, "cx", w);
  c.cy = field<double>(j, "cy", w);
  c.width = field<int>(j, "width", w);
  c.height = field<int>(j, "height", w);
  if (j.contains("rotation")) {
    const auto rot = field<std::vector<double>>(j, "rotation", w);
    if (rot.size() != 9) input_error("camera: field 'rotation' must have 9 entries");
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) c.rotation(r, k) = rot[static_cast<std::size_t>(3 * r + k)];
  }
  if (j.contains("translation")) c.translation = point_from(j.at("translation"), "camera.translation");
  try {
    c.validate();
  } catch (const Error& e) {
    input_error(std::string("camera: ") + e.what());
  }
  return c;
}

json provenance_json(const Provenance& p) { return {{"tool_version", p.tool_version}, {"config_hash", p.config_hash}}; }

Provenance provenance_from(const json& j) {
  Provenance p;
  if (!j.contains("provenance")) return p;
  p.tool_version = field<std::string>(j.at("provenance"), "tool_version", "provenance");
  p.config_hash = field<std::string>(j.at("provenance"), "config_hash", "provenance");
  return p;
}

json topology_json(const Topology& t) {
  json edges = json::array();
  for (const auto& e : t.edges) edges.push_back(json::array({e.i, e.j}));
  json anchors = json::array();
  for (const auto& a : t.anchors) anchors.push_back({{"index", a.index}, {"role", to_string(a.role)}});
  json j = {{"object_class", to_string(t.object_class)},
            {"num_keypoints", t.num_keypoints},
            {"edges", edges},
            {"rest_lengths", t.rest_lengths},
            {"edge_groups", t.edge_groups},
            {"anchors", anchors}};
  if (t.grid_shape) j["grid_shape"] = json::array({t.grid_shape->rows, t.grid_shape->cols});
  return j;
}

Topology topology_from(const json& j) {
  const std::string w = "topology";
  Topology t;
  try {
    t.object_class = object_class_from_string(field<std::string>(j, "object_class", w));
  } catch (const Error&) {
    input_error("topology: field 'object_class' must be \"1d\" or \"2d\"");
  }
  t.num_keypoints = field<std::size_t>(j, "num_keypoints", w);
  for (const auto& e : field<json>(j, "edges", w)) {
    if (!e.is_array() || e.size() != 2) input_error("topology: field 'edges' must hold [i, j] pairs");
    t.edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>()});
  }
  t.rest_lengths = field<std::vector<double>>(j, "rest_lengths", w);
  t.edge_groups = field<std::vector<int>>(j, "edge_groups", w);
  for (const auto& a : field<json>(j, "anchors", w)) {
    AnchorRef ref;
    ref.index = field<std::size_t>(a, "index", "topology.anchors");
    try {
      ref.role = anchor_role_from_string(field<std::string>(a, "role", "topology.anchors"));
    } catch (const Error&) {
      input_error("topology.anchors: unknown role");
    }
    t.anchors.push_back(ref);
  }
  if (j.contains("grid_shape")) {
    const auto g = field<std::vector<std::size_t>>(j, "grid_shape", w);
    if (g.size() != 2) input_error("topology: field 'grid_shape' must be [rows, cols]");
    t.grid_shape = GridShape{g[0], g[1]};
  }
  try {
    t.validate();
  } catch (const Error& e) {
    input_error(std::string("topology: ") + e.what());
  }
  return t;
}

json frames_json(const std::vector<KeypointSet>& frames) {
  json a = json::array();
  for (const auto& f : frames) a.push_back(points_json(f.positions));
  return a;
}

json trajectory_json(const Trajectory& t) {
  json frame_ids = json::array();
  for (const auto& k : t.keypoints) frame_ids.push_back(k.frame_index);
  return {{"timestamps", t.timestamps},
          {"flags", t.flags},
          {"frame_indices", frame_ids},
          {"keypoints", frames_json(t.keypoints)}};
}

Trajectory trajectory_from(const json& j, const Topology& topo, const std::string& where) {
  Trajectory t;
  t.topology = topo;
  t.timestamps = field<std::vector<double>>(j, "timestamps", where);
  t.flags = field<std::vector<std::uint32_t>>(j, "flags", where);
  const auto ids = field<std::vector<int>>(j, "frame_indices", where);
  const auto frames = field<json>(j, "keypoints", where);
  if (ids.size() != frames.size()) input_error(where + ": frame_indices and keypoints differ in length");
  for (std::size_t f = 0; f < frames.size(); ++f) {
    KeypointSet k;
    k.positions = points_from(frames[f], where + ".keypoints");
    k.frame_index = ids[f];
    t.keypoints.push_back(std::move(k));
  }
  try {
    t.validate();
  } catch (const Error& e) {
    input_error(where + ": " + e.what());
  }
  return t;
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

}  // namespace

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

std::string read_text(const fs::path& path) { return read_bytes(path); }

void write_text(const fs::path& path, std::string_view text) { write_bytes(path, text.data(), text.size()); }

SequenceManifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) input_error("no manifest.json in " + dir.string());
  const json j = parse_json(path);
  const std::string w = "manifest";
  SequenceManifest m;
  m.version = field<int>(j, "version", w);
  if (m.version != kFormatVersion) input_error("manifest: unsupported field 'version' " + std::to_string(m.version));
  m.units = field<std::string>(j, "units", w);
  if (m.units != "meters") input_error("manifest: field 'units' must be \"meters\"");
  m.frame_rate = field<double>(j, "frame_rate", w);
  if (!(m.frame_rate > 0.0)) input_error("manifest: field 'frame_rate' must be positive");
  m.camera = camera_from(field<json>(j, "camera", w));
  m.reference = field<std::string>(j, "reference", w);
  const auto count = field<std::size_t>(j, "frame_count", w);
  const json frames = field<json>(j, "frames", w);
  if (!frames.is_array()) input_error("manifest: field 'frames' must be a list");
  if (frames.size() != count) input_error("manifest: field 'frame_count' does not match the frame list");
  for (const auto& f : frames) {
    FrameRef r;
    r.index = field<int>(f, "index", "manifest.frames");
    r.timestamp = field<double>(f, "timestamp", "manifest.frames");
    r.depth = field<std::string>(f, "depth", "manifest.frames");
    if (f.contains("exclusion")) r.exclusion = field<std::string>(f, "exclusion", "manifest.frames");
    if (!m.frames.empty() && r.timestamp < m.frames.back().timestamp)
      input_error("manifest: field 'timestamp' is not monotone at frame " + std::to_string(r.index));
    m.frames.push_back(std::move(r));
  }
  auto must_exist = [&](const std::string& rel, const std::string& what) {
    if (!fs::exists(dir / rel)) input_error("manifest: field '" + what + "' references missing file " + rel);
  };
  must_exist(m.reference, "reference");
  for (const auto& f : m.frames) {
    must_exist(f.depth, "depth");
    if (!f.exclusion.empty()) must_exist(f.exclusion, "exclusion");
  }
  return m;
}

void write_manifest(const fs::path& dir, const SequenceManifest& m) {
  json frames = json::array();
  for (const auto& f : m.frames) {
    json jf = {{"index", f.index}, {"timestamp", f.timestamp}, {"depth", f.depth}};
    if (!f.exclusion.empty()) jf["exclusion"] = f.exclusion;
    frames.push_back(jf);
  }
  write_json(dir / "manifest.json", {{"version", m.version},
                                     {"units", m.units},
                                     {"frame_rate", m.frame_rate},
                                     {"frame_count", m.frames.size()},
                                     {"camera", camera_json(m.camera)},
                                     {"reference", m.reference},
                                     {"frames", frames}});
}

DepthFrame read_depth(const fs::path& path) {
  fs::path side = path;
  side += ".json";
  if (!fs::exists(side)) input_error("missing depth sidecar " + side.string());
  const json j = parse_json(side);
  const std::string w = side.filename().string();
  const int width = field<int>(j, "width", w), height = field<int>(j, "height", w);
  const std::string dtype = field<std::string>(j, "dtype", w);
  if (width <= 0 || height <= 0) input_error(w + ": field 'width'/'height' must be positive");
  const std::string raw = read_bytes(path);
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  DepthFrame f(width, height);
  if (j.contains("timestamp")) f.timestamp = field<double>(j, "timestamp", w);
  if (dtype == "float32le") {
    if (raw.size() != n * 4) input_error(path.filename().string() + ": size does not match the sidecar");
    for (std::size_t i = 0; i < n; ++i) {
      float v;
      std::memcpy(&v, raw.data() + 4 * i, 4);
      f.depth[i] = v;
    }
  } else if (dtype == "uint16le_mm") {
    if (raw.size() != n * 2) input_error(path.filename().string() + ": size does not match the sidecar");
    for (std::size_t i = 0; i < n; ++i) {
      std::uint16_t v;
      std::memcpy(&v, raw.data() + 2 * i, 2);
      f.depth[i] = v / 1000.0;
    }
  } else {
    input_error(w + ": field 'dtype' must be float32le or uint16le_mm");
  }
  return f;
}

void write_depth(const fs::path& path, const DepthFrame& frame, DepthEncoding encoding) {
  const std::size_t n = frame.depth.size();
  json side = {{"width", frame.width}, {"height", frame.height}, {"timestamp", frame.timestamp}};
  if (encoding == DepthEncoding::Float32Meters) {
    std::vector<float> buf(n);
    for (std::size_t i = 0; i < n; ++i)
      buf[i] = is_valid_depth(frame.depth[i]) ? static_cast<float>(frame.depth[i]) : 0.0f;
    write_bytes(path, buf.data(), n * 4);
    side["dtype"] = "float32le";
  } else {
    std::vector<std::uint16_t> buf(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mm = is_valid_depth(frame.depth[i]) ? std::round(frame.depth[i] * 1000.0) : 0.0;
      buf[i] = static_cast<std::uint16_t>(std::clamp(mm, 0.0, 65535.0));
    }
    write_bytes(path, buf.data(), n * 2);
    side["dtype"] = "uint16le_mm";
  }
  fs::path sp = path;
  sp += ".json";
  write_json(sp, side);
}

PointCloud read_cloud(const fs::path& path) {
  const std::string raw = read_bytes(path);
  if (raw.size() < 8) input_error(path.filename().string() + ": truncated point cloud header");
  std::uint64_t n;
  std::memcpy(&n, raw.data(), 8);
  if (raw.size() != 8 + n * 12) input_error(path.filename().string() + ": point count does not match file size");
  PointCloud c;
  c.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    float v[3];
    std::memcpy(v, raw.data() + 8 + 12 * i, 12);
    c.points.emplace_back(v[0], v[1], v[2]);
  }
  return c;
}

void write_cloud(const fs::path& path, const PointCloud& cloud) {
  std::string buf(8 + 12 * cloud.size(), '\0');
  const std::uint64_t n = cloud.size();
  std::memcpy(buf.data(), &n, 8);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const float v[3] = {static_cast<float>(cloud.points[i].x()), static_cast<float>(cloud.points[i].y()),
                        static_cast<float>(cloud.points[i].z())};
    std::memcpy(buf.data() + 8 + 12 * i, v, 12);
  }
  write_bytes(path, buf.data(), buf.size());
}

void write_truth(const fs::path& path, const GroundTruth& truth) {
  json anchors = json::array();
  for (const auto& a : truth.anchors) anchors.push_back(points_json(a));
  json roles = json::array();
  for (auto r : truth.anchor_roles) roles.push_back(to_string(r));
  const std::size_t m = truth.dense.empty() ? 0 : truth.dense.front().size();
  fs::path dense_path = path;
  dense_path.replace_extension(".dense.bin");
  write_json(path, {{"version", kFormatVersion},
                    {"kind", to_string(truth.kind)},
                    {"keypoints", frames_json(truth.keypoints)},
                    {"anchors", anchors},
                    {"anchor_roles", roles},
                    {"dense_file", dense_path.filename().string()},
                    {"dense_count", m}});
  std::vector<double> buf;
  buf.reserve(truth.dense.size() * m * 3);
  for (const auto& frame : truth.dense) {
    if (frame.size() != m) throw Error(ErrorKind::Internal, "io", "dense truth changes size between frames");
    for (const auto& p : frame) buf.insert(buf.end(), {p.x(), p.y(), p.z()});
  }
  write_bytes(dense_path, buf.data(), buf.size() * sizeof(double));
}

GroundTruth read_truth(const fs::path& path) {
  const json j = parse_json(path);
  const std::string w = path.filename().string();
  GroundTruth gt;
  try {
    gt.kind = synth_kind_from_string(field<std::string>(j, "kind", w));
  } catch (const Error&) {
    input_error(w + ": unknown field 'kind' value");
  }
  int f = 0;
  for (const auto& frame : field<json>(j, "keypoints", w)) {
    KeypointSet k;
    k.positions = points_from(frame, w + ".keypoints");
    k.frame_index = f++;
    gt.keypoints.push_back(std::move(k));
  }
  for (const auto& a : field<json>(j, "anchors", w)) gt.anchors.push_back(points_from(a, w + ".anchors"));
  for (const auto& r : field<std::vector<std::string>>(j, "anchor_roles", w))
    gt.anchor_roles.push_back(anchor_role_from_string(r));
  const auto m = field<std::size_t>(j, "dense_count", w);
  const std::string raw = read_bytes(path.parent_path() / field<std::string>(j, "dense_file", w));
  const std::size_t frames = gt.keypoints.size();
  if (raw.size() != frames * m * 3 * sizeof(double)) input_error(w + ": dense sample file has the wrong size");
  gt.dense.assign(frames, std::vector<Point3>(m));
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t i = 0; i < m; ++i) {
      double v[3];
      std::memcpy(v, raw.data() + ((t * m + i) * 3) * sizeof(double), sizeof v);
      gt.dense[t][i] = {v[0], v[1], v[2]};
    }
  return gt;
}

void write_sequence(const fs::path& dir, const SynthSequence& seq) {
  fs::create_directories(dir / "frames");
  SequenceManifest m;
  m.frame_rate = seq.config.frame_rate;
  m.camera = seq.camera;
  m.reference = "reference.depth";
  write_depth(dir / m.reference, seq.reference);
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    std::ostringstream name;
    name << std::setw(6) << std::setfill('0') << t;
    FrameRef r;
    r.index = static_cast<int>(t);
    r.timestamp = seq.frames[t].timestamp;
    r.depth = "frames/" + name.str() + ".depth";
    write_depth(dir / r.depth, seq.frames[t]);
    if (t < seq.exclusion.size() && !seq.exclusion[t].empty()) {
      r.exclusion = "frames/" + name.str() + ".cloud";
      write_cloud(dir / r.exclusion, seq.exclusion[t]);
    }
    m.frames.push_back(std::move(r));
  }
  write_manifest(dir, m);
  write_truth(dir / "truth.json", seq.truth);
}

void write_init(const fs::path& path, const InitFile& init) {
  json j = {{"version", kFormatVersion},
            {"provenance", provenance_json(init.provenance)},
            {"topology", topology_json(init.topology)},
            {"frame_index", init.keypoints.frame_index},
            {"keypoints", points_json(init.keypoints.positions)},
            {"anchor_positions", points_json(init.anchor_positions)},
            {"diagnostics",
             {{"sweeps", init.diagnostics.sweeps},
              {"max_edge_residual", init.diagnostics.max_edge_residual},
              {"degenerate_projections", init.diagnostics.degenerate_projections}}}};
  if (init.classification) {
    const auto& c = *init.classification;
    j["classification"] = {{"object_class", to_string(c.object_class)},
                           {"median_ratio21", c.median_ratio21},
                           {"median_ratio32", c.median_ratio32},
                           {"valid_seeds", c.valid_seeds},
                           {"degenerate_seeds", c.degenerate_seeds}};
  }
  write_json(path, j);
}

InitFile read_init(const fs::path& path) {
  const json j = parse_json(path);
  const std::string w = path.filename().string();
  if (field<int>(j, "version", w) != kFormatVersion) input_error(w + ": unsupported field 'version'");
  InitFile f;
  f.provenance = provenance_from(j);
  f.topology = topology_from(field<json>(j, "topology", w));
  f.keypoints.frame_index = field<int>(j, "frame_index", w);
  f.keypoints.positions = points_from(field<json>(j, "keypoints", w), w + ".keypoints");
  f.anchor_positions = points_from(field<json>(j, "anchor_positions", w), w + ".anchor_positions");
  if (f.keypoints.size() != f.topology.num_keypoints)
    input_error(w + ": field 'keypoints' does not match the topology");
  if (f.anchor_positions.size() != f.topology.anchors.size())
    input_error(w + ": field 'anchor_positions' does not match the anchor set");
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    f.diagnostics.sweeps = field<std::size_t>(d, "sweeps", "diagnostics");
    f.diagnostics.max_edge_residual = field<double>(d, "max_edge_residual", "diagnostics");
    f.diagnostics.degenerate_projections = field<std::size_t>(d, "degenerate_projections", "diagnostics");
  }
  if (j.contains("classification")) {
    const auto& c = j.at("classification");
    Classification cl;
    cl.object_class = object_class_from_string(field<std::string>(c, "object_class", "classification"));
    cl.median_ratio21 = field<double>(c, "median_ratio21", "classification");
    cl.median_ratio32 = field<double>(c, "median_ratio32", "classification");
    cl.valid_seeds = field<std::size_t>(c, "valid_seeds", "classification");
    cl.degenerate_seeds = field<std::size_t>(c, "degenerate_seeds", "classification");
    f.classification = cl;
  }
  return f;
}

void write_trajectory(const fs::path& path, const TrajectoryFile& t) {
  json anchors = json::array();
  for (const auto& a : t.anchor_positions) anchors.push_back(points_json(a));
  write_json(path, {{"version", kFormatVersion},
                    {"provenance", provenance_json(t.provenance)},
                    {"topology", topology_json(t.smoothed.topology)},
                    {"smoothing_window", t.smoothing_window},
                    {"smoothed", trajectory_json(t.smoothed)},
                    {"raw", trajectory_json(t.raw)},
                    {"anchor_positions", anchors}});
}

TrajectoryFile read_trajectory(const fs::path& path) {
  const json j = parse_json(path);
  const std::string w = path.filename().string();
  if (field<int>(j, "version", w) != kFormatVersion) input_error(w + ": unsupported field 'version'");
  TrajectoryFile t;
  t.provenance = provenance_from(j);
  const Topology topo = topology_from(field<json>(j, "topology", w));
  t.smoothing_window = field<std::size_t>(j, "smoothing_window", w);
  t.smoothed = trajectory_from(field<json>(j, "smoothed", w), topo, w + ".smoothed");
  t.raw = trajectory_from(field<json>(j, "raw", w), topo, w + ".raw");
  for (const auto& a : field<json>(j, "anchor_positions", w))
    t.anchor_positions.push_back(points_from(a, w + ".anchor_positions"));
  if (t.raw.frames() != t.smoothed.frames() || t.anchor_positions.size() != t.raw.frames())
    input_error(w + ": smoothed, raw and anchor frame counts differ");
  return t;
}

void write_metrics(const fs::path& json_path, const fs::path& csv_path, const std::vector<FrameMetrics>& frames,
                   const SequenceMetrics& s, const std::optional<TruthReport>& truth, const Provenance& provenance) {
  json per = json::array();
  std::ostringstream csv;
  csv << "frame,edge_rmse_mm,chamfer_mm,fscore_pct\n";
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const auto& f = frames[t];
    per.push_back(
        {{"frame", t}, {"edge_rmse_mm", f.edge_rmse_mm}, {"chamfer_mm", f.chamfer_mm}, {"fscore_pct", f.fscore_pct}});
    csv << t << ',' << format_double(f.edge_rmse_mm) << ',' << format_double(f.chamfer_mm) << ','
        << format_double(f.fscore_pct) << '\n';
  }
  json j = {{"version", kFormatVersion},
            {"provenance", provenance_json(provenance)},
            {"summary",
             {{"frames", s.frames},
              {"mean_edge_rmse_mm", s.mean_edge_rmse_mm},
              {"mean_chamfer_mm", s.mean_chamfer_mm},
              {"mean_fscore_pct", s.mean_fscore_pct},
              {"e_below_5_pct", s.e_below_pct},
              {"f_below_10_pct", s.f_below_pct}}},
            {"frames", per}};
  if (truth) {
    j["truth"] = {{"mean_error_mm", truth->mean_error_all_mm},
                  {"swap_frames", truth->swap_frames},
                  {"per_frame_error_mm", truth->mean_error_mm},
                  {"per_frame_swapped", truth->swapped}};
  }
  write_json(json_path, j);
  write_text(csv_path, csv.str());
}

}  // namespace deformtrack
