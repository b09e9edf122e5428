#include "deformtrack/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Geometry>

#include "deformtrack/error.hpp"

namespace deformtrack {

namespace {

constexpr double kPi = std::numbers::pi;
// One full motion cycle takes 100 frames at 30 Hz when speed is 1.
constexpr double kMotionPeriod = 100.0 / 30.0;
constexpr double kSurfaceStep = 0.0005;
constexpr int kTubeRing = 48;
constexpr double kArmHalf = 0.015;
constexpr double kArmOffset = 0.06;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Configuration, "synth", msg); }

double default_size(SynthKind kind) {
  switch (kind) {
    case SynthKind::Rope:
      return 0.6;
    case SynthKind::Bdlo:
      return 0.25;
    case SynthKind::Cloth:
      return 0.3;
  }
  return 0.6;
}

struct Curve {
  std::vector<Point3> pts;
  std::vector<double> cum;

  double length() const { return cum.back(); }

  Point3 at(double s) const {
    s = std::clamp(s, 0.0, length());
    const auto it = std::lower_bound(cum.begin(), cum.end(), s);
    std::size_t k = static_cast<std::size_t>(it - cum.begin());
    if (k == 0) return pts.front();
    const double span = cum[k] - cum[k - 1];
    const double t = span > 0.0 ? (s - cum[k - 1]) / span : 0.0;
    return pts[k - 1] + t * (pts[k] - pts[k - 1]);
  }

  Eigen::Vector3d tangent(double s) const {
    const double h = std::min(0.001, 0.5 * length());
    const double a = std::max(0.0, s - h), b = std::min(length(), s + h);
    return (at(b) - at(a)).normalized();
  }
};

Curve make_curve(std::vector<Point3> pts) {
  Curve c;
  c.pts = std::move(pts);
  c.cum.assign(c.pts.size(), 0.0);
  for (std::size_t i = 1; i < c.pts.size(); ++i) c.cum[i] = c.cum[i - 1] + (c.pts[i] - c.pts[i - 1]).norm();
  return c;
}

// Uniform Catmull-Rom spline through `ctrl`, ends extended by reflection.
Curve catmull_rom(const std::vector<Point3>& ctrl, int samples_per_segment = 400) {
  std::vector<Point3> p;
  p.push_back(2.0 * ctrl[0] - ctrl[1]);
  p.insert(p.end(), ctrl.begin(), ctrl.end());
  p.push_back(2.0 * ctrl.back() - ctrl[ctrl.size() - 2]);
  std::vector<Point3> out;
  for (std::size_t s = 1; s + 2 < p.size(); ++s) {
    const Point3 &p0 = p[s - 1], &p1 = p[s], &p2 = p[s + 1], &p3 = p[s + 2];
    for (int k = 0; k < samples_per_segment; ++k) {
      const double t = static_cast<double>(k) / samples_per_segment;
      const double t2 = t * t, t3 = t2 * t;
      out.push_back(0.5 * (2.0 * p1 + (p2 - p0) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                           (3.0 * p1 - p0 - 3.0 * p2 + p3) * t3));
    }
  }
  out.push_back(ctrl.back());
  return make_curve(std::move(out));
}

double curve_length(const std::vector<Point3>& ctrl) { return catmull_rom(ctrl, 100).length(); }

// Scales control points about `pivot` so the spline has length `target`.
void rescale(std::vector<Point3>& ctrl, const Point3& pivot, double target) {
  for (int pass = 0; pass < 2; ++pass) {
    const double f = target / curve_length(ctrl);
    for (auto& p : ctrl) p = pivot + f * (p - pivot);
  }
}

struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();  // camera frame
};

struct RestShape {
  double theta = 0.0;
  double tilt = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double wave_amp = 0.04, wave_freq = 1.5, wave_phase = 0.3;
  std::array<double, 3> branch_angle{0.0, 0.0, 0.0};
  std::array<double, 3> branch_bend{0.02, -0.015, 0.01};
  double curvature = 0.0;
};

RestShape rest_shape(const SynthConfig& c) {
  RestShape r;
  switch (c.kind) {
    case SynthKind::Rope:
      r.theta = 0.3;
      break;
    case SynthKind::Bdlo:
      r.theta = 0.2;
      break;
    case SynthKind::Cloth:
      r.theta = 0.35;
      r.tilt = 0.25;
      r.curvature = 0.1;
      break;
  }
  if (!c.random_pose) return r;
  std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * u01(rng); };
  r.center = {uni(-0.03, 0.03), uni(-0.03, 0.03)};
  if (c.kind == SynthKind::Cloth) {
    // Keep clear of the orientations where two corners tie in x.
    r.theta = (u01(rng) < 0.5 ? -1.0 : 1.0) * uni(10.0, 35.0) * kPi / 180.0;
    r.tilt = uni(0.1, 0.4);
    r.curvature = uni(-0.3, 0.3);
  } else {
    r.theta = uni(-kPi, kPi);
    r.wave_amp = uni(0.02, 0.06);
    r.wave_freq = uni(1.0, 2.0);
    r.wave_phase = uni(0.0, 2.0 * kPi);
    for (auto& a : r.branch_angle) a = uni(-15.0, 15.0) * kPi / 180.0;
    for (auto& b : r.branch_bend) b = uni(-0.025, 0.025);
  }
  return r;
}

Pose make_pose(const SynthConfig& c, const RestShape& r, std::size_t frame) {
  Pose p;
  p.rotation =
      (Eigen::AngleAxisd(r.theta, Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(r.tilt, Eigen::Vector3d::UnitX()))
          .toRotationMatrix();
  p.offset = Eigen::Vector3d(r.center.x(), r.center.y(), c.object_depth);
  // Centered on the rest pose so the longest sequences stay in view.
  if (c.motion == SynthMotion::Translate)
    p.offset.x() += c.translate_step * c.speed * (static_cast<double>(frame) - 0.5 * static_cast<double>(c.frames - 1));
  return p;
}

double phase(const SynthConfig& c, std::size_t frame) {
  if (c.motion == SynthMotion::Static || c.motion == SynthMotion::Translate) return 0.0;
  return 2.0 * kPi * c.speed * (static_cast<double>(frame) / c.frame_rate) / kMotionPeriod;
}

// Ramp 0 -> 1 -> 0 over one period.
double fold_amount(double w) { return 0.5 * (1.0 - std::cos(w)); }

std::vector<Point3> rope_controls(const SynthConfig& c, const RestShape& r, double w) {
  const int K = 7;
  const double L = c.size;
  std::vector<Point3> ctrl;
  const double beta = c.motion == SynthMotion::Fold ? 0.8 * kPi * fold_amount(w) : 0.0;
  Eigen::Vector2d pos(0.0, 0.0);
  std::vector<Eigen::Vector2d> base{pos};
  for (int k = 1; k < K; ++k) {
    const double heading = beta * ((k - 0.5) / (K - 1) - 0.5);
    pos += (0.9 * L / (K - 1)) * Eigen::Vector2d(std::cos(heading), std::sin(heading));
    base.push_back(pos);
  }
  const Eigen::Vector2d mid = 0.5 * (base.front() + base.back());
  for (int k = 0; k < K; ++k) {
    const double s = static_cast<double>(k) / (K - 1);
    Eigen::Vector2d q = base[static_cast<std::size_t>(k)] - mid;
    double y = r.wave_amp * std::sin(kPi * r.wave_freq * s + r.wave_phase);
    double z = 0.01 * std::sin(2.0 * s + r.wave_phase);
    if (c.motion == SynthMotion::Swing) {
      y += 0.06 * std::sin(w + 0.7 * k) * (0.3 + 0.7 * s);
      z += 0.02 * std::sin(w + 0.5 * k);
    }
    ctrl.emplace_back(q.x(), q.y() + y, z);
  }
  Point3 pivot = Point3::Zero();
  for (const auto& p : ctrl) pivot += p;
  pivot /= static_cast<double>(K);
  rescale(ctrl, pivot, L);
  return ctrl;
}

std::vector<Point3> bdlo_controls(const SynthConfig& c, const RestShape& r, double w, int branch) {
  const int K = 5;
  const double L = c.size;
  const double psi = -kPi / 2.0 + 2.0 * kPi / 3.0 * branch + r.branch_angle[static_cast<std::size_t>(branch)];
  const Eigen::Vector2d dir(std::cos(psi), std::sin(psi)), perp(-dir.y(), dir.x());
  std::vector<Point3> ctrl;
  for (int k = 0; k < K; ++k) {
    const double s = static_cast<double>(k) / (K - 1);
    double bend = r.branch_bend[static_cast<std::size_t>(branch)] * std::sin(kPi * s);
    double z = 0.005 * s * std::sin(1.0 + branch);
    if (c.motion == SynthMotion::Swing) {
      bend += 0.04 * std::sin(w + branch + 0.7 * k) * s;
      z += 0.015 * std::sin(w + 0.5 * k + branch) * s;
    } else if (c.motion == SynthMotion::Fold) {
      bend += 0.08 * fold_amount(w) * s * s;
    }
    const Eigen::Vector2d q = (0.9 * L * s) * dir + bend * perp;
    ctrl.emplace_back(q.x(), q.y(), z);
  }
  rescale(ctrl, Point3::Zero(), L);
  return ctrl;
}

Point3 cloth_local(const SynthConfig& c, const RestShape& r, double w, double u, double v) {
  const double S = c.size;
  double a = (u - 0.5) * S;
  const double b = (v - 0.5) * S;
  double z = r.curvature * a * a;
  if (c.motion == SynthMotion::Fold && a > 0.0) {
    // Isometric fold toward the camera around a cylinder of radius rho.
    const double phi = (kPi / 3.0) * fold_amount(w);
    const double rho = 0.02;
    if (phi > 0.0) {
      const double arc = rho * phi;
      double x, dz;
      if (a <= arc) {
        x = rho * std::sin(a / rho);
        dz = -rho * (1.0 - std::cos(a / rho));
      } else {
        x = rho * std::sin(phi) + (a - arc) * std::cos(phi);
        dz = -rho * (1.0 - std::cos(phi)) - (a - arc) * std::sin(phi);
      }
      a = x;
      z += dz;
    }
  } else if (c.motion == SynthMotion::Swing) {
    z += 0.015 * std::sin(2.0 * kPi * (0.8 * u + 0.3 * v) - w);
  }
  return {a, b, z};
}

std::vector<std::size_t> split_count(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> out(parts, total / parts);
  for (std::size_t i = 0; i < total % parts; ++i) ++out[i];
  return out;
}

void add_tube(const Curve& curve, double radius, const Eigen::Vector3d& view, std::vector<Point3>& out) {
  const double L = curve.length();
  const auto steps = static_cast<std::size_t>(std::ceil(L / kSurfaceStep));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double s = L * static_cast<double>(k) / static_cast<double>(steps);
    const Point3 c = curve.at(s);
    const Eigen::Vector3d t = curve.tangent(s);
    Eigen::Vector3d n1 = t.cross(view);
    if (n1.norm() < 1e-6) n1 = t.cross(Eigen::Vector3d::UnitX());
    n1.normalize();
    const Eigen::Vector3d n2 = t.cross(n1);
    for (int j = 0; j < kTubeRing; ++j) {
      const double ang = 2.0 * kPi * j / kTubeRing;
      out.push_back(c + radius * (std::cos(ang) * n1 + std::sin(ang) * n2));
    }
  }
}

std::vector<Point3> box_samples(const Point3& center, double half, double step) {
  std::vector<Point3> out;
  const int n = std::max(1, static_cast<int>(std::ceil(2.0 * half / step)));
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {-1.0, 1.0}) {
      for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
          Eigen::Vector3d p;
          p[axis] = sign * half;
          p[(axis + 1) % 3] = -half + 2.0 * half * i / n;
          p[(axis + 2) % 3] = -half + 2.0 * half * j / n;
          out.push_back(center + p);
        }
      }
    }
  }
  return out;
}

}  // namespace

const char* to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Rope:
      return "rope";
    case SynthKind::Bdlo:
      return "bdlo";
    case SynthKind::Cloth:
      return "cloth";
  }
  return "rope";
}

const char* to_string(SynthMotion motion) {
  switch (motion) {
    case SynthMotion::Static:
      return "static";
    case SynthMotion::Swing:
      return "swing";
    case SynthMotion::Fold:
      return "fold";
    case SynthMotion::Translate:
      return "translate";
  }
  return "static";
}

SynthKind synth_kind_from_string(const std::string& s) {
  if (s == "rope") return SynthKind::Rope;
  if (s == "bdlo") return SynthKind::Bdlo;
  if (s == "cloth") return SynthKind::Cloth;
  config_error("unknown object kind '" + s + "'");
}

SynthMotion synth_motion_from_string(const std::string& s) {
  if (s == "static") return SynthMotion::Static;
  if (s == "swing") return SynthMotion::Swing;
  if (s == "fold") return SynthMotion::Fold;
  if (s == "translate") return SynthMotion::Translate;
  config_error("unknown motion '" + s + "'");
}

void SynthConfig::validate() const {
  if (!(size >= 0.0)) config_error("size must be >= 0 (0 selects the default)");
  if (!(tube_radius > 0.0)) config_error("tube_radius must be positive");
  if (!(speed >= 0.0)) config_error("speed must be >= 0");
  if (frames < 2) config_error("frames must be >= 2");
  if (!(frame_rate > 0.0)) config_error("frame_rate must be positive");
  if (!(noise_sigma >= 0.0)) config_error("noise_sigma must be >= 0");
  if (!(object_depth > 0.0) || !(background_offset > 0.0)) config_error("depths must be positive");
  if (kind == SynthKind::Cloth) {
    if (grid.rows < 2 || grid.cols < 2) config_error("grid must be at least 2x2");
  } else if (kind == SynthKind::Bdlo) {
    if (num_keypoints < 7) config_error("a branched object needs at least 7 keypoints");
  } else if (num_keypoints < 2) {
    config_error("num_keypoints must be >= 2");
  }
}

CameraModel synth_camera() {
  CameraModel cam;
  cam.width = 640;
  cam.height = 480;
  cam.fx = cam.fy = 525.0;
  cam.cx = 319.5;
  cam.cy = 239.5;
  return cam;
}

SynthShape synth_shape(const SynthConfig& config_in, std::size_t frame) {
  SynthConfig c = config_in;
  if (c.size == 0.0) c.size = default_size(c.kind);
  c.validate();
  const RestShape rest = rest_shape(c);
  const Pose pose = make_pose(c, rest, frame);
  const double w = phase(c, frame);
  auto place = [&](const Point3& local) -> Point3 { return pose.rotation * local + pose.offset; };
  // Camera-frame coordinates; gen_sequence moves them to the world frame.
  const Eigen::Vector3d view = Eigen::Vector3d::UnitZ();

  SynthShape out;
  out.keypoints.frame_index = static_cast<int>(frame);
  std::vector<Point3> arm_centers;

  if (c.kind == SynthKind::Cloth) {
    const double S = c.size;
    auto surf = [&](double u, double v) { return place(cloth_local(c, rest, w, u, v)); };
    const auto steps = static_cast<std::size_t>(std::ceil(S / kSurfaceStep));
    for (std::size_t i = 0; i <= steps; ++i)
      for (std::size_t j = 0; j <= steps; ++j)
        out.surface.push_back(surf(static_cast<double>(i) / steps, static_cast<double>(j) / steps));
    const std::size_t D = 61;
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < D; ++j)
        out.dense.push_back(surf(static_cast<double>(j) / (D - 1), static_cast<double>(i) / (D - 1)));
    const auto R = c.grid.rows, C = c.grid.cols;
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t col = 0; col < C; ++col)
        out.keypoints.positions.push_back(surf(static_cast<double>(col) / (C - 1), static_cast<double>(r) / (R - 1)));
    for (auto [u, v] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}) {
      out.anchors.push_back(surf(u, v));
      out.anchor_roles.push_back(AnchorRole::Contour);
    }
    const Point3 centre = surf(0.5, 0.5);
    for (std::size_t k = 0; k < 2; ++k) {
      const Point3& corner = out.anchors[k];
      arm_centers.push_back(corner + kArmOffset * (corner - centre).normalized());
    }
  } else {
    std::vector<Curve> curves;
    if (c.kind == SynthKind::Rope) {
      auto ctrl = rope_controls(c, rest, w);
      for (auto& p : ctrl) p = place(p);
      curves.push_back(catmull_rom(ctrl));
    } else {
      for (int b = 0; b < 3; ++b) {
        auto ctrl = bdlo_controls(c, rest, w, b);
        for (auto& p : ctrl) p = place(p);
        curves.push_back(catmull_rom(ctrl));
      }
    }
    for (const auto& curve : curves) {
      out.centerlines.push_back(curve.pts);
      add_tube(curve, c.tube_radius, view, out.surface);
    }

    if (c.kind == SynthKind::Rope) {
      const Curve& curve = curves.front();
      const double L = curve.length();
      const std::size_t n = c.num_keypoints;
      for (std::size_t k = 0; k < n; ++k) out.keypoints.positions.push_back(curve.at(L * k / (n - 1)));
      for (std::size_t k = 0; k <= 300; ++k) out.dense.push_back(curve.at(L * k / 300.0));
      out.anchors = {curve.at(0.0), curve.at(L)};
      out.anchor_roles = {AnchorRole::Leaf, AnchorRole::Leaf};
      arm_centers.push_back(curve.at(0.0) - kArmOffset * curve.tangent(0.0));
      arm_centers.push_back(curve.at(L) + kArmOffset * curve.tangent(L));
    } else {
      const Point3 junction = curves.front().at(0.0);
      out.keypoints.positions.push_back(junction);
      out.dense.push_back(junction);
      const auto counts = split_count(c.num_keypoints - 1, 3);
      for (std::size_t b = 0; b < 3; ++b) {
        const Curve& curve = curves[b];
        const double L = curve.length();
        for (std::size_t k = 1; k <= counts[b]; ++k)
          out.keypoints.positions.push_back(curve.at(L * k / static_cast<double>(counts[b])));
        for (std::size_t k = 1; k <= 100; ++k) out.dense.push_back(curve.at(L * k / 100.0));
        out.anchors.push_back(curve.at(L));
        out.anchor_roles.push_back(AnchorRole::Leaf);
      }
      out.anchors.push_back(junction);
      out.anchor_roles.push_back(AnchorRole::Junction);
      for (std::size_t b = 1; b < 3; ++b) {
        const double L = curves[b].length();
        arm_centers.push_back(curves[b].at(L) + kArmOffset * curves[b].tangent(L));
      }
    }
  }
  if (c.arms)
    for (const auto& a : arm_centers) out.arms.emplace_back(a, kArmHalf);
  return out;
}

SynthSequence gen_sequence(const SynthConfig& config, const CameraModel& cam) {
  cam.validate();
  SynthSequence seq;
  seq.config = config;
  if (seq.config.size == 0.0) seq.config.size = default_size(config.kind);
  seq.config.validate();
  seq.camera = cam;
  const SynthConfig& c = seq.config;
  const double z_bg = c.object_depth + c.background_offset;
  const std::size_t W = static_cast<std::size_t>(cam.width), H = static_cast<std::size_t>(cam.height);

  auto add_noise = [&](DepthFrame& f, std::uint64_t stream) {
    if (c.noise_sigma <= 0.0) return;
    std::seed_seq seq_seed{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                           static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 rng(seq_seed);
    std::normal_distribution<double> noise(0.0, c.noise_sigma);
    for (auto& z : f.depth) z += noise(rng);
  };
  auto to_world = [&](std::vector<Point3>& pts) {
    for (auto& p : pts) p = cam.to_world(p);
  };

  seq.reference = DepthFrame(cam.width, cam.height, z_bg);
  add_noise(seq.reference, 0);

  GroundTruth& gt = seq.truth;
  gt.kind = c.kind;
  for (std::size_t t = 0; t < c.frames; ++t) {
    SynthShape shape = synth_shape(c, t);
    to_world(shape.surface);
    to_world(shape.dense);
    to_world(shape.keypoints.positions);
    to_world(shape.anchors);

    DepthFrame frame(cam.width, cam.height, z_bg);
    frame.timestamp = static_cast<double>(t) / c.frame_rate;
    std::vector<std::uint8_t> labels(W * H, kLabelBackground);
    auto splat = [&](const Point3& p, std::uint8_t label, bool must_be_visible) {
      const auto ip = project_point(p, cam);
      if (!ip) {
        if (must_be_visible) config_error("object leaves the image at frame " + std::to_string(t));
        return;
      }
      const PixelIndex px = ip->pixel();
      const std::size_t k = static_cast<std::size_t>(px.row) * W + static_cast<std::size_t>(px.col);
      if (ip->depth < frame.depth[k]) {
        frame.depth[k] = ip->depth;
        labels[k] = label;
      }
    };
    for (const auto& p : shape.surface) splat(p, kLabelObject, true);

    PointCloud exclusion;
    for (const auto& [centre_cam, half] : shape.arms) {
      const Point3 centre = cam.to_world(centre_cam);
      for (const auto& p : box_samples(centre_cam, half, kSurfaceStep)) splat(cam.to_world(p), kLabelArm, false);
      for (const auto& p : box_samples(centre, half, 0.005)) exclusion.points.push_back(p);
    }
    add_noise(frame, t + 1);

    seq.frames.push_back(std::move(frame));
    seq.exclusion.push_back(std::move(exclusion));
    gt.keypoints.push_back(std::move(shape.keypoints));
    gt.dense.push_back(std::move(shape.dense));
    gt.anchors.push_back(std::move(shape.anchors));
    gt.anchor_roles = shape.anchor_roles;
    gt.labels.push_back(std::move(labels));
  }
  return seq;
}

std::vector<KeypointSet> align_truth(const KeypointSet& first, const GroundTruth& truth) {
  if (truth.dense.empty() || truth.dense.front().empty())
    throw Error(ErrorKind::InvalidInput, "truth", "ground truth has no material samples");
  std::vector<std::size_t> tie(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < truth.dense[0].size(); ++m) {
      const double d = (truth.dense[0][m] - first.positions[i]).squaredNorm();
      if (d < best) {
        best = d;
        tie[i] = m;
      }
    }
  }
  std::vector<KeypointSet> out(truth.dense.size());
  for (std::size_t t = 0; t < truth.dense.size(); ++t) {
    out[t].frame_index = static_cast<int>(t);
    for (auto m : tie) out[t].positions.push_back(truth.dense[t].at(m));
  }
  return out;
}

TruthReport evaluate_against_truth(const Trajectory& traj, const std::vector<KeypointSet>& truth) {
  if (traj.frames() != truth.size())
    throw Error(
        ErrorKind::InvalidInput, "truth",
        "trajectory has " + std::to_string(traj.frames()) + " frames, ground truth " + std::to_string(truth.size()));
  TruthReport rep;
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const auto& x = traj.keypoints[t].positions;
    const auto& g = truth[t].positions;
    if (x.size() != g.size())
      throw Error(ErrorKind::InvalidInput, "truth", "keypoint count differs at frame " + std::to_string(t));
    double err = 0.0;
    std::size_t swapped = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double own = (x[i] - g[i]).norm();
      err += own;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (j != i && (x[i] - g[j]).norm() < own) {
          ++swapped;
          break;
        }
      }
    }
    total += err;
    count += x.size();
    rep.mean_error_mm.push_back(x.empty() ? 0.0 : 1000.0 * err / static_cast<double>(x.size()));
    rep.swapped.push_back(swapped);
    if (swapped > 0) ++rep.swap_frames;
  }
  rep.mean_error_all_mm = count ? 1000.0 * total / static_cast<double>(count) : 0.0;
  return rep;
}

}  // namespace deformtrack
