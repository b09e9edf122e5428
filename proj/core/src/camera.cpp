#include "deformtrack/camera.hpp"

#include <cmath>
#include <string>

#include "deformtrack/error.hpp"

namespace deformtrack {

bool is_valid_depth(double z) { return std::isfinite(z) && z > 0.0; }

std::size_t BinaryMask::count() const {
  std::size_t n = 0;
  for (auto v : data) n += v != 0;
  return n;
}

std::vector<PixelIndex> BinaryMask::pixels() const {
  std::vector<PixelIndex> out;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      if (get(r, c)) out.push_back({r, c});
  return out;
}

void CameraModel::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Configuration, "camera", msg); };
  if (!(fx > 0.0) || !(fy > 0.0)) fail("focal lengths must be positive");
  if (width <= 0 || height <= 0) fail("image size must be positive");
  if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height)) fail("principal point must lie inside the image");
  if (!rotation.allFinite() || !translation.allFinite()) fail("extrinsics must be finite");
  const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-9) fail("rotation is not orthonormal");
}

PixelIndex ImagePoint::pixel() const {
  return {static_cast<int>(std::floor(v + 0.5)), static_cast<int>(std::floor(u + 0.5))};
}

void check_frame_matches(const DepthFrame& frame, const CameraModel& cam) {
  if (frame.width != cam.width || frame.height != cam.height) {
    throw Error(ErrorKind::Configuration, "depth",
                "depth frame is " + std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                    " but camera expects " + std::to_string(cam.width) + "x" + std::to_string(cam.height));
  }
  if (frame.depth.size() != static_cast<std::size_t>(frame.width) * frame.height) {
    throw Error(ErrorKind::Configuration, "depth", "depth buffer size does not match dimensions");
  }
}

Point3 lift_pixel(int row, int col, double z, const CameraModel& cam) {
  const Eigen::Vector3d p_cam((col - cam.cx) * z / cam.fx, (row - cam.cy) * z / cam.fy, z);
  return cam.to_world(p_cam);
}

namespace {

template <typename Keep>
PointCloud lift_impl(const DepthFrame& frame, const CameraModel& cam, int stride, Keep keep) {
  check_frame_matches(frame, cam);
  if (stride < 1) throw Error(ErrorKind::Configuration, "depth", "stride must be >= 1");
  PointCloud cloud;
  for (int r = 0; r < frame.height; r += stride) {
    for (int c = 0; c < frame.width; c += stride) {
      const double z = frame.at(r, c);
      if (!is_valid_depth(z) || !keep(r, c)) continue;
      cloud.points.push_back(lift_pixel(r, c, z, cam));
      cloud.pixels.push_back({r, c});
    }
  }
  return cloud;
}

}  // namespace

PointCloud lift_depth(const DepthFrame& frame, const CameraModel& cam, int stride) {
  return lift_impl(frame, cam, stride, [](int, int) { return true; });
}

PointCloud lift_depth_masked(const DepthFrame& frame, const CameraModel& cam, const BinaryMask& mask, int stride) {
  if (mask.width != frame.width || mask.height != frame.height)
    throw Error(ErrorKind::Configuration, "depth", "mask does not match depth frame");
  return lift_impl(frame, cam, stride, [&](int r, int c) { return mask.get(r, c); });
}

std::optional<ImagePoint> project_point(const Point3& p, const CameraModel& cam) {
  const Eigen::Vector3d pc = cam.to_camera(p);
  if (!(pc.z() > 0.0) || !pc.allFinite()) return std::nullopt;
  ImagePoint ip{cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy, pc.z()};
  // A pixel center at integer (u, v) covers [u-0.5, u+0.5).
  if (ip.u < -0.5 || ip.v < -0.5 || ip.u >= cam.width - 0.5 || ip.v >= cam.height - 0.5) return std::nullopt;
  return ip;
}

}  // namespace deformtrack
