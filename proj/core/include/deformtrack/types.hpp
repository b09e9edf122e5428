#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace deformtrack {

/// World-frame position in meters.
using Point3 = Eigen::Vector3d;

/// Integer pixel coordinate; `col` is u, `row` is v.
struct PixelIndex {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
  friend auto operator<=>(const PixelIndex&, const PixelIndex&) = default;
};

/// Unordered set of world points, optionally remembering the depth pixel each
/// point was lifted from. When `pixels` is non-empty it is parallel to `points`.
struct PointCloud {
  std::vector<Point3> points;
  std::vector<PixelIndex> pixels;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_pixels() const { return !pixels.empty(); }
};

/// Row-major H x W grid of z-depth values in meters. Values <= 0 or
/// non-finite mark invalid pixels.
struct DepthFrame {
  int width = 0;
  int height = 0;
  std::vector<double> depth;
  double timestamp = 0.0;

  DepthFrame() = default;
  DepthFrame(int w, int h, double fill = 0.0) : width(w), height(h), depth(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int row, int col) { return depth[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return depth[static_cast<std::size_t>(row) * width + col]; }
};

bool is_valid_depth(double z);

/// H x W boolean image. Also used for pixel selections such as the depth
/// difference mask.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BinaryMask() = default;
  BinaryMask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

  bool in_bounds(int row, int col) const { return row >= 0 && col >= 0 && row < height && col < width; }
  bool get(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col] != 0; }
  void set(int row, int col, bool v = true) { data[static_cast<std::size_t>(row) * width + col] = v ? 1 : 0; }
  bool test(int row, int col) const { return in_bounds(row, col) && get(row, col); }
  std::size_t count() const;
  std::vector<PixelIndex> pixels() const;
};

}  // namespace deformtrack
