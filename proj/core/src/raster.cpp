#include "deformtrack/raster.hpp"

#include <array>
#include <limits>
#include <set>

#include "deformtrack/error.hpp"

namespace deformtrack {

BinaryMask dilate(const BinaryMask& mask, int radius_px) {
  if (radius_px <= 0) return mask;
  // Separable square dilation: rows then columns.
  BinaryMask tmp(mask.width, mask.height);
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      if (!mask.get(r, c)) continue;
      for (int dc = -radius_px; dc <= radius_px; ++dc)
        if (tmp.in_bounds(r, c + dc)) tmp.set(r, c + dc);
    }
  }
  BinaryMask out(mask.width, mask.height);
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      if (!tmp.get(r, c)) continue;
      for (int dr = -radius_px; dr <= radius_px; ++dr)
        if (out.in_bounds(r + dr, c)) out.set(r + dr, c);
    }
  }
  return out;
}

BinaryMask rasterize_mask(const PointCloud& cloud, const CameraModel& cam, int dilation_px) {
  if (cloud.empty()) throw Error(ErrorKind::DetectionFailed, "rasterize", "empty cloud");
  BinaryMask mask(cam.width, cam.height);
  std::size_t hits = 0;
  for (const auto& p : cloud.points) {
    const auto ip = project_point(p, cam);
    if (!ip) continue;
    const PixelIndex px = ip->pixel();
    if (!mask.in_bounds(px.row, px.col)) continue;
    mask.set(px.row, px.col);
    ++hits;
  }
  if (hits == 0) throw Error(ErrorKind::DetectionFailed, "rasterize", "no cloud point projects into the image");
  return dilate(mask, dilation_px);
}

BinaryMask largest_component(const BinaryMask& mask) {
  std::vector<int> label(mask.data.size(), -1);
  std::vector<std::size_t> sizes;
  std::vector<PixelIndex> stack;
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * mask.width + c;
      if (!mask.data[idx] || label[idx] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      sizes.push_back(0);
      label[idx] = id;
      stack.assign(1, {r, c});
      while (!stack.empty()) {
        const PixelIndex p = stack.back();
        stack.pop_back();
        ++sizes.back();
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = p.row + dr, cc = p.col + dc;
            if (!mask.test(rr, cc)) continue;
            const std::size_t j = static_cast<std::size_t>(rr) * mask.width + cc;
            if (label[j] >= 0) continue;
            label[j] = id;
            stack.push_back({rr, cc});
          }
        }
      }
    }
  }
  BinaryMask out(mask.width, mask.height);
  if (sizes.empty()) return out;
  int best = 0;
  for (int i = 1; i < static_cast<int>(sizes.size()); ++i)
    if (sizes[static_cast<std::size_t>(i)] > sizes[static_cast<std::size_t>(best)]) best = i;
  for (std::size_t i = 0; i < label.size(); ++i) out.data[i] = label[i] == best;
  return out;
}

std::vector<PixelIndex> trace_boundary(const BinaryMask& mask) {
  // Clockwise (image y down) starting west.
  static constexpr std::array<std::array<int, 2>, 8> kDirs{
      {{0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}}};

  PixelIndex start{-1, -1};
  for (int r = 0; r < mask.height && start.row < 0; ++r)
    for (int c = 0; c < mask.width; ++c)
      if (mask.get(r, c)) {
        start = {r, c};
        break;
      }
  if (start.row < 0) return {};

  auto dir_of = [](PixelIndex from, PixelIndex to) {
    for (int d = 0; d < 8; ++d)
      if (from.row + kDirs[d][0] == to.row && from.col + kDirs[d][1] == to.col) return d;
    return 0;
  };

  std::vector<PixelIndex> raw{start};
  PixelIndex cur = start;
  PixelIndex back{start.row, start.col - 1};  // west of the first pixel is background
  PixelIndex second{-1, -1};
  const std::size_t limit = 4 * mask.data.size() + 8;
  for (std::size_t step = 0; step < limit; ++step) {
    const int d0 = dir_of(cur, back);
    PixelIndex next{-1, -1};
    PixelIndex prev = back;
    for (int k = 1; k <= 8; ++k) {
      const int d = (d0 + k) % 8;
      const PixelIndex cand{cur.row + kDirs[d][0], cur.col + kDirs[d][1]};
      if (mask.test(cand.row, cand.col)) {
        next = cand;
        break;
      }
      prev = cand;
    }
    if (next.row < 0) break;  // isolated pixel
    if (second.row < 0) {
      second = next;
    } else if (cur == start && next == second) {
      break;
    }
    back = prev;
    cur = next;
    raw.push_back(cur);
  }
  if (raw.size() > 1 && raw.back() == start) raw.pop_back();

  std::vector<PixelIndex> out;
  std::set<PixelIndex> seen;
  for (const auto& p : raw)
    if (seen.insert(p).second) out.push_back(p);
  return out;
}

PixelLookup::PixelLookup(const PointCloud& cloud, const CameraModel& cam)
    : mask_(cam.width, cam.height),
      slot_(static_cast<std::size_t>(cam.width) * cam.height, -1),
      depth_(slot_.size(), std::numeric_limits<double>::infinity()) {
  points_.reserve(cloud.size());
  for (const auto& p : cloud.points) {
    const auto ip = project_point(p, cam);
    if (!ip) continue;
    const PixelIndex px = ip->pixel();
    if (!mask_.in_bounds(px.row, px.col)) continue;
    const std::size_t idx = static_cast<std::size_t>(px.row) * cam.width + px.col;
    if (ip->depth < depth_[idx]) {
      depth_[idx] = ip->depth;
      if (slot_[idx] < 0) {
        slot_[idx] = static_cast<int>(points_.size());
        points_.push_back(p);
      } else {
        points_[static_cast<std::size_t>(slot_[idx])] = p;
      }
      mask_.set(px.row, px.col);
    }
  }
}

bool PixelLookup::occupied(PixelIndex px) const { return mask_.test(px.row, px.col); }

std::optional<Point3> PixelLookup::lift(PixelIndex px, int max_radius_px) const {
  int best_d2 = std::numeric_limits<int>::max();
  int best_slot = -1;
  for (int dr = -max_radius_px; dr <= max_radius_px; ++dr) {
    for (int dc = -max_radius_px; dc <= max_radius_px; ++dc) {
      const int r = px.row + dr, c = px.col + dc;
      if (!mask_.test(r, c)) continue;
      const int d2 = dr * dr + dc * dc;
      if (d2 < best_d2) {
        best_d2 = d2;
        best_slot = slot_[static_cast<std::size_t>(r) * mask_.width + c];
      }
    }
  }
  if (best_slot < 0) return std::nullopt;
  return points_[static_cast<std::size_t>(best_slot)];
}

}  // namespace deformtrack
