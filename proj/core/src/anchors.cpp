#include "deformtrack/anchors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "deformtrack/error.hpp"
#include "deformtrack/raster.hpp"

namespace deformtrack {

const char* to_string(AnchorRole role) {
  switch (role) {
    case AnchorRole::Leaf:
      return "leaf";
    case AnchorRole::Junction:
      return "junction";
    case AnchorRole::Contour:
      return "contour";
  }
  return "unknown";
}

AnchorRole anchor_role_from_string(const std::string& s) {
  if (s == "leaf") return AnchorRole::Leaf;
  if (s == "junction") return AnchorRole::Junction;
  if (s == "contour") return AnchorRole::Contour;
  throw Error(ErrorKind::InvalidInput, "anchor_role", "unknown anchor role '" + s + "'");
}

double AnchorBranch::length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) len += (polyline[i] - polyline[i - 1]).norm();
  return len;
}

std::size_t AnchorDetection::count(AnchorRole role) const {
  return static_cast<std::size_t>(std::count(roles.begin(), roles.end(), role));
}

std::vector<std::size_t> fps(std::span<const Point3> points, std::size_t k, std::span<const Point3> seeds) {
  if (k > points.size())
    throw Error(ErrorKind::InvalidInput, "fps",
                "requested " + std::to_string(k) + " samples from " + std::to_string(points.size()) + " points");
  std::vector<std::size_t> selected;
  if (k == 0) return selected;
  selected.reserve(k);

  const std::size_t n = points.size();
  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  auto absorb = [&](const Point3& s) {
    for (std::size_t i = 0; i < n; ++i) mind[i] = std::min(mind[i], (points[i] - s).squaredNorm());
  };
  std::vector<char> taken(n, 0);
  if (seeds.empty()) {
    selected.push_back(0);
    taken[0] = 1;
    absorb(points[0]);
  } else {
    for (const auto& s : seeds) absorb(s);
  }
  while (selected.size() < k) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (best == n || mind[i] > mind[best]) best = i;
    }
    taken[best] = 1;
    selected.push_back(best);
    absorb(points[best]);
  }
  return selected;
}

namespace {

PixelIndex extend_leaf(const BinaryMask& mask, const std::vector<PixelIndex>& path_from_leaf) {
  const PixelIndex leaf = path_from_leaf.front();
  if (path_from_leaf.size() < 2) return leaf;
  const PixelIndex back = path_from_leaf[std::min<std::size_t>(6, path_from_leaf.size() - 1)];
  double dr = leaf.row - back.row;
  double dc = leaf.col - back.col;
  const double norm = std::hypot(dr, dc);
  if (norm == 0.0) return leaf;
  dr /= norm;
  dc /= norm;
  PixelIndex last = leaf;
  const double max_steps = static_cast<double>(mask.width + mask.height);
  for (double t = 0.5; t < max_steps; t += 0.5) {
    const PixelIndex p{static_cast<int>(std::lround(leaf.row + t * dr)),
                       static_cast<int>(std::lround(leaf.col + t * dc))};
    if (!mask.test(p.row, p.col)) break;
    last = p;
  }
  return last;
}

}  // namespace

AnchorDetection detect_1d_anchors(const PointCloud& cloud, const CameraModel& cam, const Detect1DParams& params) {
  const BinaryMask mask = rasterize_mask(cloud, cam, params.dilation_px);
  const BinaryMask skel = skeletonize(mask);
  const auto pixels = skel.pixels();
  if (pixels.empty()) throw Error(ErrorKind::DetectionFailed, "skeleton", "empty skeleton");

  const SkeletonGraph mst = build_mst(pixels, params.mst);
  const SkeletonAnalysis sk = analyze_skeleton(mst, params.skeleton);
  const PixelLookup lookup(cloud, cam);

  const std::size_t num_leaves = sk.leaves.size();
  std::vector<PixelIndex> key_pixels = sk.leaves;
  key_pixels.insert(key_pixels.end(), sk.junctions.begin(), sk.junctions.end());

  if (params.extend_leaves) {
    for (std::size_t leaf = 0; leaf < num_leaves; ++leaf) {
      for (const auto& br : sk.branches) {
        if (br.from == leaf) {
          key_pixels[leaf] = extend_leaf(mask, br.path);
          break;
        }
        if (br.to == leaf) {
          std::vector<PixelIndex> rev(br.path.rbegin(), br.path.rend());
          key_pixels[leaf] = extend_leaf(mask, rev);
          break;
        }
      }
    }
  }

  AnchorDetection out;
  std::vector<long> slot(key_pixels.size(), -1);
  for (std::size_t k = 0; k < key_pixels.size(); ++k) {
    const auto p = lookup.lift(key_pixels[k], params.lift_radius_px);
    if (!p) continue;
    slot[k] = static_cast<long>(out.positions.size());
    out.positions.push_back(*p);
    out.roles.push_back(k < num_leaves ? AnchorRole::Leaf : AnchorRole::Junction);
  }

  for (const auto& br : sk.branches) {
    if (slot[br.from] < 0 || slot[br.to] < 0) continue;
    AnchorBranch ab;
    ab.from = static_cast<std::size_t>(slot[br.from]);
    ab.to = static_cast<std::size_t>(slot[br.to]);
    ab.polyline.push_back(out.positions[ab.from]);
    for (std::size_t i = 1; i + 1 < br.path.size(); ++i)
      if (const auto p = lookup.lift(br.path[i], params.lift_radius_px)) ab.polyline.push_back(*p);
    ab.polyline.push_back(out.positions[ab.to]);
    out.branches.push_back(std::move(ab));
  }

  if (out.count(AnchorRole::Leaf) < 2)
    throw Error(ErrorKind::DetectionFailed, "anchors",
                "found " + std::to_string(out.count(AnchorRole::Leaf)) + " leaf anchors, need at least 2");
  return out;
}

AnchorDetection detect_2d_anchors(const PointCloud& cloud, const CameraModel& cam, std::size_t num_contour_anchors,
                                  const Detect2DParams& params) {
  const BinaryMask mask = largest_component(rasterize_mask(cloud, cam, params.dilation_px));
  const auto boundary = trace_boundary(mask);
  if (boundary.empty()) throw Error(ErrorKind::DetectionFailed, "contour", "mask has no region");

  const PixelLookup lookup(cloud, cam);
  AnchorDetection out;
  for (const auto& px : boundary)
    if (const auto p = lookup.lift(px, params.lift_radius_px)) out.contour.push_back(*p);
  if (out.contour.empty()) throw Error(ErrorKind::DetectionFailed, "contour", "contour could not be lifted to 3D");
  if (num_contour_anchors == 0) return out;
  if (num_contour_anchors > out.contour.size())
    throw Error(ErrorKind::DetectionFailed, "contour", "contour has fewer points than requested anchors");

  Point3 centroid = Point3::Zero();
  for (const auto& p : cloud.points) centroid += p;
  centroid /= static_cast<double>(cloud.size());
  std::size_t seed = 0;
  double far = -1.0;
  for (std::size_t i = 0; i < out.contour.size(); ++i) {
    const double d = (out.contour[i] - centroid).squaredNorm();
    if (d > far) {
      far = d;
      seed = i;
    }
  }
  const Point3 seed_point = out.contour[seed];
  out.positions.push_back(seed_point);
  out.roles.push_back(AnchorRole::Contour);
  for (auto i : fps(out.contour, num_contour_anchors - 1, std::span<const Point3>(&seed_point, 1))) {
    out.positions.push_back(out.contour[i]);
    out.roles.push_back(AnchorRole::Contour);
  }
  return out;
}

AnchorDetection extract_corners(const AnchorDetection& detection) {
  const auto& P = detection.positions;
  const std::size_t n = P.size();
  if (n < 4) throw Error(ErrorKind::DetectionFailed, "corners", "need at least 4 contour anchors");

  std::array<Point3, 4> pick{P[0], P[1], P[2], P[3]};
  double best = -1.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          const double s = (P[a] - P[b]).norm() + (P[a] - P[c]).norm() + (P[a] - P[d]).norm() + (P[b] - P[c]).norm() +
                           (P[b] - P[d]).norm() + (P[c] - P[d]).norm();
          if (s > best + 1e-12) {
            best = s;
            pick = {P[a], P[b], P[c], P[d]};
          }
        }

  AnchorDetection out;
  out.contour = detection.contour;
  if (out.contour.empty()) {
    out.positions.assign(pick.begin(), pick.end());
    out.roles.assign(4, AnchorRole::Contour);
    return out;
  }
  const auto& C = out.contour;
  std::array<std::size_t, 4> idx{};
  for (int k = 0; k < 4; ++k) {
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < C.size(); ++i) {
      const double d = (C[i] - pick[static_cast<std::size_t>(k)]).squaredNorm();
      if (d < bd) {
        bd = d;
        idx[static_cast<std::size_t>(k)] = i;
      }
    }
  }
  // Coordinate ascent on the summed pairwise distance.
  for (int round = 0; round < 100; ++round) {
    bool moved = false;
    for (std::size_t k = 0; k < 4; ++k) {
      auto score = [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t o = 0; o < 4; ++o)
          if (o != k) s += (C[i] - C[idx[o]]).norm();
        return s;
      };
      std::size_t arg = idx[k];
      double top = score(arg);
      for (std::size_t i = 0; i < C.size(); ++i) {
        if (std::find(idx.begin(), idx.end(), i) != idx.end()) continue;
        const double s = score(i);
        if (s > top + 1e-12) {
          top = s;
          arg = i;
        }
      }
      if (arg != idx[k]) {
        idx[k] = arg;
        moved = true;
      }
    }
    if (!moved) break;
  }
  std::sort(idx.begin(), idx.end());
  for (auto i : idx) {
    out.positions.push_back(C[i]);
    out.roles.push_back(AnchorRole::Contour);
  }
  return out;
}

}  // namespace deformtrack
