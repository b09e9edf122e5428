#include "deformtrack/init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "deformtrack/error.hpp"

namespace deformtrack {

namespace {

bool lex_less(const Point3& a, const Point3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

double sq(const Point3& a, const Point3& b) { return (a - b).squaredNorm(); }

// Held-Karp over the points strictly between start and end.
std::vector<std::size_t> order_exact(std::span<const Point3> pts, std::size_t start, std::size_t end) {
  std::vector<std::size_t> mid;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (i != start && i != end) mid.push_back(i);
  const std::size_t m = mid.size();
  if (m == 0) return {start, end};
  const std::size_t full = (std::size_t{1} << m) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp((full + 1) * m, inf);
  std::vector<int> parent((full + 1) * m, -1);
  auto at = [m](std::size_t mask, std::size_t j) { return mask * m + j; };
  for (std::size_t j = 0; j < m; ++j) dp[at(std::size_t{1} << j, j)] = sq(pts[start], pts[mid[j]]);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double cur = dp[at(mask, j)];
      if (cur == inf) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double cand = cur + sq(pts[mid[j]], pts[mid[k]]);
        if (cand < dp[at(next, k)]) {
          dp[at(next, k)] = cand;
          parent[at(next, k)] = static_cast<int>(j);
        }
      }
    }
  }
  std::size_t last = 0;
  double best = inf;
  for (std::size_t j = 0; j < m; ++j) {
    const double c = dp[at(full, j)] + sq(pts[mid[j]], pts[end]);
    if (c < best) {
      best = c;
      last = j;
    }
  }
  std::vector<std::size_t> rev{end};
  std::size_t mask = full;
  long j = static_cast<long>(last);
  while (j >= 0) {
    rev.push_back(mid[static_cast<std::size_t>(j)]);
    const int p = parent[at(mask, static_cast<std::size_t>(j))];
    mask &= ~(std::size_t{1} << static_cast<std::size_t>(j));
    j = p;
  }
  rev.push_back(start);
  return {rev.rbegin(), rev.rend()};
}

std::vector<std::size_t> order_heuristic(std::span<const Point3> pts, std::size_t start, std::size_t end) {
  const std::size_t n = pts.size();
  std::vector<char> used(n, 0);
  used[start] = used[end] = 1;
  std::vector<std::size_t> path{start};
  while (path.size() + 1 < n) {
    std::size_t best = n;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double d = sq(pts[path.back()], pts[i]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    used[best] = 1;
    path.push_back(best);
  }
  path.push_back(end);

  // 2-opt with fixed endpoints.
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      for (std::size_t k = i + 1; k + 1 < path.size(); ++k) {
        const double delta = sq(pts[path[i - 1]], pts[path[k]]) + sq(pts[path[i]], pts[path[k + 1]]) -
                             sq(pts[path[i - 1]], pts[path[i]]) - sq(pts[path[k]], pts[path[k + 1]]);
        if (delta < -1e-15) {
          std::reverse(path.begin() + static_cast<long>(i), path.begin() + static_cast<long>(k) + 1);
          improved = true;
        }
      }
    }
  }
  return path;
}

std::vector<std::size_t> order_chain_indices(std::span<const Point3> pts, std::size_t start, std::size_t end,
                                             std::size_t exact_limit) {
  if (pts.size() <= exact_limit) return order_exact(pts, start, end);
  return order_heuristic(pts, start, end);
}

double point_segment_distance2(const Point3& p, const Point3& a, const Point3& b) {
  const Eigen::Vector3d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).squaredNorm();
}

double polyline_distance2(const Point3& p, const std::vector<Point3>& poly) {
  if (poly.size() == 1) return sq(p, poly.front());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < poly.size(); ++i) best = std::min(best, point_segment_distance2(p, poly[i - 1], poly[i]));
  return best;
}

// `count` points spaced evenly by arc length along `poly` (count >= 2),
// with the first and last equal to the polyline ends.
std::vector<Point3> resample(const std::vector<Point3>& poly, std::size_t count) {
  std::vector<double> cum(poly.size(), 0.0);
  for (std::size_t i = 1; i < poly.size(); ++i) cum[i] = cum[i - 1] + (poly[i] - poly[i - 1]).norm();
  const double total = cum.back();
  std::vector<Point3> out;
  out.reserve(count);
  std::size_t seg = 1;
  for (std::size_t k = 0; k < count; ++k) {
    if (k == 0) {
      out.push_back(poly.front());
      continue;
    }
    if (k + 1 == count) {
      out.push_back(poly.back());
      continue;
    }
    const double s = total * static_cast<double>(k) / static_cast<double>(count - 1);
    while (seg + 1 < poly.size() && cum[seg] < s) ++seg;
    const double span = cum[seg] - cum[seg - 1];
    const double t = span > 0.0 ? (s - cum[seg - 1]) / span : 0.0;
    out.push_back(poly[seg - 1] + t * (poly[seg] - poly[seg - 1]));
  }
  return out;
}

}  // namespace

std::vector<Point3> warm_start_1d(const PointCloud& cloud, const AnchorDetection& anchors, std::size_t n_total) {
  if (n_total <= anchors.size())
    throw Error(ErrorKind::InvalidInput, "warm-start", "keypoint count must exceed the anchor count");
  if (cloud.size() < n_total)
    throw Error(ErrorKind::InvalidInput, "warm-start",
                "cloud has " + std::to_string(cloud.size()) + " points, need at least " + std::to_string(n_total));
  std::vector<Point3> out = anchors.positions;
  for (auto i : fps(cloud.points, n_total - anchors.size(), anchors.positions)) out.push_back(cloud.points[i]);
  return out;
}

std::vector<std::size_t> order_chain(std::span<const Point3> points, const Point3& leaf_a, const Point3& leaf_b,
                                     std::size_t exact_limit) {
  auto find = [&](const Point3& p, std::size_t skip) {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (i != skip && points[i] == p) return i;
    throw Error(ErrorKind::InvalidInput, "order-chain", "leaf anchor is not one of the points");
  };
  const std::size_t a = find(leaf_a, points.size());
  const std::size_t b = find(leaf_b, a);
  return order_chain_indices(points, a, b, exact_limit);
}

double chain_cost(std::span<const Point3> points, std::span<const std::size_t> order) {
  double c = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) c += sq(points[order[i - 1]], points[order[i]]);
  return c;
}

KeypointLayout build_1d_topology(std::span<const Point3> anchor_positions, std::span<const AnchorRole> anchor_roles,
                                 std::span<const BranchChain> branches) {
  const std::size_t num_anchors = anchor_positions.size();
  if (num_anchors < 2 || anchor_roles.size() != num_anchors)
    throw Error(ErrorKind::TopologyFailed, "topology", "need at least two anchors with roles");
  if (branches.size() + 1 != num_anchors)
    throw Error(ErrorKind::TopologyFailed, "topology",
                std::to_string(branches.size()) + " branches cannot connect " + std::to_string(num_anchors) +
                    " anchors into a tree");

  std::vector<std::vector<std::size_t>> incident(num_anchors);
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const auto& br = branches[b];
    if (br.from >= num_anchors || br.to >= num_anchors || br.from == br.to)
      throw Error(ErrorKind::TopologyFailed, "topology", "branch has invalid endpoints");
    incident[br.from].push_back(b);
    incident[br.to].push_back(b);
  }

  std::size_t root = num_anchors;
  for (std::size_t a = 0; a < num_anchors; ++a) {
    if (anchor_roles[a] != AnchorRole::Leaf) continue;
    if (root == num_anchors || lex_less(anchor_positions[a], anchor_positions[root])) root = a;
  }
  if (root == num_anchors) root = 0;

  KeypointLayout out;
  auto& pos = out.keypoints.positions;
  auto& topo = out.topology;
  std::vector<long> anchor_kp(num_anchors, -1);
  int group = 0;

  anchor_kp[root] = 0;
  pos.push_back(anchor_positions[root]);
  // Explicit stack of (anchor, branch we arrived by).
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, branches.size()}};
  std::vector<char> branch_done(branches.size(), 0);
  while (!stack.empty()) {
    const auto [a, via] = stack.back();
    stack.pop_back();
    std::vector<std::size_t> children;
    for (auto b : incident[a])
      if (b != via && !branch_done[b]) children.push_back(b);
    auto far_of = [&](std::size_t b) { return branches[b].from == a ? branches[b].to : branches[b].from; };
    std::sort(children.begin(), children.end(), [&](std::size_t x, std::size_t y) {
      return lex_less(anchor_positions[far_of(x)], anchor_positions[far_of(y)]);
    });
    // Visit children in order: process depth-first by pushing in reverse.
    std::vector<std::pair<std::size_t, std::size_t>> next;
    for (auto b : children) {
      branch_done[b] = 1;
      const std::size_t far = far_of(b);
      if (anchor_kp[far] >= 0) throw Error(ErrorKind::TopologyFailed, "topology", "branches form a cycle");
      std::vector<Point3> interior = branches[b].interior;
      if (branches[b].from != a) std::reverse(interior.begin(), interior.end());
      std::size_t prev = static_cast<std::size_t>(anchor_kp[a]);
      for (const auto& p : interior) {
        pos.push_back(p);
        const std::size_t idx = pos.size() - 1;
        topo.edges.push_back({prev, idx});
        topo.edge_groups.push_back(group);
        prev = idx;
      }
      pos.push_back(anchor_positions[far]);
      anchor_kp[far] = static_cast<long>(pos.size() - 1);
      topo.edges.push_back({prev, pos.size() - 1});
      topo.edge_groups.push_back(group);
      ++group;
      next.emplace_back(far, b);
    }
    for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back(*it);
  }
  for (std::size_t a = 0; a < num_anchors; ++a)
    if (anchor_kp[a] < 0) throw Error(ErrorKind::TopologyFailed, "topology", "branches leave an anchor disconnected");

  topo.object_class = ObjectClass::OneDim;
  topo.num_keypoints = pos.size();
  for (std::size_t a = 0; a < num_anchors; ++a)
    topo.anchors.push_back({static_cast<std::size_t>(anchor_kp[a]), anchor_roles[a]});
  std::sort(topo.anchors.begin(), topo.anchors.end(),
            [](const AnchorRef& x, const AnchorRef& y) { return x.index < y.index; });
  sort_edges(topo);
  topo.validate();
  return out;
}

std::vector<std::size_t> allocate_branch_keypoints(std::span<const double> branch_lengths, std::size_t interior) {
  const std::size_t nb = branch_lengths.size();
  if (nb == 0) return {};
  if (interior < 2 * nb)
    throw Error(
        ErrorKind::InvalidInput, "warm-start",
        std::to_string(interior) + " interior keypoints cannot give " + std::to_string(nb) + " branches two each");
  double total = 0.0;
  for (double l : branch_lengths) total += std::max(l, 0.0);
  std::vector<double> quota(nb);
  std::vector<std::size_t> alloc(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    quota[b] = total > 0.0 ? interior * std::max(branch_lengths[b], 0.0) / total
                           : static_cast<double>(interior) / static_cast<double>(nb);
    alloc[b] = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(quota[b])));
  }
  std::size_t sum = std::accumulate(alloc.begin(), alloc.end(), std::size_t{0});
  std::vector<std::size_t> order(nb);
  std::iota(order.begin(), order.end(), std::size_t{0});
  while (sum < interior) {
    // Largest shortfall first, lowest branch id on ties.
    std::size_t best = 0;
    double gap = -std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb; ++b) {
      const double g = quota[b] - static_cast<double>(alloc[b]);
      if (g > gap) {
        gap = g;
        best = b;
      }
    }
    ++alloc[best];
    ++sum;
  }
  while (sum > interior) {
    std::size_t best = nb;
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb; ++b) {
      if (alloc[b] <= 2) continue;
      const double e = static_cast<double>(alloc[b]) - quota[b];
      if (e > excess) {
        excess = e;
        best = b;
      }
    }
    --alloc[best];
    --sum;
  }
  return alloc;
}

KeypointLayout layout_1d(const PointCloud& cloud, const AnchorDetection& anchors, std::size_t n_total, bool respace) {
  const std::size_t num_anchors = anchors.size();
  if (anchors.branches.empty()) throw Error(ErrorKind::TopologyFailed, "topology", "no skeleton branches detected");
  if (n_total <= num_anchors)
    throw Error(ErrorKind::InvalidInput, "warm-start", "keypoint count must exceed the anchor count");
  if (cloud.size() < n_total)
    throw Error(ErrorKind::InvalidInput, "warm-start", "cloud smaller than the requested keypoint count");

  const std::size_t nb = anchors.branches.size();
  std::vector<double> lengths(nb);
  for (std::size_t b = 0; b < nb; ++b) lengths[b] = anchors.branches[b].length();
  const auto alloc = allocate_branch_keypoints(lengths, n_total - num_anchors);

  std::vector<std::vector<Point3>> members(nb);
  for (const auto& p : cloud.points) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb; ++b) {
      const double d = polyline_distance2(p, anchors.branches[b].polyline);
      if (d < bd) {
        bd = d;
        best = b;
      }
    }
    members[best].push_back(p);
  }

  std::vector<BranchChain> chains;
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& br = anchors.branches[b];
    if (members[b].size() < alloc[b])
      throw Error(ErrorKind::InvalidInput, "warm-start",
                  "branch " + std::to_string(b) + " has too few points for its keypoints");
    const Point3 seeds[2] = {anchors.positions[br.from], anchors.positions[br.to]};
    std::vector<Point3> pts{seeds[0]};
    for (auto i : fps(members[b], alloc[b], seeds)) pts.push_back(members[b][i]);
    pts.push_back(seeds[1]);
    const auto order = order_chain_indices(pts, 0, pts.size() - 1, 16);
    BranchChain chain{br.from, br.to, {}};
    for (std::size_t k = 1; k + 1 < order.size(); ++k) chain.interior.push_back(pts[order[k]]);
    if (respace) {
      std::vector<Point3> poly{seeds[0]};
      poly.insert(poly.end(), chain.interior.begin(), chain.interior.end());
      poly.push_back(seeds[1]);
      const auto even = resample(poly, alloc[b] + 2);
      chain.interior.assign(even.begin() + 1, even.end() - 1);
    }
    chains.push_back(std::move(chain));
  }
  return build_1d_topology(anchors.positions, anchors.roles, chains);
}

KeypointLayout init_grid_2d(const AnchorDetection& anchors, const GridShape& shape) {
  const std::size_t na = anchors.size();
  if (na < 4) throw Error(ErrorKind::InvalidInput, "grid", "need at least 4 contour anchors");
  if (shape.rows < 2 || shape.cols < 2) throw Error(ErrorKind::InvalidInput, "grid", "grid must be at least 2x2");
  const auto& P = anchors.positions;

  // Four anchors with the largest summed pairwise distance.
  std::array<std::size_t, 4> corners{0, 1, 2, 3};
  double best = -1.0;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = a + 1; b < na; ++b)
      for (std::size_t c = b + 1; c < na; ++c)
        for (std::size_t d = c + 1; d < na; ++d) {
          const double s = (P[a] - P[b]).norm() + (P[a] - P[c]).norm() + (P[a] - P[d]).norm() + (P[b] - P[c]).norm() +
                           (P[b] - P[d]).norm() + (P[c] - P[d]).norm();
          if (s > best + 1e-12) {
            best = s;
            corners = {a, b, c, d};
          }
        }

  // Cyclic order of the corners: along the contour when available, by angle
  // in the corners' best-fit plane otherwise.
  const bool have_contour = anchors.contour.size() >= 4;
  std::array<std::size_t, 4> contour_idx{};
  std::array<double, 4> key{};
  if (have_contour) {
    for (int k = 0; k < 4; ++k) {
      std::size_t bi = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < anchors.contour.size(); ++i) {
        const double d = sq(anchors.contour[i], P[corners[static_cast<std::size_t>(k)]]);
        if (d < bd) {
          bd = d;
          bi = i;
        }
      }
      contour_idx[static_cast<std::size_t>(k)] = bi;
      key[static_cast<std::size_t>(k)] = static_cast<double>(bi);
    }
  } else {
    Point3 centroid = Point3::Zero();
    for (auto c : corners) centroid += P[c];
    centroid /= 4.0;
    Eigen::Matrix<double, 4, 3> m;
    for (int k = 0; k < 4; ++k) m.row(k) = (P[corners[static_cast<std::size_t>(k)]] - centroid).transpose();
    const Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(m, Eigen::ComputeFullV);
    const Eigen::Vector3d e1 = svd.matrixV().col(0), e2 = svd.matrixV().col(1);
    for (int k = 0; k < 4; ++k) {
      const Eigen::Vector3d d = P[corners[static_cast<std::size_t>(k)]] - centroid;
      key[static_cast<std::size_t>(k)] = std::atan2(d.dot(e2), d.dot(e1));
    }
  }
  std::array<int, 4> cyc{0, 1, 2, 3};
  std::sort(cyc.begin(), cyc.end(),
            [&](int x, int y) { return key[static_cast<std::size_t>(x)] < key[static_cast<std::size_t>(y)]; });

  int k0 = 0;
  for (int k = 1; k < 4; ++k)
    if (lex_less(P[corners[static_cast<std::size_t>(cyc[static_cast<std::size_t>(k)])]],
                 P[corners[static_cast<std::size_t>(cyc[static_cast<std::size_t>(k0)])]]))
      k0 = k;
  auto corner_at = [&](int offset) { return cyc[static_cast<std::size_t>((k0 + offset + 4) % 4)]; };
  int c_next = corner_at(1), c_prev = corner_at(-1);
  const Point3& pn = P[corners[static_cast<std::size_t>(c_next)]];
  const Point3& pp = P[corners[static_cast<std::size_t>(c_prev)]];
  const int c00 = corner_at(0);
  const int c0c = lex_less(pp, pn) ? c_next : c_prev;
  const int cr0 = c0c == c_next ? c_prev : c_next;
  const int crc = corner_at(2);

  auto pos_of = [&](int k) { return P[corners[static_cast<std::size_t>(k)]]; };
  auto side = [&](int from, int to, std::size_t count) -> std::vector<Point3> {
    std::vector<Point3> poly{pos_of(from)};
    if (have_contour) {
      const std::size_t n = anchors.contour.size();
      const std::size_t i0 = contour_idx[static_cast<std::size_t>(from)];
      const std::size_t i1 = contour_idx[static_cast<std::size_t>(to)];
      auto walk = [&](int dir) {
        std::vector<Point3> path;
        bool clean = true;
        std::size_t i = i0;
        while (i != i1) {
          i = dir > 0 ? (i + 1) % n : (i + n - 1) % n;
          if (i == i1) break;
          for (int k = 0; k < 4; ++k)
            if (k != from && k != to && contour_idx[static_cast<std::size_t>(k)] == i) clean = false;
          path.push_back(anchors.contour[i]);
        }
        return std::make_pair(clean, path);
      };
      auto fwd = walk(+1);
      auto bwd = walk(-1);
      const auto& chosen =
          fwd.first && (!bwd.first || fwd.second.size() <= bwd.second.size()) ? fwd.second : bwd.second;
      poly.insert(poly.end(), chosen.begin(), chosen.end());
    }
    poly.push_back(pos_of(to));
    return resample(poly, count);
  };

  const std::size_t R = shape.rows, C = shape.cols;
  KeypointLayout out;
  auto& pos = out.keypoints.positions;
  pos.assign(R * C, Point3::Zero());
  const Point3 q00 = pos_of(c00), q0c = pos_of(c0c), qr0 = pos_of(cr0), qrc = pos_of(crc);
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      const double u = static_cast<double>(c) / static_cast<double>(C - 1);
      const double v = static_cast<double>(r) / static_cast<double>(R - 1);
      pos[shape.index(r, c)] = (1 - u) * (1 - v) * q00 + u * (1 - v) * q0c + (1 - u) * v * qr0 + u * v * qrc;
    }
  }
  const auto top = side(c00, c0c, C), bottom = side(cr0, crc, C);
  const auto left = side(c00, cr0, R), right = side(c0c, crc, R);
  for (std::size_t c = 0; c < C; ++c) {
    pos[shape.index(0, c)] = top[c];
    pos[shape.index(R - 1, c)] = bottom[c];
  }
  for (std::size_t r = 0; r < R; ++r) {
    pos[shape.index(r, 0)] = left[r];
    pos[shape.index(r, C - 1)] = right[r];
  }

  auto& topo = out.topology;
  topo.object_class = ObjectClass::TwoDim;
  topo.num_keypoints = R * C;
  topo.grid_shape = shape;
  grid_edges(shape, topo.edges, topo.edge_groups);
  std::map<std::size_t, AnchorRole> anchor_ids;
  anchor_ids[shape.index(0, 0)] = AnchorRole::Contour;
  anchor_ids[shape.index(0, C - 1)] = AnchorRole::Contour;
  anchor_ids[shape.index(R - 1, 0)] = AnchorRole::Contour;
  anchor_ids[shape.index(R - 1, C - 1)] = AnchorRole::Contour;

  // Remaining contour anchors pin their nearest free boundary keypoint.
  for (std::size_t a = 0; a < na; ++a) {
    if (std::find(corners.begin(), corners.end(), a) != corners.end()) continue;
    std::size_t best_kp = pos.size();
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t c = 0; c < C; ++c) {
        if (r != 0 && r != R - 1 && c != 0 && c != C - 1) continue;
        const std::size_t i = shape.index(r, c);
        if (anchor_ids.count(i)) continue;
        const double d = sq(pos[i], P[a]);
        if (d < bd) {
          bd = d;
          best_kp = i;
        }
      }
    if (best_kp == pos.size()) continue;
    pos[best_kp] = P[a];
    anchor_ids[best_kp] = AnchorRole::Contour;
  }
  for (const auto& [i, role] : anchor_ids) topo.anchors.push_back({i, role});
  topo.validate();
  return out;
}

Topology compute_rest_lengths(const KeypointSet& x, const Topology& topology) {
  if (x.size() != topology.num_keypoints)
    throw Error(ErrorKind::InvalidInput, "rest-lengths", "keypoint count does not match topology");
  Topology out = topology;
  std::map<int, std::pair<double, std::size_t>> acc;
  auto group_of = [&](std::size_t e) { return topology.edge_groups.empty() ? 0 : topology.edge_groups[e]; };
  for (std::size_t e = 0; e < topology.edges.size(); ++e) {
    auto& [sum, count] = acc[group_of(e)];
    sum += (x.positions[topology.edges[e].i] - x.positions[topology.edges[e].j]).norm();
    ++count;
  }
  out.rest_lengths.resize(topology.edges.size());
  for (std::size_t e = 0; e < topology.edges.size(); ++e) {
    const auto& [sum, count] = acc[group_of(e)];
    out.rest_lengths[e] = sum / static_cast<double>(count);
  }
  return out;
}

std::vector<Point3> anchor_positions_of(const KeypointSet& x, const Topology& topology) {
  std::vector<Point3> out;
  out.reserve(topology.anchors.size());
  for (const auto& a : topology.anchors) out.push_back(x.positions.at(a.index));
  return out;
}

AnchorDetection detect_anchors(const PointCloud& cloud, const CameraModel& cam, ObjectClass cls,
                               const InitConfig& config) {
  if (cls == ObjectClass::OneDim) return detect_1d_anchors(cloud, cam, config.detect_1d);
  return extract_corners(detect_2d_anchors(cloud, cam, config.num_contour_anchors, config.detect_2d));
}

InitResult initialize(const SegmentedFrame& seg, const CameraModel& cam, const InitConfig& config) {
  if (seg.cloud.empty()) throw Error(ErrorKind::InvalidInput, "initialize", "segmented cloud is empty");
  InitResult result;
  ObjectClass cls;
  if (config.force_class) {
    cls = *config.force_class;
  } else {
    result.classification = classify_details(seg.cloud, config.classify);
    cls = result.classification->object_class;
  }

  result.detection = detect_anchors(seg.cloud, cam, cls, config);
  const KeypointLayout layout =
      cls == ObjectClass::OneDim ? layout_1d(seg.cloud, result.detection, config.num_keypoints, config.respace_chains)
                                 : init_grid_2d(result.detection, config.grid);
  result.topology = compute_rest_lengths(layout.keypoints, layout.topology);
  result.anchor_positions = anchor_positions_of(layout.keypoints, result.topology);

  const NNIndex index(seg.cloud.points);
  KeypointSet start = layout.keypoints;
  start.frame_index = seg.frame_index;
  if (config.relax_sweeps > 0) {
    SolverParams relax = config.solver;
    relax.iterations = config.relax_sweeps;
    relax.use_projection = false;
    start = gauss_seidel_solve(start, index, result.topology, result.anchor_positions, relax).keypoints;
  }
  SolveResult solved = gauss_seidel_solve(start, index, result.topology, result.anchor_positions, config.solver);
  result.keypoints = std::move(solved.keypoints);
  result.diagnostics = solved.diagnostics;
  return result;
}

}  // namespace deformtrack
