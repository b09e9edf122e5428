#include "deformtrack/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "deformtrack/nn_index.hpp"

namespace deformtrack {

// ---------------------------------------------------------------------------
// Zhang-Suen thinning

BinaryMask skeletonize(const BinaryMask& mask) {
  BinaryMask img = mask;
  std::vector<std::size_t> remove;
  auto px = [&](int r, int c) -> int { return img.test(r, c) ? 1 : 0; };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      remove.clear();
      for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
          if (!img.get(r, c)) continue;
          // P2..P9 clockwise from north.
          const int p2 = px(r - 1, c), p3 = px(r - 1, c + 1), p4 = px(r, c + 1), p5 = px(r + 1, c + 1);
          const int p6 = px(r + 1, c), p7 = px(r + 1, c - 1), p8 = px(r, c - 1), p9 = px(r - 1, c - 1);
          const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
          if (b < 2 || b > 6) continue;
          const int a = (!p2 && p3) + (!p3 && p4) + (!p4 && p5) + (!p5 && p6) + (!p6 && p7) + (!p7 && p8) +
                        (!p8 && p9) + (!p9 && p2);
          if (a != 1) continue;
          if (pass == 0) {
            if (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0) continue;
          } else {
            if (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0) continue;
          }
          remove.push_back(static_cast<std::size_t>(r) * img.width + c);
        }
      }
      for (auto i : remove) img.data[i] = 0;
      changed = changed || !remove.empty();
    }
  }
  return img;
}

// ---------------------------------------------------------------------------
// Minimum spanning tree

namespace {

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

double pixel_distance(PixelIndex a, PixelIndex b) {
  return std::hypot(static_cast<double>(a.row - b.row), static_cast<double>(a.col - b.col));
}

void fill_degrees(SkeletonGraph& g) {
  g.degree.assign(g.nodes.size(), 0);
  for (const auto& e : g.edges) {
    ++g.degree[e.a];
    ++g.degree[e.b];
  }
}

}  // namespace

double SkeletonGraph::total_weight() const {
  double w = 0.0;
  for (const auto& e : edges) w += e.weight;
  return w;
}

std::vector<std::vector<std::size_t>> SkeletonGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  return adj;
}

SkeletonGraph build_mst_dense(std::span<const PixelIndex> pixels) {
  SkeletonGraph g;
  g.nodes.assign(pixels.begin(), pixels.end());
  const std::size_t n = g.nodes.size();
  if (n == 0) return g;
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::vector<char> in_tree(n, 0);
  best[0] = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!in_tree[i] && (u == n || best[i] < best[u])) u = i;
    in_tree[u] = 1;
    if (it > 0) g.edges.push_back({std::min(u, from[u]), std::max(u, from[u]), best[u]});
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double d = pixel_distance(g.nodes[u], g.nodes[v]);
      if (d < best[v]) {
        best[v] = d;
        from[v] = u;
      }
    }
  }
  fill_degrees(g);
  return g;
}

SkeletonGraph build_mst(std::span<const PixelIndex> pixels, const MstOptions& options) {
  const std::size_t n = pixels.size();
  if (n <= 1 || options.candidate_k == 0) return build_mst_dense(pixels);

  std::vector<Point3> pts;
  pts.reserve(n);
  for (const auto& p : pixels) pts.emplace_back(p.col, p.row, 0.0);
  const NNIndex index(pts);

  std::vector<SkeletonEdge> cand;
  cand.reserve(n * options.candidate_k);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : index.knn(pts[i], options.candidate_k + 1)) {
      if (nb.index == i) continue;
      cand.push_back({std::min(i, nb.index), std::max(i, nb.index), pixel_distance(pixels[i], pixels[nb.index])});
    }
  }
  auto order = [](const SkeletonEdge& x, const SkeletonEdge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  };
  std::sort(cand.begin(), cand.end(), order);
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](const SkeletonEdge& x, const SkeletonEdge& y) { return x.a == y.a && x.b == y.b; }),
             cand.end());

  SkeletonGraph g;
  g.nodes.assign(pixels.begin(), pixels.end());
  Dsu dsu(n);
  for (const auto& e : cand) {
    if (dsu.unite(e.a, e.b)) g.edges.push_back(e);
    if (g.edges.size() + 1 == n) break;
  }
  if (g.edges.size() + 1 != n) return build_mst_dense(pixels);
  fill_degrees(g);
  return g;
}

// ---------------------------------------------------------------------------
// Branch analysis

namespace {

struct WorkGraph {
  std::vector<PixelIndex> nodes;
  std::vector<SkeletonEdge> edges;
  std::vector<char> edge_alive;
  std::vector<char> node_alive;
  std::vector<std::vector<std::size_t>> incident;  // edge ids

  explicit WorkGraph(const SkeletonGraph& g)
      : nodes(g.nodes),
        edges(g.edges),
        edge_alive(g.edges.size(), 1),
        node_alive(g.nodes.size(), 1),
        incident(g.nodes.size()) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      incident[edges[e].a].push_back(e);
      incident[edges[e].b].push_back(e);
    }
  }

  int degree(std::size_t n) const {
    int d = 0;
    for (auto e : incident[n]) d += edge_alive[e];
    return d;
  }
  std::size_t other(std::size_t e, std::size_t n) const { return edges[e].a == n ? edges[e].b : edges[e].a; }
};

struct Walk {
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> edges;
  double length = 0.0;
  bool reached_junction = false;
};

// Walks from a leaf through degree-2 nodes until a node with degree >= 3.
Walk walk_from_leaf(const WorkGraph& g, std::size_t leaf) {
  Walk w;
  w.nodes.push_back(leaf);
  std::size_t cur = leaf;
  std::size_t came_by = std::numeric_limits<std::size_t>::max();
  while (true) {
    std::size_t next_edge = std::numeric_limits<std::size_t>::max();
    for (auto e : g.incident[cur])
      if (g.edge_alive[e] && e != came_by) {
        next_edge = e;
        break;
      }
    if (next_edge == std::numeric_limits<std::size_t>::max()) return w;  // reached another leaf
    const std::size_t nxt = g.other(next_edge, cur);
    w.length += g.edges[next_edge].weight;
    w.edges.push_back(next_edge);
    w.nodes.push_back(nxt);
    came_by = next_edge;
    cur = nxt;
    if (g.degree(cur) >= 3) {
      w.reached_junction = true;
      return w;
    }
  }
}

}  // namespace

SkeletonAnalysis analyze_skeleton(const SkeletonGraph& mst, const SkeletonAnalysisParams& params) {
  SkeletonAnalysis out;
  WorkGraph g(mst);

  // Spur pruning, shortest first.
  while (true) {
    std::vector<std::size_t> leaves;
    for (std::size_t n = 0; n < g.nodes.size(); ++n)
      if (g.node_alive[n] && g.degree(n) == 1) leaves.push_back(n);
    if (leaves.size() <= 2) break;
    bool found = false;
    Walk shortest;
    for (auto leaf : leaves) {
      Walk w = walk_from_leaf(g, leaf);
      if (!w.reached_junction || w.length >= params.min_branch_px) continue;
      if (!found || w.length < shortest.length) {
        shortest = std::move(w);
        found = true;
      }
    }
    if (!found) break;
    for (auto e : shortest.edges) g.edge_alive[e] = 0;
    for (std::size_t i = 0; i + 1 < shortest.nodes.size(); ++i) g.node_alive[shortest.nodes[i]] = 0;
    ++out.pruned_spurs;
  }

  // Compact.
  std::vector<std::size_t> remap(g.nodes.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    if (!g.node_alive[n]) continue;
    remap[n] = out.tree.nodes.size();
    out.tree.nodes.push_back(g.nodes[n]);
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (g.edge_alive[e]) out.tree.edges.push_back({remap[g.edges[e].a], remap[g.edges[e].b], g.edges[e].weight});
  fill_degrees(out.tree);

  const auto& tree = out.tree;
  const std::size_t n = tree.nodes.size();
  const auto adj = tree.adjacency();

  // Key nodes: leaves first, then merged junction clusters.
  std::vector<long> key(n, -1);
  std::vector<std::size_t> junction_nodes;
  for (std::size_t i = 0; i < n; ++i) {
    if (tree.degree[i] == 1) {
      key[i] = static_cast<long>(out.leaves.size());
      out.leaves.push_back(tree.nodes[i]);
    } else if (tree.degree[i] >= 3) {
      junction_nodes.push_back(i);
    }
  }
  Dsu clusters(junction_nodes.size());
  for (std::size_t a = 0; a < junction_nodes.size(); ++a)
    for (std::size_t b = a + 1; b < junction_nodes.size(); ++b)
      if (pixel_distance(tree.nodes[junction_nodes[a]], tree.nodes[junction_nodes[b]]) <= params.merge_radius_px)
        clusters.unite(a, b);
  std::vector<long> cluster_id(junction_nodes.size(), -1);
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t a = 0; a < junction_nodes.size(); ++a) {
    const std::size_t root = clusters.find(a);
    if (cluster_id[root] < 0) {
      cluster_id[root] = static_cast<long>(members.size());
      members.emplace_back();
    }
    members[static_cast<std::size_t>(cluster_id[root])].push_back(junction_nodes[a]);
    key[junction_nodes[a]] = static_cast<long>(out.leaves.size()) + cluster_id[root];
  }
  for (const auto& m : members) {
    double r = 0.0, c = 0.0;
    for (auto i : m) {
      r += tree.nodes[i].row;
      c += tree.nodes[i].col;
    }
    r /= static_cast<double>(m.size());
    c /= static_cast<double>(m.size());
    out.junctions.push_back({static_cast<int>(std::lround(r)), static_cast<int>(std::lround(c))});
  }

  // Branches between key nodes.
  std::vector<std::vector<char>> used(n);
  for (std::size_t i = 0; i < n; ++i) used[i].assign(adj[i].size(), 0);
  auto mark = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = 0; k < adj[from].size(); ++k)
      if (adj[from][k] == to) used[from][k] = 1;
    for (std::size_t k = 0; k < adj[to].size(); ++k)
      if (adj[to][k] == from) used[to][k] = 1;
  };
  for (std::size_t start = 0; start < n; ++start) {
    if (key[start] < 0) continue;
    for (std::size_t k = 0; k < adj[start].size(); ++k) {
      if (used[start][k]) continue;
      SkeletonBranchPath br;
      br.path.push_back(tree.nodes[start]);
      std::size_t prev = start;
      std::size_t cur = adj[start][k];
      mark(prev, cur);
      br.length_px += pixel_distance(tree.nodes[prev], tree.nodes[cur]);
      br.path.push_back(tree.nodes[cur]);
      while (key[cur] < 0) {
        std::size_t nxt = prev;
        for (auto v : adj[cur])
          if (v != prev) nxt = v;
        if (nxt == prev) break;  // dead end cannot happen for degree-2 nodes
        mark(cur, nxt);
        br.length_px += pixel_distance(tree.nodes[cur], tree.nodes[nxt]);
        br.path.push_back(tree.nodes[nxt]);
        prev = cur;
        cur = nxt;
      }
      if (key[cur] < 0 || key[cur] == key[start]) continue;
      br.from = static_cast<std::size_t>(key[start]);
      br.to = static_cast<std::size_t>(key[cur]);
      out.branches.push_back(std::move(br));
    }
  }
  return out;
}

}  // namespace deformtrack
