#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "deformtrack/error.hpp"
#include "deformtrack/solver.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

using namespace deformtrack;

namespace {

Topology chain(std::size_t n, double d, std::vector<AnchorRef> anchors) {
  Topology t;
  t.num_keypoints = n;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.edges.push_back({i, i + 1});
    t.rest_lengths.push_back(d);
    t.edge_groups.push_back(0);
  }
  t.anchors = std::move(anchors);
  return t;
}

NNIndex line_index(double x0, double x1, double spacing) {
  std::vector<Point3> pts;
  for (double x = x0; x <= x1 + 1e-12; x += spacing) pts.emplace_back(x, 0, 0);
  return NNIndex(std::move(pts));
}

bool member(const Point3& p, const NNIndex& idx) { return idx.nearest(p).distance == 0.0; }

}  // namespace

TEST(ProjectEdge, SymmetricCorrection) {
  const auto r = project_edge({0, 0, 0}, {2, 0, 0}, 1.0);
  EXPECT_LT((r.xi - Point3(0.5, 0, 0)).norm(), 1e-15);
  EXPECT_LT((r.xj - Point3(1.5, 0, 0)).norm(), 1e-15);
  EXPECT_FALSE(r.degenerate);
}

TEST(ProjectEdge, FixedPoint) {
  const Point3 a(0.1, 0.2, 0.3), b(0.1, 0.2, 0.4);
  const auto r = project_edge(a, b, (a - b).norm());
  EXPECT_LT((r.xi - a).norm(), 1e-15);
  EXPECT_LT((r.xj - b).norm(), 1e-15);
}

TEST(ProjectEdge, CoincidentSplitsAlongX) {
  const auto r = project_edge({0, 0, 0}, {0, 0, 0}, 0.1);
  EXPECT_TRUE(r.degenerate);
  EXPECT_LT((r.xi - Point3(-0.05, 0, 0)).norm(), 1e-15);
  EXPECT_LT((r.xj - Point3(0.05, 0, 0)).norm(), 1e-15);
}

TEST(ProjectEdge, RandomPreservesMidpointAndIsIdempotent) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = scenes::random_points(rng, 2, 1.0);
    const double d = u(rng);
    const auto r = project_edge(p[0], p[1], d);
    EXPECT_NEAR((r.xi - r.xj).norm(), d, 1e-12);
    EXPECT_LT(((r.xi + r.xj) / 2 - (p[0] + p[1]) / 2).norm(), 1e-12);
    // Both moved along the original line.
    const Eigen::Vector3d dir = (p[1] - p[0]).normalized();
    EXPECT_LT((r.xi - p[0]).cross(dir).norm(), 1e-12);
    const auto again = project_edge(r.xi, r.xj, d);
    EXPECT_LT((again.xi - r.xi).norm(), 1e-12);
    EXPECT_LT((again.xj - r.xj).norm(), 1e-12);
  }
}

TEST(Solver, ThreeChainEquilibrium) {
  const Topology t = chain(3, 0.1, {{0, AnchorRole::Leaf}, {2, AnchorRole::Leaf}});
  const NNIndex idx = line_index(0.0, 0.2, 0.0001);
  const std::vector<Point3> anchors{{0, 0, 0}, {0.2, 0, 0}};
  KeypointSet x0{{{0, 0, 0}, {0.03, 0, 0}, {0.2, 0, 0}}, 0};
  SolverParams p;
  p.iterations = 50;
  p.convergence_tol = 0;
  const auto r = gauss_seidel_solve(x0, idx, t, anchors, p);
  EXPECT_LT((r.keypoints.positions[1] - Point3(0.1, 0, 0)).norm(), 1e-6);
  EXPECT_EQ(r.diagnostics.sweeps, 50u);
}

TEST(Solver, NoEdgeIsSnapAndReset) {
  std::mt19937_64 rng(7);
  const auto cloud = scenes::random_points(rng, 500, 0.2);
  const NNIndex idx(cloud);
  const Topology t = chain(6, 0.05, {{0, AnchorRole::Leaf}, {5, AnchorRole::Leaf}});
  const std::vector<Point3> anchors{{-1, 0, 0}, {1, 0, 0}};
  KeypointSet x0{scenes::random_points(rng, 6, 0.3), 0};
  SolverParams p;
  p.use_edge = false;
  p.iterations = 7;
  const auto r = gauss_seidel_solve(x0, idx, t, anchors, p);
  EXPECT_EQ(r.keypoints.positions[0], anchors[0]);
  EXPECT_EQ(r.keypoints.positions[5], anchors[1]);
  for (std::size_t i = 1; i < 5; ++i)
    EXPECT_EQ(r.keypoints.positions[i], cloud[oracle::nearest(cloud, x0.positions[i]).index]);
}

TEST(Solver, FreeChainReachesRestLengths) {
  const Topology t = chain(6, 0.05, {});
  const NNIndex idx = line_index(0, 1, 0.01);
  KeypointSet x0;
  for (int i = 0; i < 6; ++i) x0.positions.emplace_back(0.09 * i, 0.01 * (i % 2), 0);
  SolverParams p;
  p.use_projection = false;
  p.use_anchor = false;
  p.iterations = 500;
  p.convergence_tol = 0;
  const auto r = gauss_seidel_solve(x0, idx, t, {}, p);
  EXPECT_LT(max_edge_residual(r.keypoints.positions, t), max_edge_residual(x0.positions, t));
  EXPECT_LT(max_edge_residual(r.keypoints.positions, t), 1e-6);
}

TEST(Solver, InputsUntouchedAndDeterministic) {
  std::mt19937_64 rng(3);
  const auto cloud = scenes::random_points(rng, 2000, 0.3);
  const NNIndex idx(cloud);
  const Topology t = chain(10, 0.06, {{0, AnchorRole::Leaf}, {9, AnchorRole::Leaf}});
  const std::vector<Point3> anchors{cloud[0], cloud[1]};
  const KeypointSet x0{scenes::random_points(rng, 10, 0.3), 0};
  const KeypointSet copy = x0;
  const auto a = gauss_seidel_solve(x0, idx, t, anchors, SolverParams{});
  const auto b = gauss_seidel_solve(x0, idx, t, anchors, SolverParams{});
  EXPECT_EQ(x0, copy);
  EXPECT_EQ(a.keypoints, b.keypoints);
}

TEST(Solver, ConstraintsExactOnReturn) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cloud = scenes::random_points(rng, 300, 0.3);
    const NNIndex idx(cloud);
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 10);
    const Topology t = chain(n, 0.05, {{0, AnchorRole::Leaf}, {n - 1, AnchorRole::Leaf}});
    const auto anchors = scenes::random_points(rng, 2, 0.3);
    const KeypointSet x0{scenes::random_points(rng, n, 0.3), 0};
    SolverParams p;
    p.iterations = 1 + static_cast<std::size_t>(trial % 20);
    const auto r = gauss_seidel_solve(x0, idx, t, anchors, p);
    EXPECT_EQ(r.keypoints.positions[0], anchors[0]);
    EXPECT_EQ(r.keypoints.positions[n - 1], anchors[1]);
    for (std::size_t i = 1; i + 1 < n; ++i) EXPECT_TRUE(member(r.keypoints.positions[i], idx));
  }
}

TEST(Solver, EdgeOnlyObjectiveNeverIncreases) {
  // Each projection is a Gauss-Seidel step on the edge objective, so without
  // the other constraints sweeps cannot make it worse.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Topology t = chain(8, 0.05, {});
    const NNIndex idx = line_index(0, 1, 0.1);
    KeypointSet x{scenes::random_points(rng, 8, 0.2), 0};
    SolverParams p;
    p.use_projection = false;
    p.use_anchor = false;
    p.iterations = 1;
    p.convergence_tol = 0;
    double prev = edge_objective(x.positions, t);
    for (int s = 0; s < 30; ++s) {
      x = gauss_seidel_solve(x, idx, t, {}, p).keypoints;
      const double cur = edge_objective(x.positions, t);
      EXPECT_LE(cur, prev + 1e-15);
      prev = cur;
    }
  }
}

TEST(Solver, DegenerateProjectionsCounted) {
  const Topology t = chain(2, 0.1, {});
  const NNIndex idx = line_index(0, 1, 0.1);
  KeypointSet x0{{{0.5, 0, 0}, {0.5, 0, 0}}, 0};
  SolverParams p;
  p.use_projection = false;
  p.use_anchor = false;
  p.iterations = 1;
  const auto r = gauss_seidel_solve(x0, idx, t, {}, p);
  EXPECT_EQ(r.diagnostics.degenerate_projections, 1u);
  EXPECT_LT((r.keypoints.positions[1] - Point3(0.55, 0, 0)).norm(), 1e-12);
}

TEST(Solver, RejectsBadInputs) {
  const Topology t = chain(3, 0.1, {{0, AnchorRole::Leaf}, {2, AnchorRole::Leaf}});
  const NNIndex idx = line_index(0, 1, 0.1);
  const KeypointSet x0{{{0, 0, 0}, {0.1, 0, 0}, {0.2, 0, 0}}, 0};
  const std::vector<Point3> anchors{{0, 0, 0}, {0.2, 0, 0}};
  SolverParams zero;
  zero.iterations = 0;
  EXPECT_THROW(gauss_seidel_solve(x0, idx, t, anchors, zero), Error);
  EXPECT_THROW(gauss_seidel_solve(x0, idx, t, std::vector<Point3>{{0, 0, 0}}, SolverParams{}), Error);
  const KeypointSet short_x{{{0, 0, 0}}, 0};
  EXPECT_THROW(gauss_seidel_solve(short_x, idx, t, anchors, SolverParams{}), Error);
}
