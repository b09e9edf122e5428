#include "deformtrack/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deformtrack/error.hpp"

namespace deformtrack {

void SolverParams::validate() const {
  if (iterations < 1) throw Error(ErrorKind::Configuration, "solver", "iterations must be >= 1");
  if (convergence_tol < 0) throw Error(ErrorKind::Configuration, "solver", "convergence_tol must be >= 0");
}

EdgeProjection project_edge(const Point3& xi, const Point3& xj, double rest_length) {
  const Eigen::Vector3d delta = xj - xi;
  const double len = delta.norm();
  if (len < 1e-9) {
    const Point3 mid = 0.5 * (xi + xj);
    const Eigen::Vector3d half(0.5 * rest_length, 0.0, 0.0);
    return {mid - half, mid + half, true};
  }
  const Eigen::Vector3d corr = (0.5 * (len - rest_length) / len) * delta;
  return {xi + corr, xj - corr, false};
}

double edge_objective(std::span<const Point3> x, const Topology& topology) {
  double f = 0.0;
  for (std::size_t e = 0; e < topology.edges.size(); ++e) {
    const double r = (x[topology.edges[e].i] - x[topology.edges[e].j]).norm() - topology.rest_lengths[e];
    f += r * r;
  }
  return f;
}

double max_edge_residual(std::span<const Point3> x, const Topology& topology) {
  double m = 0.0;
  for (std::size_t e = 0; e < topology.edges.size(); ++e)
    m = std::max(m, std::abs((x[topology.edges[e].i] - x[topology.edges[e].j]).norm() - topology.rest_lengths[e]));
  return m;
}

SolveResult gauss_seidel_solve(const KeypointSet& x0, const NNIndex& cloud_index, const Topology& topology,
                               std::span<const Point3> anchor_positions, const SolverParams& params) {
  params.validate();
  if (x0.size() != topology.num_keypoints)
    throw Error(ErrorKind::InvalidInput, "solver",
                "warm start has " + std::to_string(x0.size()) + " keypoints, topology expects " +
                    std::to_string(topology.num_keypoints));
  if (anchor_positions.size() != topology.anchors.size())
    throw Error(ErrorKind::InvalidInput, "solver", "anchor positions do not match the anchor set");
  if (topology.rest_lengths.size() != topology.edges.size())
    throw Error(ErrorKind::InvalidInput, "solver", "rest lengths have not been computed");

  SolveResult result;
  result.keypoints = x0;
  std::vector<Point3>& x = result.keypoints.positions;
  const std::vector<char> is_anchor = topology.anchor_mask();

  auto reset_anchors = [&] {
    for (std::size_t a = 0; a < topology.anchors.size(); ++a) x[topology.anchors[a].index] = anchor_positions[a];
  };
  if (params.use_anchor) reset_anchors();

  std::vector<Point3> before;
  for (std::size_t sweep = 0; sweep < params.iterations; ++sweep) {
    before = x;
    if (params.use_edge) {
      for (std::size_t e = 0; e < topology.edges.size(); ++e) {
        const auto [i, j] = topology.edges[e];
        const EdgeProjection p = project_edge(x[i], x[j], topology.rest_lengths[e]);
        x[i] = p.xi;
        x[j] = p.xj;
        result.diagnostics.degenerate_projections += p.degenerate;
      }
    }
    if (params.use_projection) {
      for (std::size_t i = 0; i < x.size(); ++i)
        if (!(params.use_anchor && is_anchor[i])) x[i] = cloud_index.point(cloud_index.nearest(x[i]).index);
    }
    if (params.use_anchor) reset_anchors();
    ++result.diagnostics.sweeps;

    if (params.convergence_tol > 0.0) {
      double moved = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) moved = std::max(moved, (x[i] - before[i]).norm());
      if (moved < params.convergence_tol) break;
    }
  }
  result.diagnostics.max_edge_residual = max_edge_residual(x, topology);
  return result;
}

}  // namespace deformtrack
