#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "deformtrack/nn_index.hpp"
#include "deformtrack/topology.hpp"

namespace deformtrack {

struct SolverParams {
  std::size_t iterations = 30;
  bool use_anchor = true;
  bool use_edge = true;
  bool use_projection = true;
  /// Stop early when no keypoint moves more than this in a sweep; 0 disables.
  double convergence_tol = 1e-5;

  void validate() const;
};

struct EdgeProjection {
  Point3 xi;
  Point3 xj;
  bool degenerate = false;
};

/// Moves both endpoints by equal and opposite amounts along their connecting
/// line so their distance becomes `rest_length`; the midpoint is preserved.
/// Coincident points (closer than 1e-9) are split along +x.
EdgeProjection project_edge(const Point3& xi, const Point3& xj, double rest_length);

struct SolverDiagnostics {
  std::size_t sweeps = 0;
  double max_edge_residual = 0.0;  // m, after the final sweep
  std::size_t degenerate_projections = 0;
};

struct SolveResult {
  KeypointSet keypoints;
  SolverDiagnostics diagnostics;
};

/// Gauss-Seidel projection solver. Each sweep runs, in order: edge
/// projections over topology.edges (in place), nearest-cloud projection of
/// every non-anchor keypoint, anchor reset. `anchor_positions` is parallel to
/// topology.anchors. The inputs are not modified.
SolveResult gauss_seidel_solve(const KeypointSet& x0, const NNIndex& cloud_index, const Topology& topology,
                               std::span<const Point3> anchor_positions, const SolverParams& params);

/// Sum over edges of (|xi - xj| - d_ij)^2.
double edge_objective(std::span<const Point3> x, const Topology& topology);

double max_edge_residual(std::span<const Point3> x, const Topology& topology);

}  // namespace deformtrack
