#pragma once

#include <vector>

#include <Eigen/Core>

namespace deformtrack {

/// Minimum-total-cost assignment (Hungarian algorithm) for a rectangular
/// cost matrix. Returns, for each row, the assigned column or -1 when the
/// matrix has more rows than columns and the row is left out.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace deformtrack
