#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "deformtrack/nn_index.hpp"
#include "deformtrack/types.hpp"

namespace deformtrack {

enum class ObjectClass { OneDim, TwoDim };

const char* to_string(ObjectClass c);
ObjectClass object_class_from_string(const std::string& s);

struct ClassifyParams {
  std::size_t num_seeds = 32;
  double radius = 0.03;           // m
  double ratio_threshold = 0.25;  // median lambda2/lambda1 below this => OneDim
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Covariance eigenvalues of a neighborhood, sorted descending and clamped
/// at zero.
struct LocalEigenvalues {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;

  double ratio21() const { return l1 > 0.0 ? l2 / l1 : 0.0; }
  double ratio32() const { return l2 > 0.0 ? l3 / l2 : 0.0; }
};

/// Eigenvalues of the covariance of all cloud points within `radius` of
/// `seed`; std::nullopt when fewer than 4 points fall inside.
std::optional<LocalEigenvalues> local_eigenvalues(const NNIndex& index, const Point3& seed, double radius);
std::optional<LocalEigenvalues> local_eigenvalues(const PointCloud& cloud, const Point3& seed, double radius);

struct Classification {
  ObjectClass object_class = ObjectClass::OneDim;
  double median_ratio21 = 0.0;
  double median_ratio32 = 0.0;  // diagnostic only
  std::size_t valid_seeds = 0;
  std::size_t degenerate_seeds = 0;
};

/// Samples `num_seeds` cloud points (deterministic in rng_seed) and compares
/// the median lambda2/lambda1 against the threshold. Throws
/// Error{ClassificationFailed} when more than half the seeds are degenerate.
Classification classify_details(const PointCloud& cloud, const ClassifyParams& params);

ObjectClass classify_object(const PointCloud& cloud, const ClassifyParams& params);

}  // namespace deformtrack
