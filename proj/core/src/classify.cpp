#include "deformtrack/classify.hpp"

#include <algorithm>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "deformtrack/error.hpp"

namespace deformtrack {

const char* to_string(ObjectClass c) { return c == ObjectClass::OneDim ? "1d" : "2d"; }

ObjectClass object_class_from_string(const std::string& s) {
  if (s == "1d") return ObjectClass::OneDim;
  if (s == "2d") return ObjectClass::TwoDim;
  throw Error(ErrorKind::InvalidInput, "object_class", "unknown object class '" + s + "'");
}

void ClassifyParams::validate() const {
  if (num_seeds < 1 || !(radius > 0) || !(ratio_threshold > 0 && ratio_threshold < 1))
    throw Error(ErrorKind::Configuration, "classify", "invalid classification parameters");
}

namespace {

LocalEigenvalues eigen_of(const std::vector<const Point3*>& pts) {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (auto* p : pts) mean += *p;
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (auto* p : pts) {
    const Eigen::Vector3d d = *p - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(pts.size());
  // Eigenvalues come back ascending.
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov, Eigen::EigenvaluesOnly);
  const Eigen::Vector3d ev = es.eigenvalues().cwiseMax(0.0);
  return {ev[2], ev[1], ev[0]};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::optional<LocalEigenvalues> local_eigenvalues(const NNIndex& index, const Point3& seed, double radius) {
  const auto ids = index.radius_search(seed, radius);
  if (ids.size() < 4) return std::nullopt;
  std::vector<const Point3*> pts;
  pts.reserve(ids.size());
  for (auto i : ids) pts.push_back(&index.point(i));
  return eigen_of(pts);
}

std::optional<LocalEigenvalues> local_eigenvalues(const PointCloud& cloud, const Point3& seed, double radius) {
  if (cloud.empty()) return std::nullopt;
  return local_eigenvalues(NNIndex(cloud.points), seed, radius);
}

Classification classify_details(const PointCloud& cloud, const ClassifyParams& params) {
  params.validate();
  if (cloud.size() < 4) throw Error(ErrorKind::ClassificationFailed, "classify", "need at least 4 points");
  const NNIndex index(cloud.points);

  std::mt19937_64 rng(params.rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, cloud.size() - 1);
  std::vector<double> r21;
  std::vector<double> r32;
  Classification out;
  for (std::size_t s = 0; s < params.num_seeds; ++s) {
    const auto ev = local_eigenvalues(index, cloud.points[pick(rng)], params.radius);
    if (!ev || ev->l1 <= 0.0) {
      ++out.degenerate_seeds;
      continue;
    }
    r21.push_back(ev->ratio21());
    r32.push_back(ev->ratio32());
  }
  out.valid_seeds = r21.size();
  if (out.degenerate_seeds * 2 > params.num_seeds || r21.empty())
    throw Error(ErrorKind::ClassificationFailed, "classify",
                std::to_string(out.degenerate_seeds) + " of " + std::to_string(params.num_seeds) +
                    " seeds had degenerate neighborhoods");
  out.median_ratio21 = median(r21);
  out.median_ratio32 = median(r32);
  out.object_class = out.median_ratio21 < params.ratio_threshold ? ObjectClass::OneDim : ObjectClass::TwoDim;
  return out;
}

ObjectClass classify_object(const PointCloud& cloud, const ClassifyParams& params) {
  return classify_details(cloud, params).object_class;
}

}  // namespace deformtrack
