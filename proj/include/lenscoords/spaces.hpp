#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "lenscoords/numeric.hpp"

namespace lens {

// euclidean: points in R^d.
// moore: points of the closed unit disc, dissimilarity given by moore_distance.
// moore_quotient: same points, quotient metric of the disc with boundary
//   glued by the Z_3 rotation (moore_quotient_distance).
// lens: points of S^{2n-1} packed as [re_0, im_0, re_1, im_1, ...], metric
//   lens_distance with modulus q.
enum class MetricId { euclidean, moore, moore_quotient, lens };

std::string to_string(MetricId id);
MetricId metric_from_string(const std::string& name);

struct MetricDataset {
  MetricId metric = MetricId::euclidean;
  int q = 0;  // lens modulus; 0 when unused
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> points;

  std::size_t size() const { return points.size(); }
  double distance(std::size_t i, std::size_t j) const;
  LensPoint lens_point(std::size_t i) const;
};

// Full |idx| x |idx| distance matrix over the given rows, filled in parallel.
Eigen::MatrixXd pairwise_distances(const MetricDataset& x, std::span<const std::size_t> idx);
Eigen::MatrixXd pairwise_distances(const MetricDataset& x);

// size() x |idx| matrix of distances from every point to the listed points.
Eigen::MatrixXd cross_distances(const MetricDataset& x, std::span<const std::size_t> idx);

MetricDataset sample_circle(std::size_t n, double noise_sigma, std::uint64_t seed);
MetricDataset sample_moore(std::size_t n, std::uint64_t seed, MetricId metric = MetricId::moore);
MetricDataset sample_lens(std::size_t n, int q, std::uint64_t seed);

// Three-case dissimilarity on the unit disc with Z_3-related boundary
// points. Not a metric: interior points have d(x, x) = |x|.
double moore_distance(Complex x, Complex y);

// Length metric of D^2 / (b ~ zeta_3 b on the boundary): the shorter of the
// straight segment and the best path that crosses the glued boundary once.
double moore_quotient_distance(Complex x, Complex y);

bool is_prime(int q);

nlohmann::json to_json(const MetricDataset& x);
MetricDataset dataset_from_json(const nlohmann::json& j);

}  // namespace lens
