#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "lenscoords/landmarks.hpp"
#include "lenscoords/numeric.hpp"
#include "lenscoords/persistence.hpp"
#include "lenscoords/spaces.hpp"

namespace lens {

struct LensMapConfig {
  double epsilon = 0.0;
  int q = 3;
  double delta = 1e-5;
};

// a + min(delta, (b/2 - a)/2), which stays inside [a, b/2).
double default_epsilon(const PersistencePair& pair, double delta = 1e-5);

// phi_l = (eps - d_l)_+ / sum_l' (eps - d_l')_+ for the distances d_l from a
// point to each landmark. Throws Uncovered when every weight vanishes.
std::vector<double> partition_of_unity(std::span<const double> landmark_distances, double epsilon);

// Nearest landmark strictly within epsilon (smallest index on ties), or npos.
std::size_t nearest_chart(std::span<const double> landmark_distances, double epsilon);

// Lens coordinates [sqrt(phi_1) zeta^{eta_j1} : ... : sqrt(phi_n) zeta^{eta_jn}]
// computed in the nearest chart j.
LensPoint classify(std::span<const double> landmark_distances, const Cocycle& eta,
                   const LensMapConfig& cfg);

// Same formula in an explicit chart; the chart must contain the point.
LensPoint classify_in_chart(std::span<const double> landmark_distances, const Cocycle& eta,
                            const LensMapConfig& cfg, std::size_t chart);

struct LensCloud {
  int q = 3;
  std::vector<LensPoint> points;
  std::vector<std::size_t> source_index;

  std::size_t dim() const { return points.empty() ? 0 : static_cast<std::size_t>(points.front().dim()); }
  std::size_t size() const { return points.size(); }
};

struct CoverageStats {
  std::size_t points = 0;
  double max_partition_error = 0.0;  // max |sum phi - 1|
  double mean_active_charts = 0.0;
  std::size_t max_active_charts = 0;
};

struct LensCoordinates {
  LensCloud cloud;
  CoverageStats coverage;
};

// landmark_distances is |X| x n, row i holding d(x_i, l_1..l_n). Throws
// CoverageFailure listing every uncovered row.
LensCoordinates lens_coordinates(const Eigen::MatrixXd& landmark_distances, const Cocycle& eta,
                                 const LensMapConfig& cfg);
LensCoordinates lens_coordinates(const MetricDataset& x, const LandmarkSet& landmarks,
                                 const Cocycle& eta, const LensMapConfig& cfg);

nlohmann::json to_json(const LensCloud& cloud);
LensCloud lens_cloud_from_json(const nlohmann::json& j);

}  // namespace lens
