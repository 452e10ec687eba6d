#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "lenscoords/numeric.hpp"
#include "lenscoords/spaces.hpp"

namespace lens {

struct IsomapConfig {
  std::size_t k_neighbors = 8;
  std::size_t target_dim = 4;
};

// All-pairs shortest paths on the symmetrized k-nearest-neighbor graph.
// Throws DisconnectedGraph when the graph has more than one component.
Eigen::MatrixXd graph_distances(const Eigen::MatrixXd& distances, std::size_t k_neighbors);

// Rows are points; columns are the top eigenvectors of -1/2 J D^2 J scaled by
// sqrt of their (clamped nonnegative) eigenvalues.
Eigen::MatrixXd classical_mds(const Eigen::MatrixXd& distances, std::size_t target_dim);

Eigen::MatrixXd isomap(const Eigen::MatrixXd& distances, const IsomapConfig& cfg);
Eigen::MatrixXd isomap(const MetricDataset& x, const IsomapConfig& cfg);

Eigen::MatrixXd euclidean_distances(const Eigen::MatrixXd& rows);
Eigen::MatrixXd lens_distances(const std::vector<LensPoint>& points);

// per_1 / per_2 of the dimension-1 Rips diagram over Z_q; nullopt when the
// diagram has no finite pair.
std::optional<double> dim1_per_ratio(const Eigen::MatrixXd& distances, int q);

struct PerRatioRow {
  std::string method;  // "Isomap" or "LC"
  int q = 2;
  std::optional<double> ratio;
};

struct PerRatioTable {
  std::vector<PerRatioRow> rows;

  std::optional<double> ratio(const std::string& method, int q) const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

// Isomap of x restricted to indices versus the given Lens coordinates of the
// same points (compared with d_L).
PerRatioTable compare_per_ratio(const MetricDataset& x, const std::vector<std::size_t>& indices,
                                const std::vector<LensPoint>& lens_points, const std::vector<int>& q_list,
                                const IsomapConfig& cfg);

}  // namespace lens
