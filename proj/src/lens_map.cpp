#include "lenscoords/lens_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lenscoords/errors.hpp"
#include "lenscoords/parallel.hpp"

namespace lens {

namespace {

void check_config(const Cocycle& eta, const LensMapConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (cfg.q != eta.q()) throw Error(ErrorCode::ModulusMismatch, "cocycle and map use different q");
  if (cfg.epsilon < eta.birth()) {
    throw Error(ErrorCode::InvalidArgument, "epsilon is below the birth of the cocycle's class");
  }
  if (!(2.0 * cfg.epsilon < eta.valid_below())) {
    throw Error(ErrorCode::InvalidArgument, "2 epsilon must stay below the cocycle's death scale");
  }
}

std::vector<double> row_of(const Eigen::MatrixXd& m, Eigen::Index r) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(c)] = m(r, c);
  return out;
}

}  // namespace

double default_epsilon(const PersistencePair& pair, double delta) {
  return pair.birth + std::min(delta, (pair.death / 2.0 - pair.birth) / 2.0);
}

std::vector<double> partition_of_unity(std::span<const double> dists, double epsilon) {
  std::vector<double> phi(dists.size());
  double total = 0.0;
  for (std::size_t l = 0; l < dists.size(); ++l) {
    phi[l] = std::max(epsilon - dists[l], 0.0);
    total += phi[l];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::Uncovered, "point lies outside every landmark ball");
  for (double& w : phi) w /= total;
  return phi;
}

std::size_t nearest_chart(std::span<const double> dists, double epsilon) {
  std::size_t best = FilteredComplex::npos;
  for (std::size_t l = 0; l < dists.size(); ++l) {
    if (dists[l] < epsilon && (best == FilteredComplex::npos || dists[l] < dists[best])) best = l;
  }
  return best;
}

LensPoint classify_in_chart(std::span<const double> dists, const Cocycle& eta, const LensMapConfig& cfg,
                            std::size_t chart) {
  check_config(eta, cfg);
  if (chart >= dists.size() || !(dists[chart] < cfg.epsilon)) {
    throw Error(ErrorCode::Uncovered, "point is not inside the ball of chart " + std::to_string(chart));
  }
  const auto phi = partition_of_unity(dists, cfg.epsilon);
  CVec rep = CVec::Zero(static_cast<Eigen::Index>(dists.size()));
  const auto j = static_cast<std::uint32_t>(chart);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (phi[k] <= 0.0) continue;
    const auto value = eta.value(j, static_cast<std::uint32_t>(k));
    if (!value) {
      throw Error(ErrorCode::MissingEdge, "cocycle has no value on edge (" + std::to_string(j) + ", " +
                                              std::to_string(k) + ")");
    }
    rep(static_cast<Eigen::Index>(k)) = std::sqrt(phi[k]) * root_of_unity(cfg.q, *value);
  }
  return make_lens_point(std::move(rep), cfg.q);
}

LensPoint classify(std::span<const double> dists, const Cocycle& eta, const LensMapConfig& cfg) {
  const std::size_t chart = nearest_chart(dists, cfg.epsilon);
  if (chart == FilteredComplex::npos) throw Error(ErrorCode::Uncovered, "point lies outside every landmark ball");
  return classify_in_chart(dists, eta, cfg, chart);
}

LensCoordinates lens_coordinates(const Eigen::MatrixXd& dists, const Cocycle& eta, const LensMapConfig& cfg) {
  check_config(eta, cfg);
  const auto n = static_cast<std::size_t>(dists.rows());
  std::vector<std::size_t> uncovered;
  for (std::size_t i = 0; i < n; ++i) {
    if ((dists.row(static_cast<Eigen::Index>(i)).array() < cfg.epsilon).any()) continue;
    uncovered.push_back(i);
  }
  if (!uncovered.empty()) throw CoverageFailure(std::move(uncovered));

  LensCoordinates out;
  out.cloud.q = cfg.q;
  out.cloud.points.resize(n);
  out.cloud.source_index.resize(n);
  std::vector<double> sum_error(n);
  std::vector<std::size_t> active(n);
  parallel_for(n, [&](std::size_t i) {
    const auto row = row_of(dists, static_cast<Eigen::Index>(i));
    const auto phi = partition_of_unity(row, cfg.epsilon);
    double s = 0.0;
    for (double w : phi) {
      s += w;
      if (w > 0.0) ++active[i];
    }
    sum_error[i] = std::abs(s - 1.0);
    out.cloud.points[i] = classify(row, eta, cfg);
    out.cloud.source_index[i] = i;
  });

  out.coverage.points = n;
  for (std::size_t i = 0; i < n; ++i) {
    out.coverage.max_partition_error = std::max(out.coverage.max_partition_error, sum_error[i]);
    out.coverage.max_active_charts = std::max(out.coverage.max_active_charts, active[i]);
    out.coverage.mean_active_charts += static_cast<double>(active[i]);
  }
  if (n > 0) out.coverage.mean_active_charts /= static_cast<double>(n);
  return out;
}

LensCoordinates lens_coordinates(const MetricDataset& x, const LandmarkSet& landmarks, const Cocycle& eta,
                                 const LensMapConfig& cfg) {
  return lens_coordinates(cross_distances(x, landmarks.indices), eta, cfg);
}

nlohmann::json to_json(const LensCloud& cloud) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : cloud.points) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < p.dim(); ++k) row.push_back({p.rep(k).real(), p.rep(k).imag()});
    points.push_back(std::move(row));
  }
  return {{"q", cloud.q}, {"n", cloud.dim()}, {"points", points}, {"source_index", cloud.source_index}};
}

LensCloud lens_cloud_from_json(const nlohmann::json& j) {
  try {
    LensCloud cloud;
    cloud.q = j.at("q").get<int>();
    const auto n = j.at("n").get<std::size_t>();
    for (const auto& row : j.at("points")) {
      if (row.size() != n) throw Error(ErrorCode::ParseError, "lens cloud point has wrong dimension");
      CVec rep(static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < n; ++k) {
        rep(static_cast<Eigen::Index>(k)) = Complex(row.at(k).at(0).get<double>(), row.at(k).at(1).get<double>());
      }
      cloud.points.push_back({std::move(rep), cloud.q});
    }
    cloud.source_index = j.at("source_index").get<std::vector<std::size_t>>();
    if (cloud.source_index.size() != cloud.points.size()) {
      throw Error(ErrorCode::ParseError, "source_index length differs from point count");
    }
    return cloud;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed lens cloud JSON: ") + e.what());
  }
}

}  // namespace lens
