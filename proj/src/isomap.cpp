#include "lenscoords/isomap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include "lenscoords/errors.hpp"
#include "lenscoords/parallel.hpp"
#include "lenscoords/persistence.hpp"

namespace lens {

Eigen::MatrixXd graph_distances(const Eigen::MatrixXd& d, std::size_t k_neighbors) {
  if (d.rows() != d.cols()) throw Error(ErrorCode::NonSquare, "distance matrix must be square");
  if (k_neighbors < 1) throw Error(ErrorCode::InvalidArgument, "k_neighbors must be >= 1");
  const auto n = static_cast<std::size_t>(d.rows());
  const std::size_t k = std::min(k_neighbors, n > 0 ? n - 1 : 0);

  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  std::vector<std::vector<char>> linked(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double da = d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
                        const double db = d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b));
                        return da != db ? da < db : a < b;
                      });
    for (std::size_t t = 0; t < k; ++t) linked[i][order[t]] = linked[order[t]][i] = 1;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (linked[i][j]) adj[i].push_back({j, d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }

  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(d.rows(), d.cols(), inf);
  parallel_for(n, [&](std::size_t s) {
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<double> dist(n, inf);
    dist[s] = 0.0;
    heap.push({0.0, s});
    while (!heap.empty()) {
      const auto [du, u] = heap.top();
      heap.pop();
      if (du > dist[u]) continue;
      for (const auto& [v, w] : adj[u]) {
        if (du + w < dist[v]) {
          dist[v] = du + w;
          heap.push({dist[v], v});
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) g(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = dist[t];
  });

  // components from the reachability of each vertex
  std::vector<std::size_t> label(n, n);
  std::size_t components = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isfinite(g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))) label[j] = components;
    }
    ++components;
  }
  if (components > 1) throw DisconnectedGraph(components);
  // symmetrize the tiny floating differences between the two directions
  return 0.5 * (g + g.transpose());
}

Eigen::MatrixXd classical_mds(const Eigen::MatrixXd& d, std::size_t target_dim) {
  if (d.rows() != d.cols()) throw Error(ErrorCode::NonSquare, "distance matrix must be square");
  if (target_dim < 1) throw Error(ErrorCode::InvalidArgument, "target_dim must be >= 1");
  const Eigen::Index n = d.rows();
  const Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd b = -0.5 * j * d.array().square().matrix() * j;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (b + b.transpose()));
  const Eigen::Index dim = std::min<Eigen::Index>(static_cast<Eigen::Index>(target_dim), n);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(target_dim));
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Eigen::Index src = n - 1 - c;  // eigenvalues ascending
    const double lambda = std::max(0.0, solver.eigenvalues()(src));
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    out.col(c) = v * std::sqrt(lambda);
  }
  return out;
}

Eigen::MatrixXd isomap(const Eigen::MatrixXd& d, const IsomapConfig& cfg) {
  return classical_mds(graph_distances(d, cfg.k_neighbors), cfg.target_dim);
}

Eigen::MatrixXd isomap(const MetricDataset& x, const IsomapConfig& cfg) {
  return isomap(pairwise_distances(x), cfg);
}

Eigen::MatrixXd euclidean_distances(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (rows.row(i) - rows.row(j)).norm();
  return d;
}

Eigen::MatrixXd lens_distances(const std::vector<LensPoint>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  parallel_for(points.size(), [&](std::size_t r) {
    const auto i = static_cast<Eigen::Index>(r);
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = lens_distance(points[r], points[static_cast<std::size_t>(j)]);
  });
  d.triangularView<Eigen::StrictlyLower>() = d.transpose();
  return d;
}

std::optional<double> dim1_per_ratio(const Eigen::MatrixXd& distances, int q) {
  // At the enclosing radius the Rips complex is a cone, so every class of
  // dimension >= 1 has died by then.
  double enclosing = kInfinity;
  if (distances.rows() > 0) enclosing = distances.rowwise().maxCoeff().minCoeff();
  const auto rips = build_rips(distances, 2, std::nextafter(enclosing, kInfinity));
  const auto result = persistent_cohomology(rips, q);
  try {
    return per_ratio(result.diagrams.at(1));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyDiagram) return std::nullopt;
    throw;
  }
}

std::optional<double> PerRatioTable::ratio(const std::string& method, int q) const {
  for (const auto& r : rows) {
    if (r.method == method && r.q == q) return r.ratio;
  }
  return std::nullopt;
}

nlohmann::json PerRatioTable::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json value = nullptr;
    if (r.ratio) value = std::isfinite(*r.ratio) ? nlohmann::json(*r.ratio) : nlohmann::json("inf");
    out.push_back({{"method", r.method}, {"q", r.q}, {"per_ratio", value}});
  }
  return out;
}

std::string PerRatioTable::to_text() const {
  std::vector<int> qs;
  std::vector<std::string> methods;
  for (const auto& r : rows) {
    if (std::find(qs.begin(), qs.end(), r.q) == qs.end()) qs.push_back(r.q);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  char buf[64];
  std::string out = "per1/per2 ";
  for (int q : qs) {
    std::snprintf(buf, sizeof buf, "%10s", ("Z" + std::to_string(q)).c_str());
    out += buf;
  }
  out += "\n";
  for (const auto& m : methods) {
    std::snprintf(buf, sizeof buf, "%-10s", m.c_str());
    out += buf;
    for (int q : qs) {
      const auto v = ratio(m, q);
      if (!v) std::snprintf(buf, sizeof buf, "%10s", "-");
      else if (!std::isfinite(*v)) std::snprintf(buf, sizeof buf, "%10s", "inf");
      else std::snprintf(buf, sizeof buf, "%10.4f", *v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

PerRatioTable compare_per_ratio(const MetricDataset& x, const std::vector<std::size_t>& indices,
                                const std::vector<LensPoint>& lens_points, const std::vector<int>& q_list,
                                const IsomapConfig& cfg) {
  if (lens_points.size() != indices.size()) {
    throw Error(ErrorCode::LengthMismatch, "one Lens coordinate per compared point is required");
  }
  const Eigen::MatrixXd embedded = isomap(pairwise_distances(x, indices), cfg);
  const Eigen::MatrixXd iso_d = euclidean_distances(embedded);
  const Eigen::MatrixXd lc_d = lens_distances(lens_points);
  PerRatioTable table;
  for (int q : q_list) table.rows.push_back({"Isomap", q, dim1_per_ratio(iso_d, q)});
  for (int q : q_list) table.rows.push_back({"LC", q, dim1_per_ratio(lc_d, q)});
  return table;
}

}  // namespace lens
