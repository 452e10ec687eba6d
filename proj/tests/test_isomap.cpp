#include <cmath>
#include <random>

#include "doctest.h"
#include "lenscoords/errors.hpp"
#include "lenscoords/isomap.hpp"
#include "lenscoords/persistence.hpp"
#include "oracles.hpp"

using namespace lens;

namespace {

MetricDataset planar(const Eigen::MatrixXd& p) {
  MetricDataset x;
  x.metric = MetricId::euclidean;
  for (Eigen::Index i = 0; i < p.rows(); ++i) x.points.push_back({p(i, 0), p(i, 1)});
  return x;
}

Eigen::MatrixXd ring(int n, double radius) {
  Eigen::MatrixXd p(n, 2);
  for (int i = 0; i < n; ++i) p.row(i) << radius * std::cos(2 * kPi * i / n), radius * std::sin(2 * kPi * i / n);
  return p;
}

}  // namespace

TEST_CASE("classical MDS reproduces Euclidean configurations") {
  std::mt19937_64 rng(51);
  const Eigen::MatrixXd p = oracle::random_points(rng, 20, 3);
  const Eigen::MatrixXd d = oracle::euclidean(p);
  const Eigen::MatrixXd y = classical_mds(d, 3);
  CHECK(y.rows() == 20);
  CHECK(y.cols() == 3);
  CHECK((euclidean_distances(y) - d).cwiseAbs().maxCoeff() < 1e-9);

  const Eigen::MatrixXd through_graph = isomap(d, IsomapConfig{19, 3});
  CHECK((euclidean_distances(through_graph) - d).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("collinear points embed on a line") {
  Eigen::MatrixXd p(3, 1);
  p << 0.0, 1.0, 3.0;
  const Eigen::MatrixXd d = oracle::euclidean(p);
  const Eigen::MatrixXd y = classical_mds(d, 1);
  CHECK((euclidean_distances(y) - d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("graph distances follow the neighbor graph") {
  Eigen::MatrixXd p(4, 1);
  p << 0.0, 1.0, 2.0, 3.0;
  const Eigen::MatrixXd g = graph_distances(oracle::euclidean(p), 1);
  CHECK(g(0, 3) == doctest::Approx(3.0));
  CHECK(g(1, 2) == doctest::Approx(1.0));

  // the chord of a ring is replaced by the walk along it
  const Eigen::MatrixXd r = ring(40, 1.0);
  const Eigen::MatrixXd gr = graph_distances(oracle::euclidean(r), 2);
  const double step = 2 * std::sin(kPi / 40);
  CHECK(gr(0, 20) == doctest::Approx(20 * step));
}

TEST_CASE("disconnected neighbor graph") {
  Eigen::MatrixXd p(6, 1);
  p << 0.0, 0.1, 0.2, 10.0, 10.1, 10.2;
  try {
    graph_distances(oracle::euclidean(p), 2);
    FAIL("expected an error");
  } catch (const DisconnectedGraph& e) {
    CHECK(e.components() == 2);
    CHECK(e.code() == ErrorCode::DisconnectedGraph);
  }
}

TEST_CASE("Isomap of a circle keeps one dominant class") {
  std::mt19937_64 rng(52);
  std::normal_distribution<double> noise(0.0, 0.02);
  Eigen::MatrixXd p = ring(60, 1.0);
  for (Eigen::Index i = 0; i < p.rows(); ++i) p.row(i) += Eigen::RowVector2d(noise(rng), noise(rng));
  const Eigen::MatrixXd y = isomap(oracle::euclidean(p), IsomapConfig{6, 2});
  const auto ratio = dim1_per_ratio(euclidean_distances(y), 2);
  REQUIRE(ratio.has_value());
  CHECK(*ratio > 5.0);
}

TEST_CASE("per-ratio of a point set without loops") {
  Eigen::MatrixXd p(3, 1);
  p << 0.0, 1.0, 2.5;
  CHECK_FALSE(dim1_per_ratio(oracle::euclidean(p), 2).has_value());
}

TEST_CASE("comparison table") {
  std::mt19937_64 rng(53);
  const Eigen::MatrixXd p = ring(30, 1.0);
  const auto x = planar(p);
  std::vector<std::size_t> idx(30);
  std::vector<LensPoint> pts;
  for (std::size_t i = 0; i < 30; ++i) {
    idx[i] = i;
    pts.push_back(make_lens_point(oracle::random_unit(rng, 2), 3));
  }
  const IsomapConfig cfg{29, 2};
  const auto table = compare_per_ratio(x, idx, pts, {2, 3}, cfg);
  CHECK(table.rows.size() == 4);
  const Eigen::MatrixXd lc = lens_distances(pts);
  for (int q : {2, 3}) {
    CHECK(table.ratio("LC", q) == dim1_per_ratio(lc, q));
    CHECK(table.ratio("Isomap", q) == dim1_per_ratio(euclidean_distances(isomap(oracle::euclidean(p), cfg)), q));
  }
  CHECK_FALSE(table.ratio("LC", 5).has_value());
  CHECK(table.to_json().size() == 4);
  CHECK(table.to_text().find("Isomap") != std::string::npos);
  CHECK_THROWS_AS(compare_per_ratio(x, idx, {}, {2}, cfg), Error);
}
