#include <cmath>
#include <random>

#include "doctest.h"
#include "lenscoords/errors.hpp"
#include "lenscoords/lens_map.hpp"
#include "lenscoords/lpca.hpp"
#include "lenscoords/persistence.hpp"
#include "oracles.hpp"

using namespace lens;

namespace {

CVec unit(Eigen::Index n, Eigen::Index i) { return CVec::Unit(n, i); }

LensCloud cloud_of(const std::vector<CVec>& reps, int q) {
  LensCloud c;
  c.q = q;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    c.points.push_back(make_lens_point(reps[i], q));
    c.source_index.push_back(i);
  }
  return c;
}

double phase_free_gap(const CVec& a, const CVec& b) { return 1.0 - std::abs(a.dot(b)); }

Eigen::MatrixXd dl_matrix(const std::vector<LensPoint>& p) {
  Eigen::MatrixXd d(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) d(i, j) = lens_distance(p[i], p[j]);
  return d;
}

// Lens cloud of a noisy circle through 12 landmarks for the given cocycle.
LensCloud circle_cloud(const Cocycle& eta, const Eigen::MatrixXd& landmarks, double eps) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd d(300, landmarks.rows());
  for (int i = 0; i < 300; ++i) {
    const double th = 2 * kPi * u(rng), r = 0.95 + 0.1 * u(rng);
    for (Eigen::Index l = 0; l < landmarks.rows(); ++l)
      d(i, l) = std::hypot(r * std::cos(th) - landmarks(l, 0), r * std::sin(th) - landmarks(l, 1));
  }
  return lens_coordinates(d, eta, LensMapConfig{eps, eta.q()}).cloud;
}

}  // namespace

TEST_CASE("lens_project") {
  const CVec u = unit(3, 0);
  const auto perp = make_lens_point(unit(3, 1), 3);
  const auto p = lens_project(u, perp);
  CHECK(p.distance == doctest::Approx(0.0));
  CHECK(class_equal(p.point, perp));

  const CVec w = unit(3, 2);
  const auto mixed = make_lens_point((u + w) / std::sqrt(2.0), 3);
  const auto m = lens_project(u, mixed);
  CHECK(m.distance == doctest::Approx(kPi / 4));
  CHECK(class_equal(m.point, LensPoint{w, 3}));

  try {
    lens_project(u, make_lens_point(Complex(0, 1) * u, 3));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateProjection);
  }
}

TEST_CASE("projection is the closest point of the sub-Lens space") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const CVec u = oracle::random_unit(rng, 4);
    const LensPoint v{oracle::random_unit(rng, 4), 3};
    const auto p = lens_project(u, v);
    CHECK(std::abs(lens_distance(v, p.point) - p.distance) < 1e-9);
    CHECK(std::abs(distance_to_sublens(u, v.rep) - p.distance) < 1e-12);
    CHECK(std::abs(u.dot(p.point.rep)) < 1e-12);
    for (int t = 0; t < 200; ++t) {
      CVec w = project_offspan(u, oracle::random_unit(rng, 4));
      w /= w.norm();
      CHECK(p.distance <= lens_distance(v, LensPoint{w, 3}) + 1e-12);
    }
  }
}

TEST_CASE("last_lens_comp") {
  const CMat e1 = unit(2, 0).replicate(1, 5);
  CHECK(phase_free_gap(last_lens_comp(e1), unit(2, 1)) < 1e-12);

  CMat y(3, 4);
  const double s = 1.0 / std::sqrt(2.0);
  y.col(0) = unit(3, 0);
  y.col(1) = unit(3, 1);
  y.col(2) = s * (unit(3, 0) + unit(3, 1));
  y.col(3) = s * (unit(3, 0) - Complex(0, 1) * unit(3, 1));
  CHECK(phase_free_gap(last_lens_comp(y), unit(3, 2)) < 1e-12);

  CHECK_THROWS_AS(last_lens_comp(CMat(3, 0)), Error);
}

TEST_CASE("last_lens_comp ignores representative phases") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> g(0, 2);
  CMat y(4, 60);
  for (int j = 0; j < 60; ++j) {
    CVec v = oracle::random_unit(rng, 4);
    v(3) *= 0.2;
    y.col(j) = v / v.norm();
  }
  CMat rotated = y;
  for (int j = 0; j < 60; ++j) rotated.col(j) *= root_of_unity(3, g(rng));
  CHECK(phase_free_gap(last_lens_comp(y), last_lens_comp(rotated)) < 1e-10);
}

TEST_CASE("orthonormal_complement") {
  std::mt19937_64 rng(13);
  CMat basis(5, 2);
  basis.col(0) = oracle::random_unit(rng, 5);
  basis.col(1) = project_offspan(basis.col(0), oracle::random_unit(rng, 5));
  basis.col(1) /= basis.col(1).norm();
  const CMat c = orthonormal_complement(basis);
  CHECK(c.cols() == 3);
  CHECK((c.adjoint() * c - CMat::Identity(3, 3)).norm() < 1e-12);
  CHECK((basis.adjoint() * c).norm() < 1e-12);
}

TEST_CASE("lpca on a cloud inside a coordinate plane") {
  std::mt19937_64 rng(14);
  std::vector<CVec> reps;
  for (int j = 0; j < 40; ++j) {
    CVec v = CVec::Zero(3);
    v.head(2) = oracle::random_unit(rng, 2);
    reps.push_back(v);
  }
  const auto cloud = cloud_of(reps, 3);
  const auto r = lpca(cloud);
  CHECK(r.dim() == 3);
  CHECK((r.components.adjoint() * r.components - CMat::Identity(3, 3)).norm() < 1e-8);
  CHECK(phase_free_gap(r.components.col(2), unit(3, 2)) < 1e-10);
  CHECK(r.variance.pvar.back() == 1.0);
  // the l = 3 term measures the distance to the sub-Lens space orthogonal to
  // the second coordinate, so it does not vanish here
  double increment = 0.0;
  for (const auto& y : cloud.points) {
    const CVec c = r.components.adjoint() * y.rep;
    increment += std::pow(std::asin(std::min(1.0, std::abs(c(1)))), 2);
  }
  CHECK(r.variance.var[2] - r.variance.var[1] == doctest::Approx(increment / 40));
  const auto& p2 = r.coords.at(2);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = 0; j < cloud.size(); ++j)
      CHECK(std::abs(lens_distance(p2[i], p2[j]) - lens_distance(cloud.points[i], cloud.points[j])) < 1e-9);
}

TEST_CASE("lpca of a single point") {
  std::mt19937_64 rng(15);
  const auto cloud = cloud_of({oracle::random_unit(rng, 4)}, 5);
  const auto r = lpca(cloud, {1});
  CHECK(std::abs(std::abs(r.components.col(0).dot(cloud.points[0].rep)) - 1.0) < 1e-10);
  CHECK(std::abs(r.coords.at(1)[0].rep(0)) == doctest::Approx(1.0));
  // the point sits on v_1, a quarter turn from the complementary sub-Lens space
  CHECK(r.variance.var[0] == 0.0);
  for (std::size_t k = 1; k < 4; ++k) CHECK(r.variance.var[k] == doctest::Approx(kPi * kPi / 4));
  CHECK(r.dim_profile().front() == 1.0);
}

TEST_CASE("variance profile invariants on random clouds") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<CVec> reps;
    for (int j = 0; j < 80; ++j) {
      CVec v = oracle::random_unit(rng, 6);
      for (int k = 0; k < 6; ++k) v(k) *= 1.0 / (1 + k);
      reps.push_back(v);
    }
    const auto r = lpca(cloud_of(reps, 3), {2, 3});
    CHECK(r.variance.var.front() == 0.0);
    CHECK(r.variance.pvar.back() == 1.0);
    for (std::size_t k = 1; k < r.variance.pvar.size(); ++k)
      CHECK(r.variance.pvar[k] >= r.variance.pvar[k - 1]);
    CHECK((r.components.adjoint() * r.components - CMat::Identity(6, 6)).norm() < 1e-8);
    CHECK(r.coords.at(3).size() == 80);
    CHECK(r.dim_profile().size() == 5);
    CHECK(r.dim_profile().front() == r.variance.pvar[1]);
  }
}

TEST_CASE("cloud on a sub-Lens space has a flat profile") {
  std::mt19937_64 rng(17);
  std::vector<CVec> reps;
  for (int j = 0; j < 30; ++j) {
    CVec v = CVec::Zero(4);
    v(0) = std::polar(1.0, 2 * kPi * j / 30.0);
    reps.push_back(v);
  }
  const auto r = lpca(cloud_of(reps, 3));
  const CMat comps = r.components;
  CHECK(std::abs(std::abs(comps.col(0).dot(unit(4, 0))) - 1.0) < 1e-10);
  const auto v = variance_profile(cloud_of(reps, 3), comps);
  for (std::size_t k = 1; k < 4; ++k) CHECK(v.var[k] == doctest::Approx(kPi * kPi / 4));
  for (std::size_t k = 1; k < 4; ++k) CHECK(v.pvar[k] == doctest::Approx(1.0));
}

TEST_CASE("cohomologous cocycles give isometric principal coordinates") {
  const int n = 12;
  Eigen::MatrixXd l(n, 2);
  for (int i = 0; i < n; ++i) l.row(i) << std::cos(2 * kPi * i / n), std::sin(2 * kPi * i / n);
  const auto ph = persistent_cohomology(build_rips(oracle::euclidean(l), 2), 3);
  const auto chosen = select_class(ph.diagrams[1]);
  const auto& eta = ph.cocycles[chosen.index];
  const double eps = default_epsilon(chosen.pair);
  const auto base = lpca(circle_cloud(eta, l, eps), {2, 3});
  std::mt19937_64 rng(18);
  std::uniform_int_distribution<int> digit(0, 2);
  for (int t = 0; t < 3; ++t) {
    std::vector<int> alpha(n);
    for (int& a : alpha) a = digit(rng);
    const auto other = lpca(circle_cloud(eta.add_coboundary(alpha), l, eps), {2, 3});
    for (std::size_t k : {2u, 3u}) {
      const double gap = (dl_matrix(base.coords.at(k)) - dl_matrix(other.coords.at(k))).cwiseAbs().maxCoeff();
      CHECK(gap < 1e-6);
    }
    for (std::size_t k = 0; k < base.variance.pvar.size(); ++k)
      CHECK(std::abs(base.variance.pvar[k] - other.variance.pvar[k]) < 1e-6);
  }
}

TEST_CASE("lpca input checks") {
  CHECK_THROWS_AS(lpca(cloud_of({unit(1, 0)}, 3)), Error);
  std::mt19937_64 rng(19);
  const auto cloud = cloud_of({oracle::random_unit(rng, 3), oracle::random_unit(rng, 3)}, 3);
  const auto r = lpca(cloud);
  CHECK_THROWS_AS(principal_coordinates(cloud, r.components, 0), Error);
  CHECK_THROWS_AS(principal_coordinates(cloud, r.components, 4), Error);
}

TEST_CASE("choose_dim") {
  std::vector<double> table{0.62, 0.75, 0.81, 0.86, 0.89, 0.95, 1.0};
  CHECK(choose_dim(table, {DimRule::Mode::threshold, 0.75}) == 2);
  CHECK(choose_dim(table, {DimRule::Mode::threshold, 0.5}) == 1);
  CHECK(choose_dim(table, {DimRule::Mode::threshold, 1.0}) == 7);
  CHECK(choose_dim(table, {DimRule::Mode::gap, 100.0}) == 1);
  CHECK(choose_dim(table, {DimRule::Mode::gap, 0.055}) == 3);
  CHECK(choose_dim(table, {DimRule::Mode::gap, 0.0}) == 7);
}

TEST_CASE("lpca JSON round trip") {
  std::mt19937_64 rng(20);
  std::vector<CVec> reps;
  for (int j = 0; j < 10; ++j) reps.push_back(oracle::random_unit(rng, 3));
  const auto r = lpca(cloud_of(reps, 3), {1, 2});
  const auto back = lpca_from_json(to_json(r));
  CHECK(back.q == 3);
  CHECK((back.components - r.components).norm() == 0.0);
  CHECK(back.variance.pvar == r.variance.pvar);
  CHECK(back.coords.size() == 2);
  CHECK(to_json(back).dump() == to_json(r).dump());
}
