#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "lenscoords/errors.hpp"
#include "lenscoords/landmarks.hpp"

using namespace lens;

namespace {

MetricDataset line(std::vector<double> xs) {
  MetricDataset d;
  for (double x : xs) d.points.push_back({x});
  return d;
}

}  // namespace

TEST_CASE("maxmin on a line") {
  const auto x = line({0, 1, 10});
  const auto l = maxmin_landmarks(x, 3, {0});
  CHECK(l.indices == std::vector<std::size_t>{0, 2, 1});
  CHECK(l.cover_radius == 0.0);
  const auto two = maxmin_landmarks(x, 2, {0});
  CHECK(two.indices == std::vector<std::size_t>{0, 2});
  CHECK(two.cover_radius == doctest::Approx(1.0));
}

TEST_CASE("maxmin edge sizes") {
  const auto x = line({0, 3, 1, 7, 2, 2});
  auto all = maxmin_landmarks(x, x.size(), {}, 4).indices;
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expect(x.size());
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(all == expect);
  CHECK(maxmin_landmarks(x, 1, {4}).indices == std::vector<std::size_t>{4});
}

TEST_CASE("maxmin ties go to the smallest index") {
  const auto x = line({0, -1, 1});
  CHECK(maxmin_landmarks(x, 2, {0}).indices == std::vector<std::size_t>{0, 1});
}

TEST_CASE("maxmin keeps seeds in order and is reproducible") {
  const auto x = line({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto l = maxmin_landmarks(x, 4, {5, 2});
  CHECK(l.indices[0] == 5);
  CHECK(l.indices[1] == 2);
  CHECK(maxmin_landmarks(x, 4, {}, 3).indices == maxmin_landmarks(x, 4, {}, 3).indices);
}

TEST_CASE("maxmin errors") {
  const auto x = line({0, 1, 2});
  CHECK_THROWS_AS(maxmin_landmarks(x, 4), Error);
  try {
    maxmin_landmarks(x, 2, {1, 1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateSeeds);
  }
  CHECK_THROWS_AS(maxmin_landmarks(x, 2, {5}), Error);
}

TEST_CASE("random landmarks") {
  const auto x = line({0, 1, 2, 3, 4, 5});
  const auto l = random_landmarks(x, 4, 9);
  auto sorted = l.indices;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK(l.indices.size() == 4);
  CHECK(l.cover_radius == doctest::Approx(cover_radius(x, l.indices)));
  CHECK(random_landmarks(x, 4, 9).indices == l.indices);
  CHECK_THROWS_AS(random_landmarks(x, 7, 1), Error);
}

TEST_CASE("landmark JSON round trip") {
  const LandmarkSet l{{4, 1, 9}, 0.25};
  const auto back = landmarks_from_json(to_json(l));
  CHECK(back.indices == l.indices);
  CHECK(back.cover_radius == l.cover_radius);
}
