#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "lenscoords/errors.hpp"
#include "lenscoords/viz_export.hpp"
#include "oracles.hpp"

using namespace lens;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "lenscoords_viz_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("points in the first wedge keep their planar part") {
  const Complex z = std::polar(0.6, 0.1);
  const Complex w = std::polar(0.8, kPi / 3);
  const auto p = fundamental_domain_map(z, w);
  CHECK(p.x == doctest::Approx(z.real()));
  CHECK(p.y == doctest::Approx(z.imag()));
  CHECK(std::abs(p.z) < 1e-12);
}

TEST_CASE("height vanishes on the boundary circle") {
  const auto p = fundamental_domain_map(std::polar(1.0, 1.3), Complex(0, 0));
  CHECK(p.z == 0.0);
  CHECK(std::hypot(p.x, p.y) == doctest::Approx(1.0));
}

TEST_CASE("second wedge is rotated back") {
  const double theta = 2 * kPi / 3 + 0.2;
  const Complex z = std::polar(0.5, theta);
  const Complex w = std::polar(std::sqrt(0.75), 0.3);
  const auto p = fundamental_domain_map(z, w);
  CHECK(p.x == doctest::Approx(0.5 * std::cos(0.2)));
  CHECK(p.y == doctest::Approx(0.5 * std::sin(0.2)));
  CHECK(p.z == doctest::Approx((0.3 - kPi / 3) * std::sqrt(0.75)));
}

TEST_CASE("display map is constant on orbits and stays in the wedge") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 1000; ++t) {
    const CVec v = oracle::random_unit(rng, 2);
    const auto base = fundamental_domain_map(v(0), v(1));
    const double r = std::hypot(base.x, base.y);
    CHECK(r <= 1.0 + 1e-12);
    CHECK(std::atan2(base.y, base.x) >= -1e-12);
    CHECK(std::atan2(base.y, base.x) < 2 * kPi / 3 + 1e-12);
    CHECK(std::abs(base.z) <= kPi / 3 * std::sqrt(std::max(0.0, 1 - r * r)) + 1e-12);
    for (int g = 1; g < 3; ++g) {
      const Complex zeta = root_of_unity(3, g);
      const auto p = fundamental_domain_map(zeta * v(0), zeta * v(1));
      CHECK(std::abs(p.x - base.x) < 1e-9);
      CHECK(std::abs(p.y - base.y) < 1e-9);
      CHECK(std::abs(p.z - base.z) < 1e-9);
    }
  }
}

TEST_CASE("input off the sphere is rejected") {
  try {
    fundamental_domain_map(Complex(0.5, 0), Complex(0.5, 0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonUnitInput);
  }
  std::vector<LensPoint> wrong{make_lens_point(CVec::Ones(3), 3)};
  CHECK_THROWS_AS(fundamental_domain_map(wrong), Error);
}

TEST_CASE("CSV and JSON exports round trip") {
  std::mt19937_64 rng(42);
  std::vector<ExportRow> rows;
  for (std::size_t i = 0; i < 25; ++i) {
    const CVec v = oracle::random_unit(rng, 2);
    rows.push_back({fundamental_domain_map(v(0), v(1)), 3 * i + 1});
  }
  for (auto format : {ExportFormat::csv, ExportFormat::json}) {
    const auto path = scratch(format == ExportFormat::csv ? "cloud.csv" : "cloud.json").string();
    export_cloud(rows, format, path);
    const auto back = read_cloud(path, format);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].p.x == rows[i].p.x);
      CHECK(back[i].p.y == rows[i].p.y);
      CHECK(back[i].p.z == rows[i].p.z);
      CHECK(back[i].source_index == rows[i].source_index);
    }
    CHECK(format_cloud(back, format) == format_cloud(rows, format));
  }
}

TEST_CASE("unwritable path reports IoFailure") {
  try {
    export_cloud({}, ExportFormat::csv, "/nonexistent-dir/x/cloud.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoFailure);
  }
  CHECK_THROWS_AS(read_cloud("/nonexistent-dir/cloud.csv", ExportFormat::csv), Error);
}
