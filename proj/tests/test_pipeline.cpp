#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "lenscoords/errors.hpp"
#include "lenscoords/pipeline.hpp"

using namespace lens;

namespace {

ErrorCode code_of(const PipelineConfig& cfg) {
  try {
    run_pipeline(cfg);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

PipelineConfig small_circle() {
  auto cfg = desk_defaults(Space::circle);
  cfg.noise = 0.05;
  cfg.n_points = 600;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("configuration checks") {
  auto cfg = small_circle();
  cfg.q = 4;
  CHECK(code_of(cfg) == ErrorCode::ConfigError);
  cfg = small_circle();
  cfg.n_landmarks = cfg.n_points + 1;
  CHECK(code_of(cfg) == ErrorCode::ConfigError);
  cfg = small_circle();
  cfg.epsilon = 100.0;
  CHECK(code_of(cfg) == ErrorCode::ConfigError);
  CHECK_THROWS_AS(space_from_string("torus"), Error);
  CHECK(space_from_string(to_string(Space::lens)) == Space::lens);
}

TEST_CASE("desk defaults") {
  CHECK(desk_defaults(Space::circle).n_landmarks == 10);
  CHECK(desk_defaults(Space::moore).n_points == 1500);
  CHECK(desk_defaults(Space::lens).n_landmarks == 150);
  for (auto s : {Space::circle, Space::moore, Space::lens}) CHECK_NOTHROW(validate(desk_defaults(s)));
}

TEST_CASE("circle run") {
  const auto r = run_pipeline(small_circle());
  CHECK(r.cocycle_violations == 0);
  CHECK(2 * r.selected.pair.birth < r.selected.pair.death);
  CHECK(r.map_config.epsilon >= r.selected.pair.birth);
  CHECK(r.map_config.epsilon < r.selected.pair.death / 2);
  CHECK(r.lens.cloud.size() == 600);
  CHECK(r.lens.coverage.max_partition_error <= 1e-12);
  CHECK(r.lpca.dim() == 10);
  CHECK(r.domain.size() == 600);
  REQUIRE(r.comparison.has_value());
  CHECK(r.comparison->rows.size() == 4);
  const auto profile = r.lpca.dim_profile();
  CHECK(profile.back() == 1.0);
  CHECK(r.target_dim >= 1);
  CHECK(r.target_dim <= 10);
  CHECK(r.variance_row().find("0.") != std::string::npos);
}

TEST_CASE("Moore space carries a Z_3 class and no Z_2 class") {
  auto cfg = desk_defaults(Space::moore);
  cfg.compare = false;
  const auto r = run_pipeline(cfg);
  CHECK(r.cocycle_violations == 0);
  const double z3 = dominant_persistence(r.persistence.at(3).diagrams.at(1));
  const double z2 = dominant_persistence(r.persistence.at(2).diagrams.at(1));
  CHECK(z3 > 1.5 * z2);
  CHECK(2 * r.selected.pair.birth < r.selected.pair.death);
  CHECK_FALSE(r.comparison.has_value());
}

TEST_CASE("boundary seeds lie near the glued circle") {
  const auto x = sample_moore(500, 1);
  const auto seeds = moore_boundary_seeds(x, 10);
  CHECK(seeds.size() == 10);
  for (std::size_t s : seeds) CHECK(std::hypot(x.points[s][0], x.points[s][1]) > 0.8);
}

TEST_CASE("summary is deterministic and the report is written") {
  auto cfg = small_circle();
  cfg.compare = false;
  const auto a = run_pipeline(cfg);
  const auto b = run_pipeline(cfg);
  CHECK(a.summary().dump() == b.summary().dump());

  const auto dir = std::filesystem::temp_directory_path() / "lenscoords_pipeline_test";
  std::filesystem::remove_all(dir);
  write_report(a, dir.string());
  for (const char* f : {"summary.json", "dataset.json", "landmarks.json", "persistence_z3.json", "persistence_z2.json", "class.json", "lens_cloud.json",
                        "lpca.json", "variance_table.txt", "domain.csv", "timings.json"})
    CHECK_MESSAGE(std::filesystem::exists(dir / f), f);
  CHECK_FALSE(std::filesystem::exists(dir / "comparison.json"));
}
