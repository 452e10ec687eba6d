#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lenscoords/isomap.hpp"
#include "lenscoords/landmarks.hpp"
#include "lenscoords/lens_map.hpp"
#include "lenscoords/lpca.hpp"
#include "lenscoords/persistence.hpp"
#include "lenscoords/spaces.hpp"
#include "lenscoords/viz_export.hpp"

namespace lens {

enum class Space { circle, moore, lens };

std::string to_string(Space s);
Space space_from_string(const std::string& name);

struct PipelineConfig {
  Space space = Space::circle;
  std::size_t n_points = 2000;
  std::size_t n_landmarks = 10;
  int q = 3;
  std::uint64_t seed = 0;
  double noise = 0.1;                  // circle only
  std::size_t boundary_seeds = 10;     // moore only: landmarks seeded near the glued boundary
  MetricId moore_metric = MetricId::moore_quotient;
  std::optional<double> epsilon;       // fixed scale; default rule otherwise
  double delta = 1e-5;
  std::optional<std::size_t> target_dim;
  DimRule dim_rule{DimRule::Mode::threshold, 0.75};
  std::size_t knn = 8;
  std::size_t isomap_dim = 4;
  std::size_t compare_points = 0;      // 0: compare on the landmarks
  bool compare = true;
  int max_dim = 2;
};

// Desk-scale settings per space: circle 2000 points / 10 landmarks, Moore
// space 1500 / 40 compared on 150 points, L_3^2 3000 / 150.
PipelineConfig desk_defaults(Space space);

// Throws ConfigError.
void validate(const PipelineConfig& cfg);

nlohmann::json to_json(const PipelineConfig& cfg);

struct PipelineReport {
  PipelineConfig config;
  MetricDataset dataset;
  LandmarkSet landmarks;
  std::map<int, PersistenceResult> persistence;  // keyed by q
  SelectedClass selected;
  LensMapConfig map_config;
  LensCoordinates lens;
  LpcaResult lpca;
  std::size_t target_dim = 1;
  std::size_t cocycle_violations = 0;
  std::vector<DomainPoint> domain;  // only for q = 3
  std::optional<PerRatioTable> comparison;
  std::vector<std::size_t> compare_indices;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage

  // Deterministic record of the run; wall-clock timings are kept out of it.
  nlohmann::json summary() const;
  std::string variance_row() const;
};

// Errors keep their code and gain the failing stage's name in the message.
PipelineReport run_pipeline(const PipelineConfig& cfg);

void write_report(const PipelineReport& report, const std::string& out_dir);

// Dominant (largest finite) dimension-1 persistence, 0 when there is none.
double dominant_persistence(const PersistenceDiagram& dgm);

std::vector<std::size_t> moore_boundary_seeds(const MetricDataset& x, std::size_t count);

}  // namespace lens
