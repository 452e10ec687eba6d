#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "lenscoords/spaces.hpp"

namespace lens {

struct LandmarkSet {
  std::vector<std::size_t> indices;
  double cover_radius = 0.0;  // max over X of the distance to the nearest landmark
};

// Greedy maxmin selection. The given seeds come first in the given order; an
// empty seed list starts from an index drawn with rng_seed. Ties go to the
// smallest index.
LandmarkSet maxmin_landmarks(const MetricDataset& x, std::size_t n,
                             const std::vector<std::size_t>& seeds = {},
                             std::uint64_t rng_seed = 0);

// Uniform sample without replacement.
LandmarkSet random_landmarks(const MetricDataset& x, std::size_t n, std::uint64_t rng_seed);

double cover_radius(const MetricDataset& x, const std::vector<std::size_t>& indices);

nlohmann::json to_json(const LandmarkSet& l);
LandmarkSet landmarks_from_json(const nlohmann::json& j);

}  // namespace lens
