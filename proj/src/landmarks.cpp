#include "lenscoords/landmarks.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "lenscoords/errors.hpp"
#include "lenscoords/parallel.hpp"

namespace lens {

namespace {

void check_count(const MetricDataset& x, std::size_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "landmark count must be >= 1");
  if (n > x.size()) {
    throw Error(ErrorCode::InvalidArgument, "requested " + std::to_string(n) +
                                                " landmarks from " + std::to_string(x.size()) + " points");
  }
}

void relax(const MetricDataset& x, std::size_t l, std::vector<double>& min_dist) {
  parallel_for(x.size(), [&](std::size_t i) { min_dist[i] = std::min(min_dist[i], x.distance(i, l)); });
}

}  // namespace

LandmarkSet maxmin_landmarks(const MetricDataset& x, std::size_t n,
                             const std::vector<std::size_t>& seeds, std::uint64_t rng_seed) {
  check_count(x, n);
  if (seeds.size() > n) throw Error(ErrorCode::InvalidArgument, "more seeds than landmarks");
  std::set<std::size_t> seen;
  for (std::size_t s : seeds) {
    if (s >= x.size()) throw Error(ErrorCode::InvalidArgument, "seed index out of range");
    if (!seen.insert(s).second) throw Error(ErrorCode::DuplicateSeeds, "duplicate seed index " + std::to_string(s));
  }

  LandmarkSet out;
  out.indices = seeds;
  if (out.indices.empty()) {
    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    out.indices.push_back(pick(rng));
  }
  std::vector<double> min_dist(x.size(), std::numeric_limits<double>::infinity());
  std::vector<char> chosen(x.size(), 0);
  for (std::size_t l : out.indices) {
    relax(x, l, min_dist);
    chosen[l] = 1;
  }

  while (out.indices.size() < n) {
    // strict > keeps the smallest index among ties
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!chosen[i] && min_dist[i] > best_d) {
        best_d = min_dist[i];
        best = i;
      }
    }
    out.indices.push_back(best);
    chosen[best] = 1;
    relax(x, best, min_dist);
  }
  out.cover_radius = *std::max_element(min_dist.begin(), min_dist.end());
  return out;
}

LandmarkSet random_landmarks(const MetricDataset& x, std::size_t n, std::uint64_t rng_seed) {
  check_count(x, n);
  std::vector<std::size_t> all(x.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::mt19937_64 rng(rng_seed);
  // partial Fisher-Yates
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(n);
  return {all, cover_radius(x, all)};
}

double cover_radius(const MetricDataset& x, const std::vector<std::size_t>& indices) {
  if (indices.empty()) return std::numeric_limits<double>::infinity();
  std::vector<double> min_dist(x.size(), std::numeric_limits<double>::infinity());
  for (std::size_t l : indices) relax(x, l, min_dist);
  return *std::max_element(min_dist.begin(), min_dist.end());
}

nlohmann::json to_json(const LandmarkSet& l) {
  return {{"indices", l.indices}, {"cover_radius", l.cover_radius}};
}

LandmarkSet landmarks_from_json(const nlohmann::json& j) {
  try {
    return {j.at("indices").get<std::vector<std::size_t>>(), j.at("cover_radius").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed landmark JSON: ") + e.what());
  }
}

}  // namespace lens
