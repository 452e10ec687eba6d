#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace lens {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Simplex {
  std::array<std::uint32_t, 4> vertices{};  // ascending, first dim+1 entries used
  int dim = 0;
  double diameter = 0.0;

  std::span<const std::uint32_t> verts() const {
    return {vertices.data(), static_cast<std::size_t>(dim + 1)};
  }
};

// Simplices in filtration order: (diameter, dim, lexicographic vertices).
class FilteredComplex {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  FilteredComplex(std::size_t num_vertices, int max_dim, std::vector<Simplex> simplices);

  std::size_t num_vertices() const { return num_vertices_; }
  int max_dim() const { return max_dim_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const Simplex& operator[](std::size_t i) const { return simplices_[i]; }
  std::size_t size() const { return simplices_.size(); }

  // Filtration position of the simplex with these (ascending) vertices, or npos.
  std::size_t find(std::span<const std::uint32_t> vertices) const;

 private:
  std::size_t num_vertices_;
  int max_dim_;
  std::vector<Simplex> simplices_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

// All simplices of dimension <= max_dim whose diameter is < max_diameter.
// Vertices are always present at diameter 0.
FilteredComplex build_rips(const Eigen::MatrixXd& distances, int max_dim,
                           double max_diameter = kInfinity);

struct PersistencePair {
  double birth = 0.0;
  double death = kInfinity;

  double persistence() const { return death - birth; }
  bool finite() const { return death < kInfinity; }
};

struct PersistenceDiagram {
  int dim = 0;
  std::vector<PersistencePair> pairs;
};

struct CocycleEdge {
  std::uint32_t j = 0;
  std::uint32_t k = 0;  // j < k
  int value = 0;        // in [0, q)
};

// Z_q-valued 1-cochain on the edges of diameter < valid_below.
class Cocycle {
 public:
  Cocycle() = default;
  Cocycle(int q, std::vector<CocycleEdge> edges, double valid_below, double birth = 0.0);

  int q() const { return q_; }
  double valid_below() const { return valid_below_; }
  double birth() const { return birth_; }
  const std::vector<CocycleEdge>& edges() const { return edges_; }

  // eta_jk with eta_kj = -eta_jk and eta_jj = 0; nullopt when the edge is absent.
  std::optional<int> value(std::uint32_t j, std::uint32_t k) const;

  // eta + delta^0(alpha): (j, k) -> eta_jk + alpha_k - alpha_j.
  Cocycle add_coboundary(std::span<const int> alpha) const;

 private:
  int q_ = 2;
  std::vector<CocycleEdge> edges_;
  double valid_below_ = kInfinity;
  double birth_ = 0.0;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

struct PersistenceResult {
  int q = 2;
  std::vector<PersistenceDiagram> diagrams;  // dims 0 .. max_dim - 1
  // cocycles[i] represents diagrams[1].pairs[i]
  std::vector<Cocycle> cocycles;
};

// Persistent cohomology over F_q by reduction of the coboundary matrix in
// reverse filtration order. Zero-length pairs are dropped; pairs are sorted by
// (birth, death).
PersistenceResult persistent_cohomology(const FilteredComplex& complex, int q);

// Number of 2-simplices of diameter < valid_below on which delta(eta) != 0.
std::size_t cocycle_violations(const FilteredComplex& complex, const Cocycle& eta);

struct SelectedClass {
  PersistencePair pair;
  std::size_t index = 0;
};

// Most persistent pair with 2 birth < death.
SelectedClass select_class(const PersistenceDiagram& dgm);

// Ratio of the two largest finite persistences; +inf with a single finite pair.
double per_ratio(const PersistenceDiagram& dgm);

nlohmann::json to_json(const PersistenceDiagram& dgm);
nlohmann::json to_json(const Cocycle& eta);
nlohmann::json to_json(const PersistenceResult& r);
PersistenceDiagram diagram_from_json(const nlohmann::json& j);
Cocycle cocycle_from_json(const nlohmann::json& j);
PersistenceResult persistence_from_json(const nlohmann::json& j);

}  // namespace lens
