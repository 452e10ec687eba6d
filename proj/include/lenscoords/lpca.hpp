#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "json.hpp"
#include "lenscoords/lens_map.hpp"
#include "lenscoords/numeric.hpp"

namespace lens {

struct Projection {
  LensPoint point;  // class of P_u(v) / |P_u(v)|, still expressed in C^m
  double distance = 0.0;
};

// arccos(|v - <v,u> u|): the d_L distance from [v] to the sub-Lens space
// orthogonal to u. Defined for every v, including v in span(u).
double distance_to_sublens(const CVec& u, const CVec& v);

// Closest point of L^{m-1}(u) to [v] and its distance. Throws
// DegenerateProjection when v lies in span_C(u).
Projection lens_project(const CVec& u, const LensPoint& v);

// Eigenvector for the smallest eigenvalue of sum_j y_j y_j^H / N, where the
// columns of points are the y_j.
CVec last_lens_comp(const CMat& points);
CVec last_lens_comp(const LensCloud& cloud);

// Orthonormal basis of span(basis)^perp built greedily from the standard basis.
CMat orthonormal_complement(const CMat& basis);

struct VarianceProfile {
  std::vector<double> var;   // var[k-1] = var_k, var_1 = 0
  std::vector<double> pvar;  // var_k / var_n
};

struct LpcaResult {
  int q = 3;
  CMat components;  // column k-1 holds v_k
  VarianceProfile variance;
  std::size_t dropped = 0;  // projections skipped for vanishing norm
  std::map<std::size_t, std::vector<LensPoint>> coords;

  std::size_t dim() const { return static_cast<std::size_t>(components.cols()); }

  // Entry k-1 is the share of variance carried by v_1..v_k, i.e. pvar(k+1);
  // this is the per-dimension row reported by the tools.
  std::vector<double> dim_profile() const;
};

// Classes of V_k^H y_j / |V_k^H y_j| in L_q^k.
std::vector<LensPoint> principal_coordinates(const LensCloud& cloud, const CMat& components, std::size_t k);

VarianceProfile variance_profile(const LensCloud& cloud, const CMat& components);

LpcaResult lpca(const LensCloud& cloud, const std::vector<std::size_t>& coord_dims = {2});

struct DimRule {
  enum class Mode { threshold, gap };
  Mode mode = Mode::threshold;
  double value = 0.75;
};

// profile[k-1] is the cumulative share at dimension k. Threshold: smallest k
// with profile >= tau. Gap: smallest k with profile[k] - profile[k-1] < gamma.
// Falls back to profile.size().
std::size_t choose_dim(std::span<const double> profile, const DimRule& rule);

nlohmann::json to_json(const LpcaResult& r);
LpcaResult lpca_from_json(const nlohmann::json& j);

}  // namespace lens
