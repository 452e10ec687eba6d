#include "lenscoords/lpca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lenscoords/errors.hpp"

namespace lens {

namespace {

constexpr double kZeroNorm = 1e-12;

CMat as_matrix(const LensCloud& cloud) {
  if (cloud.points.empty()) throw Error(ErrorCode::EmptyCloud, "lens cloud is empty");
  const auto n = static_cast<Eigen::Index>(cloud.dim());
  CMat y(n, static_cast<Eigen::Index>(cloud.size()));
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    if (cloud.points[j].dim() != n) throw Error(ErrorCode::DimensionMismatch, "lens cloud mixes dimensions");
    y.col(static_cast<Eigen::Index>(j)) = cloud.points[j].rep;
  }
  return y;
}

// Normalizes columns in place and removes those with vanishing norm.
CMat normalized_columns(const CMat& z, std::size_t& dropped) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    if (z.col(j).norm() >= kZeroNorm) keep.push_back(j);
  }
  dropped += static_cast<std::size_t>(z.cols()) - keep.size();
  CMat out(z.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.col(static_cast<Eigen::Index>(c)) = z.col(keep[c]) / z.col(keep[c]).norm();
  }
  return out;
}

}  // namespace

double distance_to_sublens(const CVec& u, const CVec& v) {
  // For unit v, |P v|^2 + |<v,u>|^2 = 1, so this is arccos|P v| without the
  // precision loss of arccos near 1.
  return std::atan2(std::abs(u.dot(v)), project_offspan(u, v).norm());
}

Projection lens_project(const CVec& u, const LensPoint& v) {
  CVec w = project_offspan(u, v.rep);
  const double norm = w.norm();
  if (norm <= kZeroNorm) throw Error(ErrorCode::DegenerateProjection, "point lies in span(u)");
  return {LensPoint{w / norm, v.q}, std::acos(std::min(norm, 1.0))};
}

CVec last_lens_comp(const CMat& points) {
  if (points.cols() == 0) throw Error(ErrorCode::EmptyCloud, "no points for LastLensComp");
  CMat lower = CMat::Zero(points.rows(), points.rows());
  lower.selfadjointView<Eigen::Lower>().rankUpdate(points, 1.0 / static_cast<double>(points.cols()));
  const CMat cov = lower.selfadjointView<Eigen::Lower>();
  return hermitian_eig(cov).eigenvectors.col(0);
}

CVec last_lens_comp(const LensCloud& cloud) { return last_lens_comp(as_matrix(cloud)); }

CMat orthonormal_complement(const CMat& basis) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index m = basis.cols();
  CMat accepted = basis;
  CMat residual = CMat::Identity(n, n) - basis * basis.adjoint();
  CMat out(n, n - m);
  for (Eigen::Index c = 0; c < n - m; ++c) {
    Eigen::Index pick = 0;
    residual.colwise().norm().maxCoeff(&pick);
    CVec q = residual.col(pick);
    for (int pass = 0; pass < 2; ++pass) {
      q -= accepted * (accepted.adjoint() * q);
      q /= q.norm();
    }
    out.col(c) = q;
    accepted.conservativeResize(Eigen::NoChange, accepted.cols() + 1);
    accepted.col(accepted.cols() - 1) = q;
    residual -= q * (q.adjoint() * residual);
  }
  return out;
}

std::vector<double> LpcaResult::dim_profile() const {
  if (variance.pvar.size() < 2) return variance.pvar;
  return {variance.pvar.begin() + 1, variance.pvar.end()};
}

std::vector<LensPoint> principal_coordinates(const LensCloud& cloud, const CMat& components, std::size_t k) {
  if (k < 1 || k > static_cast<std::size_t>(components.cols())) {
    throw Error(ErrorCode::InvalidArgument, "coordinate dimension out of range");
  }
  const CMat y = as_matrix(cloud);
  const CMat c = components.leftCols(static_cast<Eigen::Index>(k)).adjoint() * y;
  std::vector<LensPoint> out;
  out.reserve(cloud.size());
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    const double norm = c.col(j).norm();
    if (norm < kZeroNorm) {
      throw Error(ErrorCode::ZeroVector, "point " + std::to_string(j) + " projects to zero in dimension " +
                                             std::to_string(k));
    }
    out.push_back({c.col(j) / norm, cloud.q});
  }
  return out;
}

VarianceProfile variance_profile(const LensCloud& cloud, const CMat& components) {
  const CMat y = as_matrix(cloud);
  const Eigen::Index n = components.cols();
  const CMat c = components.adjoint() * y;  // row i holds <y_j, v_{i+1}>
  VarianceProfile out;
  out.var.assign(static_cast<std::size_t>(n), 0.0);
  double running = 0.0;
  for (Eigen::Index l = 2; l <= n; ++l) {
    const CVec e = CVec::Unit(l, l - 2);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      const CVec w = c.col(j).head(l);
      const double norm = w.norm();
      if (norm < kZeroNorm) continue;
      const double d = distance_to_sublens(e, w / norm);
      sum += d * d;
    }
    running += sum / static_cast<double>(c.cols());
    out.var[static_cast<std::size_t>(l - 1)] = running;
  }
  const double total = out.var.back();
  out.pvar.resize(out.var.size());
  for (std::size_t k = 0; k < out.var.size(); ++k) {
    out.pvar[k] = total > 0.0 ? out.var[k] / total : (k == 0 ? 0.0 : 1.0);
  }
  if (!out.pvar.empty()) out.pvar.back() = 1.0;
  return out;
}

LpcaResult lpca(const LensCloud& cloud, const std::vector<std::size_t>& coord_dims) {
  const CMat y = as_matrix(cloud);
  const Eigen::Index n = y.rows();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "LPCA needs points in L_q^n with n >= 2");

  LpcaResult out;
  out.q = cloud.q;
  out.components = CMat::Zero(n, n);
  // basis holds an orthonormal basis of span(v_{k+1}, ..., v_n)^perp and z the
  // normalized coordinates of the cloud in it. Each step reflects the new
  // component onto the last basis vector and drops that coordinate.
  CMat basis = CMat::Identity(n, n);
  CMat z = normalized_columns(y, out.dropped);
  for (Eigen::Index k = n; k >= 2; --k) {
    if (z.cols() == 0) throw Error(ErrorCode::ZeroVector, "every point projects to zero");
    const CVec w = last_lens_comp(z);
    out.components.col(k - 1) = basis * w;
    const Complex last = w(k - 1);
    const Complex alpha = std::abs(last) > 0.0 ? -last / std::abs(last) : Complex(-1.0, 0.0);
    CVec h = w;
    h(k - 1) -= alpha;
    const double hh = h.squaredNorm();
    if (hh > 0.0) {
      // H = I - 2 h h^H / |h|^2 is Hermitian and unitary with H w = alpha e_k.
      z -= (2.0 / hh) * h * (h.adjoint() * z);
      basis -= (2.0 / hh) * (basis * h) * h.adjoint();
    }
    z = normalized_columns(z.topRows(k - 1), out.dropped);
    basis.conservativeResize(Eigen::NoChange, k - 1);
  }
  out.components.col(0) = basis.col(0);

  out.variance = variance_profile(cloud, out.components);
  for (std::size_t k : coord_dims) out.coords[k] = principal_coordinates(cloud, out.components, k);
  return out;
}

std::size_t choose_dim(std::span<const double> profile, const DimRule& rule) {
  if (rule.mode == DimRule::Mode::threshold) {
    for (std::size_t k = 0; k < profile.size(); ++k) {
      if (profile[k] >= rule.value) return k + 1;
    }
  } else {
    for (std::size_t k = 0; k + 1 < profile.size(); ++k) {
      if (profile[k + 1] - profile[k] < rule.value) return k + 1;
    }
  }
  return profile.size();
}

namespace {

nlohmann::json complex_rows(const CVec& v) {
  nlohmann::json row = nlohmann::json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) row.push_back({v(k).real(), v(k).imag()});
  return row;
}

CVec parse_complex_row(const nlohmann::json& row) {
  CVec v(static_cast<Eigen::Index>(row.size()));
  for (std::size_t k = 0; k < row.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = Complex(row.at(k).at(0).get<double>(), row.at(k).at(1).get<double>());
  }
  return v;
}

}  // namespace

nlohmann::json to_json(const LpcaResult& r) {
  nlohmann::json components = nlohmann::json::array();
  for (Eigen::Index k = 0; k < r.components.cols(); ++k) components.push_back(complex_rows(r.components.col(k)));
  nlohmann::json coords = nlohmann::json::object();
  for (const auto& [k, points] : r.coords) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : points) rows.push_back(complex_rows(p.rep));
    coords[std::to_string(k)] = std::move(rows);
  }
  return {{"q", r.q},
          {"components", components},
          {"var", r.variance.var},
          {"pvar", r.variance.pvar},
          {"dim_profile", r.dim_profile()},
          {"dim_profile_convention", "dim_profile[k-1] = pvar(k+1), share of variance along v_1..v_k"},
          {"dropped", r.dropped},
          {"coords", coords}};
}

LpcaResult lpca_from_json(const nlohmann::json& j) {
  try {
    LpcaResult r;
    r.q = j.at("q").get<int>();
    const auto& comps = j.at("components");
    const auto n = static_cast<Eigen::Index>(comps.size());
    r.components = CMat::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const CVec v = parse_complex_row(comps.at(static_cast<std::size_t>(k)));
      if (v.size() != n) throw Error(ErrorCode::ParseError, "component has wrong length");
      r.components.col(k) = v;
    }
    r.variance.var = j.at("var").get<std::vector<double>>();
    r.variance.pvar = j.at("pvar").get<std::vector<double>>();
    r.dropped = j.value("dropped", std::size_t{0});
    for (const auto& [key, rows] : j.at("coords").items()) {
      std::vector<LensPoint> points;
      for (const auto& row : rows) points.push_back({parse_complex_row(row), r.q});
      r.coords[std::stoul(key)] = std::move(points);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed LPCA JSON: ") + e.what());
  }
}

}  // namespace lens
