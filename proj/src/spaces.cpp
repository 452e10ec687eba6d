#include "lenscoords/spaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "lenscoords/errors.hpp"
#include "lenscoords/parallel.hpp"

namespace lens {

namespace {

constexpr double kBoundaryTol = 1e-12;

Complex as_complex(const std::vector<double>& p) { return {p[0], p[1]}; }

// Re<x, y> with complex numbers read as vectors of R^2.
double planar_inner(Complex x, Complex y) { return x.real() * y.real() + x.imag() * y.imag(); }

bool on_boundary(Complex x) { return std::abs(std::abs(x) - 1.0) < kBoundaryTol; }

void check_disc(Complex x) {
  if (std::abs(x) > 1.0 + kBoundaryTol) {
    throw Error(ErrorCode::OutsideDisc, "point lies outside the closed unit disc");
  }
}

double packed_lens_distance(const std::vector<double>& a, const std::vector<double>& b, int q) {
  // <a, b>_C over packed (re, im) pairs.
  double hr = 0.0, hi = 0.0;
  for (std::size_t k = 0; k + 1 < a.size(); k += 2) {
    hr += a[k] * b[k] + a[k + 1] * b[k + 1];
    hi += a[k + 1] * b[k] - a[k] * b[k + 1];
  }
  const Complex h(hr, hi);
  double best = -std::numeric_limits<double>::infinity();
  Complex zeta(1.0, 0.0);
  for (int g = 0; g < q; ++g) {
    const double c = (std::conj(root_of_unity(q, g)) * h).real();
    if (c > best) {
      best = c;
      zeta = root_of_unity(q, g);
    }
  }
  // angle between a and zeta b from the chord lengths, as in lens_distance
  double minus = 0.0, plus = 0.0;
  for (std::size_t k = 0; k + 1 < a.size(); k += 2) {
    const Complex z = zeta * Complex(b[k], b[k + 1]);
    const Complex x(a[k], a[k + 1]);
    minus += std::norm(x - z);
    plus += std::norm(x + z);
  }
  return 2.0 * std::atan2(std::sqrt(minus), std::sqrt(plus));
}

// min over boundary points b of |x - b| + |b - y|. Moving b off the shorter arc
// between the directions of x and y lengthens both segments, so only that arc
// is searched.
double via_boundary(Complex x, Complex y) {
  const double rx = std::abs(x), ry = std::abs(y);
  if (rx < 1e-15 || ry < 1e-15) return 2.0 - rx - ry;
  const double a = std::arg(x);
  double span = std::remainder(std::arg(y) - a, 2.0 * kPi);
  auto cost = [&](double t) {
    const Complex b = std::polar(1.0, a + t);
    return std::abs(x - b) + std::abs(b - y);
  };
  constexpr int kGrid = 32;
  const double step = span / kGrid;
  std::array<double, kGrid + 1> c{};
  for (int i = 0; i <= kGrid; ++i) c[i] = cost(i * step);
  double best = *std::min_element(c.begin(), c.end());
  if (step == 0.0) return best;
  for (int i = 0; i <= kGrid; ++i) {
    const bool local = (i == 0 || c[i] <= c[i - 1]) && (i == kGrid || c[i] <= c[i + 1]);
    if (!local) continue;
    double lo = (i - 1) * step, hi = (i + 1) * step;
    if (lo > hi) std::swap(lo, hi);
    best = std::min(best, boost::math::tools::brent_find_minima(cost, lo, hi, 50).second);
  }
  return best;
}

}  // namespace

std::string to_string(MetricId id) {
  switch (id) {
    case MetricId::euclidean: return "euclidean";
    case MetricId::moore: return "moore";
    case MetricId::moore_quotient: return "moore_quotient";
    case MetricId::lens: return "lens";
  }
  return "euclidean";
}

MetricId metric_from_string(const std::string& name) {
  if (name == "euclidean") return MetricId::euclidean;
  if (name == "moore") return MetricId::moore;
  if (name == "moore_quotient") return MetricId::moore_quotient;
  if (name == "lens") return MetricId::lens;
  throw Error(ErrorCode::ParseError, "unknown metric_id '" + name + "'");
}

double MetricDataset::distance(std::size_t i, std::size_t j) const {
  const auto& a = points.at(i);
  const auto& b = points.at(j);
  switch (metric) {
    case MetricId::euclidean: {
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
      return std::sqrt(s);
    }
    case MetricId::moore:
      if (i == j) return 0.0;
      return moore_distance(as_complex(a), as_complex(b));
    case MetricId::moore_quotient:
      return moore_quotient_distance(as_complex(a), as_complex(b));
    case MetricId::lens:
      if (i == j) return 0.0;
      return packed_lens_distance(a, b, q);
  }
  return 0.0;
}

LensPoint MetricDataset::lens_point(std::size_t i) const {
  const auto& p = points.at(i);
  CVec rep(static_cast<Eigen::Index>(p.size() / 2));
  for (Eigen::Index k = 0; k < rep.size(); ++k) rep(k) = Complex(p[2 * k], p[2 * k + 1]);
  return {std::move(rep), q};
}

Eigen::MatrixXd pairwise_distances(const MetricDataset& x, std::span<const std::size_t> idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  parallel_for(idx.size(), [&](std::size_t r) {
    const auto i = static_cast<Eigen::Index>(r);
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = x.distance(idx[r], idx[j]);
  });
  d.triangularView<Eigen::StrictlyLower>() = d.transpose();
  return d;
}

Eigen::MatrixXd pairwise_distances(const MetricDataset& x) {
  std::vector<std::size_t> all(x.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return pairwise_distances(x, all);
}

Eigen::MatrixXd cross_distances(const MetricDataset& x, std::span<const std::size_t> idx) {
  Eigen::MatrixXd d(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(idx.size()));
  parallel_for(x.size(), [&](std::size_t r) {
    for (std::size_t c = 0; c < idx.size(); ++c) {
      d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x.distance(r, idx[c]);
    }
  });
  return d;
}

MetricDataset sample_circle(std::size_t n, double noise_sigma, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise sigma must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::normal_distribution<double> noise(0.0, 1.0);
  MetricDataset out{MetricId::euclidean, 0, seed, {}};
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = angle(rng);
    const double r = 1.0 + noise_sigma * noise(rng);
    out.points.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return out;
}

MetricDataset sample_moore(std::size_t n, std::uint64_t seed, MetricId metric) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
  if (metric != MetricId::moore && metric != MetricId::moore_quotient) {
    throw Error(ErrorCode::InvalidArgument, "Moore samples need a moore metric");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MetricDataset out{metric, 3, seed, {}};
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::sqrt(unit(rng));
    const double t = 2.0 * kPi * unit(rng);
    out.points.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return out;
}

MetricDataset sample_lens(std::size_t n, int q, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
  if (!is_prime(q)) throw Error(ErrorCode::NotPrime, "lens modulus must be prime");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MetricDataset out{MetricId::lens, q, seed, {}};
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(4);
    double norm = 0.0;
    do {
      for (double& c : p) c = gauss(rng);
      norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    } while (norm < 1e-12);
    for (double& c : p) c /= norm;
    out.points.push_back(std::move(p));
  }
  return out;
}

double moore_distance(Complex x, Complex y) {
  check_disc(x);
  check_disc(y);
  const bool bx = on_boundary(x);
  const bool by = on_boundary(y);
  if (!bx && !by) return std::sqrt(std::abs(planar_inner(x, y)));
  double best = std::numeric_limits<double>::infinity();
  for (int g = 0; g < 3; ++g) {
    const double c = std::abs(planar_inner(x, root_of_unity(3, g) * y));
    best = std::min(best, (bx && by) ? std::acos(std::min(c, 1.0)) : std::sqrt(c));
  }
  return best;
}

double moore_quotient_distance(Complex x, Complex y) {
  check_disc(x);
  check_disc(y);
  double best = std::abs(x - y);
  // Any path through the boundary is at least this long.
  if (2.0 - std::abs(x) - std::abs(y) >= best) return best;
  for (int g = 1; g < 3; ++g) best = std::min(best, via_boundary(x, root_of_unity(3, g) * y));
  return best;
}

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

nlohmann::json to_json(const MetricDataset& x) {
  nlohmann::json j;
  j["metric_id"] = to_string(x.metric);
  if (x.metric == MetricId::lens) j["q"] = x.q;
  j["seed"] = x.seed;
  j["points"] = x.points;
  return j;
}

MetricDataset dataset_from_json(const nlohmann::json& j) {
  try {
    MetricDataset x;
    x.metric = metric_from_string(j.at("metric_id").get<std::string>());
    x.q = x.metric == MetricId::lens ? j.at("q").get<int>() : (x.metric == MetricId::euclidean ? 0 : 3);
    x.seed = j.value("seed", std::uint64_t{0});
    x.points = j.at("points").get<std::vector<std::vector<double>>>();
    const std::size_t width = x.metric == MetricId::euclidean ? 0 : (x.metric == MetricId::lens ? 4 : 2);
    for (const auto& p : x.points) {
      if (p.empty() || (width != 0 && x.metric != MetricId::lens && p.size() != width) ||
          (x.metric == MetricId::lens && p.size() % 2 != 0) ||
          p.size() != x.points.front().size()) {
        throw Error(ErrorCode::ParseError, "dataset points have inconsistent coordinates");
      }
    }
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed dataset JSON: ") + e.what());
  }
}

}  // namespace lens
