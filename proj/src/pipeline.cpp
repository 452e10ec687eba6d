#include "lenscoords/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "lenscoords/errors.hpp"

namespace lens {

namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

template <typename F>
auto stage(PipelineReport& report, const std::string& name, F&& body) {
  const auto start = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      report.timings.emplace_back(name, std::chrono::duration<double>(Clock::now() - start).count());
    } else {
      auto out = body();
      report.timings.emplace_back(name, std::chrono::duration<double>(Clock::now() - start).count());
      return out;
    }
  } catch (const CoverageFailure& e) {
    throw CoverageFailure(e.uncovered());
  } catch (const Error& e) {
    throw Error(e.code(), "stage '" + name + "': " + e.what());
  }
}

void check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, "invariant violated: " + what);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(1) + "\n"); }

std::vector<int> diagram_fields(int q) {
  std::set<int> qs{2, 3, q};
  return {qs.begin(), qs.end()};
}

nlohmann::json number_or_string(std::optional<double> v) {
  if (!v) return nullptr;
  if (!std::isfinite(*v)) return "inf";
  return *v;
}

}  // namespace

std::string to_string(Space s) {
  switch (s) {
    case Space::circle: return "circle";
    case Space::moore: return "moore";
    case Space::lens: return "lens";
  }
  return "circle";
}

Space space_from_string(const std::string& name) {
  if (name == "circle") return Space::circle;
  if (name == "moore") return Space::moore;
  if (name == "lens") return Space::lens;
  config_error("unknown space '" + name + "' (expected circle, moore or lens)");
}

PipelineConfig desk_defaults(Space space) {
  PipelineConfig cfg;
  cfg.space = space;
  if (space == Space::moore) {
    cfg.n_points = 1500;
    cfg.n_landmarks = 40;
    cfg.compare_points = 150;
  } else if (space == Space::lens) {
    cfg.n_points = 3000;
    cfg.n_landmarks = 150;
  }
  return cfg;
}

void validate(const PipelineConfig& cfg) {
  if (!is_prime(cfg.q) || cfg.q <= 2) config_error("q must be a prime > 2, got " + std::to_string(cfg.q));
  if (cfg.n_points < 1) config_error("point count must be positive");
  if (cfg.n_landmarks < 2) config_error("at least two landmarks are required");
  if (cfg.n_landmarks > cfg.n_points) config_error("more landmarks than points");
  if (cfg.space == Space::moore && cfg.q != 3) config_error("the Moore space example uses q = 3");
  if (cfg.space == Space::moore && cfg.boundary_seeds > cfg.n_landmarks) {
    config_error("more boundary seeds than landmarks");
  }
  if (cfg.space == Space::moore && cfg.moore_metric != MetricId::moore &&
      cfg.moore_metric != MetricId::moore_quotient) {
    config_error("Moore metric must be moore or moore_quotient");
  }
  if (!(cfg.noise >= 0.0)) config_error("noise must be nonnegative");
  if (cfg.epsilon && !(*cfg.epsilon > 0.0)) config_error("epsilon must be positive");
  if (!(cfg.delta > 0.0)) config_error("delta must be positive");
  if (cfg.target_dim && (*cfg.target_dim < 1 || *cfg.target_dim > cfg.n_landmarks)) {
    config_error("target dimension must lie in [1, landmarks]");
  }
  if (cfg.knn < 1) config_error("knn must be >= 1");
  if (cfg.isomap_dim < 1) config_error("isomap dimension must be >= 1");
  if (cfg.compare_points > cfg.n_points) config_error("more comparison points than points");
  if (cfg.max_dim != 2 && cfg.max_dim != 3) config_error("max_dim must be 2 or 3");
}

nlohmann::json to_json(const PipelineConfig& cfg) {
  nlohmann::json j = {{"space", to_string(cfg.space)},
                      {"points", cfg.n_points},
                      {"landmarks", cfg.n_landmarks},
                      {"q", cfg.q},
                      {"seed", cfg.seed},
                      {"delta", cfg.delta},
                      {"knn", cfg.knn},
                      {"isomap_dim", cfg.isomap_dim},
                      {"max_dim", cfg.max_dim}};
  if (cfg.space == Space::circle) j["noise"] = cfg.noise;
  if (cfg.space == Space::moore) {
    j["boundary_seeds"] = cfg.boundary_seeds;
    j["moore_metric"] = to_string(cfg.moore_metric);
  }
  j["epsilon"] = cfg.epsilon ? nlohmann::json(*cfg.epsilon) : nlohmann::json("auto");
  if (cfg.target_dim) {
    j["target_dim"] = *cfg.target_dim;
  } else {
    j["target_dim"] = {{cfg.dim_rule.mode == DimRule::Mode::threshold ? "tau" : "gamma", cfg.dim_rule.value}};
  }
  j["compare"] = cfg.compare;
  j["compare_points"] = cfg.compare_points;
  return j;
}

double dominant_persistence(const PersistenceDiagram& dgm) {
  double best = 0.0;
  for (const auto& p : dgm.pairs) {
    if (p.finite()) best = std::max(best, p.persistence());
  }
  return best;
}

std::vector<std::size_t> moore_boundary_seeds(const MetricDataset& x, std::size_t count) {
  // the sample point nearest to each of `count` equally spaced boundary points
  std::vector<std::size_t> seeds;
  for (std::size_t t = 0; t < count; ++t) {
    const Complex target = std::polar(1.0, 2.0 * kPi * static_cast<double>(t) / static_cast<double>(count));
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::find(seeds.begin(), seeds.end(), i) != seeds.end()) continue;
      const double d = std::abs(Complex(x.points[i][0], x.points[i][1]) - target);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    seeds.push_back(best);
  }
  return seeds;
}

PipelineReport run_pipeline(const PipelineConfig& cfg) {
  validate(cfg);
  PipelineReport r;
  r.config = cfg;

  r.dataset = stage(r, "sample", [&] {
    switch (cfg.space) {
      case Space::circle: return sample_circle(cfg.n_points, cfg.noise, cfg.seed);
      case Space::moore: return sample_moore(cfg.n_points, cfg.seed, cfg.moore_metric);
      case Space::lens: return sample_lens(cfg.n_points, cfg.q, cfg.seed);
    }
    return sample_circle(cfg.n_points, cfg.noise, cfg.seed);
  });

  r.landmarks = stage(r, "landmarks", [&] {
    std::vector<std::size_t> seeds;
    if (cfg.space == Space::moore) seeds = moore_boundary_seeds(r.dataset, cfg.boundary_seeds);
    auto l = maxmin_landmarks(r.dataset, cfg.n_landmarks, seeds, cfg.seed);
    check(std::set<std::size_t>(l.indices.begin(), l.indices.end()).size() == l.indices.size(),
          "landmarks are distinct");
    return l;
  });

  const Eigen::MatrixXd landmark_d = pairwise_distances(r.dataset, r.landmarks.indices);
  stage(r, "persistence", [&] {
    const FilteredComplex rips = build_rips(landmark_d, cfg.max_dim);
    for (int q : diagram_fields(cfg.q)) {
      auto res = persistent_cohomology(rips, q);
      for (const auto& dgm : res.diagrams)
        for (const auto& p : dgm.pairs) check(p.birth <= p.death, "diagram pairs have birth <= death");
      for (const auto& eta : res.cocycles) r.cocycle_violations += cocycle_violations(rips, eta);
      r.persistence.emplace(q, std::move(res));
    }
    check(r.cocycle_violations == 0, "representatives satisfy the cocycle condition");
  });

  const PersistenceResult& main = r.persistence.at(cfg.q);
  stage(r, "select_class", [&] {
    r.selected = select_class(main.diagrams.at(1));
    r.map_config.q = cfg.q;
    r.map_config.delta = cfg.delta;
    r.map_config.epsilon = cfg.epsilon ? *cfg.epsilon : default_epsilon(r.selected.pair, cfg.delta);
    if (r.map_config.epsilon < r.selected.pair.birth || !(2.0 * r.map_config.epsilon < r.selected.pair.death)) {
      throw Error(ErrorCode::ConfigError, "epsilon must satisfy birth <= epsilon < death / 2");
    }
  });

  r.lens = stage(r, "lens_map", [&] {
    auto lc = lens_coordinates(r.dataset, r.landmarks, main.cocycles.at(r.selected.index), r.map_config);
    for (const auto& p : lc.cloud.points) check(std::abs(p.rep.norm() - 1.0) < 1e-12, "lens points have unit norm");
    check(lc.coverage.max_partition_error < 1e-12, "partition of unity sums to one");
    return lc;
  });

  r.lpca = stage(r, "lpca", [&] {
    std::vector<std::size_t> dims{2};
    auto res = lpca(r.lens.cloud, dims);
    const auto n = res.components.cols();
    const CMat gram = res.components.adjoint() * res.components;
    check((gram - CMat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8, "components are orthonormal");
    for (std::size_t k = 1; k < res.variance.pvar.size(); ++k) {
      check(res.variance.pvar[k] + 1e-12 >= res.variance.pvar[k - 1], "pvar is nondecreasing");
    }
    const auto profile = res.dim_profile();
    r.target_dim = cfg.target_dim ? *cfg.target_dim : choose_dim(profile, cfg.dim_rule);
    if (!res.coords.count(r.target_dim)) {
      res.coords[r.target_dim] = principal_coordinates(r.lens.cloud, res.components, r.target_dim);
    }
    return res;
  });

  if (cfg.q == 3) {
    r.domain = stage(r, "viz", [&] { return fundamental_domain_map(r.lpca.coords.at(2)); });
  }

  if (cfg.compare) {
    stage(r, "isomap", [&] {
      r.compare_indices = cfg.compare_points == 0 || cfg.compare_points == cfg.n_landmarks
                              ? r.landmarks.indices
                              : maxmin_landmarks(r.dataset, cfg.compare_points, {r.landmarks.indices.front()},
                                                 cfg.seed)
                                    .indices;
      std::vector<LensPoint> lc_points;
      for (std::size_t i : r.compare_indices) lc_points.push_back(r.lpca.coords.at(2)[i]);
      r.comparison = compare_per_ratio(r.dataset, r.compare_indices, lc_points, {2, cfg.q},
                                       IsomapConfig{cfg.knn, cfg.isomap_dim});
    });
  }
  return r;
}

nlohmann::json PipelineReport::summary() const {
  const auto profile = lpca.dim_profile();
  nlohmann::json j;
  j["config"] = to_json(config);
  j["cover_radius"] = landmarks.cover_radius;
  j["selected_class"] = {{"birth", selected.pair.birth}, {"death", selected.pair.death}, {"index", selected.index}};
  j["epsilon"] = map_config.epsilon;
  std::vector<double> first5(profile.begin(), profile.begin() + std::min<std::ptrdiff_t>(5, profile.size()));
  j["pvar"] = first5;
  j["dim_profile"] = profile;
  j["pvar_convention"] = "entry k (1-based) is var_{k+1} / var_n";
  j["target_dim"] = target_dim;
  nlohmann::json dominant = nlohmann::json::object();
  for (const auto& [q, res] : persistence) dominant[std::to_string(q)] = dominant_persistence(res.diagrams.at(1));
  j["dominant_h1_persistence"] = dominant;
  nlohmann::json ratios = nlohmann::json::object();
  for (const auto& [q, res] : persistence) {
    std::optional<double> v;
    try {
      v = per_ratio(res.diagrams.at(1));
    } catch (const Error&) {
    }
    ratios["landmarks_z" + std::to_string(q)] = number_or_string(v);
  }
  if (comparison) {
    for (const auto& row : comparison->rows) ratios[row.method + "_z" + std::to_string(row.q)] = number_or_string(row.ratio);
  }
  j["per_ratios"] = ratios;
  j["coverage"] = {{"points", lens.coverage.points},
                   {"max_partition_error", lens.coverage.max_partition_error},
                   {"mean_active_charts", lens.coverage.mean_active_charts},
                   {"max_active_charts", lens.coverage.max_active_charts}};
  j["cocycle_violations"] = cocycle_violations;
  j["lpca_dropped"] = lpca.dropped;
  return j;
}

std::string PipelineReport::variance_row() const {
  const auto profile = lpca.dim_profile();
  std::string head = "| Dim. (n) |", row = "| " + to_string(config.space) + " |";
  char buf[32];
  for (std::size_t k = 0; k < std::min<std::size_t>(5, profile.size()); ++k) {
    head += " " + std::to_string(k + 1) + " |";
    std::snprintf(buf, sizeof buf, " %.2f |", profile[k]);
    row += buf;
  }
  return head + "\n" + row + "\n";
}

void write_report(const PipelineReport& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + out_dir + "': " + ec.message());

  write_json(dir / "dataset.json", to_json(r.dataset));
  write_json(dir / "landmarks.json", to_json(r.landmarks));
  for (const auto& [q, res] : r.persistence) write_json(dir / ("persistence_z" + std::to_string(q) + ".json"), to_json(res));
  write_json(dir / "class.json", {{"q", r.config.q},
                                  {"birth", r.selected.pair.birth},
                                  {"death", r.selected.pair.death},
                                  {"index", r.selected.index},
                                  {"epsilon", r.map_config.epsilon}});
  write_json(dir / "lens_cloud.json", to_json(r.lens.cloud));
  write_json(dir / "lpca.json", to_json(r.lpca));
  write_text(dir / "variance_table.txt", r.variance_row());
  if (!r.domain.empty()) {
    std::vector<ExportRow> rows;
    for (std::size_t i = 0; i < r.domain.size(); ++i) rows.push_back({r.domain[i], r.lens.cloud.source_index[i]});
    export_cloud(rows, ExportFormat::csv, (dir / "domain.csv").string());
  }
  if (r.comparison) {
    write_json(dir / "comparison.json", r.comparison->to_json());
    write_text(dir / "comparison.txt", r.comparison->to_text());
  }
  write_json(dir / "summary.json", r.summary());
  nlohmann::json timings = nlohmann::json::object();
  for (const auto& [name, seconds] : r.timings) timings[name] = seconds;
  write_json(dir / "timings.json", timings);
}

}  // namespace lens
