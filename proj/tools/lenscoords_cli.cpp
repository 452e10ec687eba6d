// Command-line front end: each subcommand reads and writes the JSON formats of
// one stage; `pipeline` runs them all.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lenscoords/errors.hpp"
#include "lenscoords/isomap.hpp"
#include "lenscoords/landmarks.hpp"
#include "lenscoords/lens_map.hpp"
#include "lenscoords/lpca.hpp"
#include "lenscoords/persistence.hpp"
#include "lenscoords/pipeline.hpp"
#include "lenscoords/spaces.hpp"
#include "lenscoords/viz_export.hpp"

namespace {

using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCoverage = 3;
constexpr int kExitNoClass = 4;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lens::Error(lens::ErrorCode::IoFailure, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw lens::Error(lens::ErrorCode::ParseError, "'" + path + "': " + e.what());
  }
}

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(1) << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw lens::Error(lens::ErrorCode::IoFailure, "cannot write '" + path + "'");
  out << j.dump(1) << "\n";
}

lens::MetricId moore_metric(const std::string& name) {
  if (name == "moore") return lens::MetricId::moore;
  if (name == "moore_quotient") return lens::MetricId::moore_quotient;
  throw lens::Error(lens::ErrorCode::ConfigError, "--moore-metric must be moore or moore_quotient");
}

int exit_code(lens::ErrorCode code) {
  switch (code) {
    case lens::ErrorCode::ConfigError: return kExitConfig;
    case lens::ErrorCode::CoverageFailure:
    case lens::ErrorCode::Uncovered: return kExitCoverage;
    case lens::ErrorCode::NoAdmissibleClass: return kExitNoClass;
    default: return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lens coordinates: Z_q persistent cohomology, classifying maps into Lens spaces, and LPCA"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a synthetic dataset");
  std::string s_space = "circle", s_metric = "moore_quotient", s_out;
  std::size_t s_points = 2000;
  int s_q = 3;
  std::uint64_t s_seed = 0;
  double s_noise = 0.1;
  sample->add_option("--space", s_space, "circle, moore or lens")->capture_default_str();
  sample->add_option("--points", s_points)->capture_default_str();
  sample->add_option("--q", s_q, "lens modulus")->capture_default_str();
  sample->add_option("--seed", s_seed)->capture_default_str();
  sample->add_option("--noise", s_noise, "normal noise for the circle")->capture_default_str();
  sample->add_option("--moore-metric", s_metric, "moore or moore_quotient")->capture_default_str();
  sample->add_option("--out", s_out, "output JSON (stdout if omitted)");

  // landmarks
  auto* landmarks = app.add_subcommand("landmarks", "Select landmarks");
  std::string l_dataset, l_method = "maxmin", l_out;
  std::size_t l_count = 10;
  std::uint64_t l_seed = 0;
  std::vector<std::size_t> l_seeds;
  landmarks->add_option("--dataset", l_dataset)->required();
  landmarks->add_option("--landmarks", l_count)->capture_default_str();
  landmarks->add_option("--method", l_method, "maxmin or random")->capture_default_str();
  landmarks->add_option("--seed", l_seed)->capture_default_str();
  landmarks->add_option("--seeds", l_seeds, "initial landmark indices (maxmin)")->delimiter(',');
  landmarks->add_option("--out", l_out);

  // persistence
  auto* persistence = app.add_subcommand("persistence", "Rips persistent cohomology on the landmarks");
  std::string p_dataset, p_landmarks, p_out;
  int p_q = 3, p_max_dim = 2;
  persistence->add_option("--dataset", p_dataset)->required();
  persistence->add_option("--landmarks-file", p_landmarks)->required();
  persistence->add_option("--q", p_q)->capture_default_str();
  persistence->add_option("--max-dim", p_max_dim)->capture_default_str();
  persistence->add_option("--out", p_out);

  // lens-map
  auto* lensmap = app.add_subcommand("lens-map", "Map the dataset into L_q^n");
  std::string m_dataset, m_landmarks, m_persistence, m_out;
  std::optional<double> m_epsilon;
  std::optional<std::size_t> m_class;
  double m_delta = 1e-5;
  lensmap->add_option("--dataset", m_dataset)->required();
  lensmap->add_option("--landmarks-file", m_landmarks)->required();
  lensmap->add_option("--persistence", m_persistence, "output of the persistence subcommand")->required();
  lensmap->add_option("--class-index", m_class, "dimension-1 pair to use (default: most persistent admissible)");
  lensmap->add_option("--epsilon", m_epsilon, "fixed scale");
  lensmap->add_option("--delta", m_delta)->capture_default_str();
  lensmap->add_option("--out", m_out);

  // lpca
  auto* lpcacmd = app.add_subcommand("lpca", "Lens principal components of a lens cloud");
  std::string c_cloud, c_out;
  std::vector<std::size_t> c_coords{2};
  lpcacmd->add_option("--cloud", c_cloud)->required();
  lpcacmd->add_option("--coords", c_coords, "dimensions whose coordinates are written")->delimiter(',');
  lpcacmd->add_option("--out", c_out);

  // viz
  auto* viz = app.add_subcommand("viz", "Fundamental-domain coordinates of P_2 in L_3^2");
  std::string v_lpca, v_cloud, v_format = "csv", v_out;
  viz->add_option("--lpca", v_lpca, "output of the lpca subcommand (must hold coords for k=2)")->required();
  viz->add_option("--cloud", v_cloud, "lens cloud supplying source indices");
  viz->add_option("--format", v_format, "csv or json")->capture_default_str();
  viz->add_option("--out", v_out)->required();

  // isomap
  auto* iso = app.add_subcommand("isomap", "Isomap embedding");
  std::string i_dataset, i_landmarks, i_out;
  std::size_t i_knn = 8, i_dim = 4;
  iso->add_option("--dataset", i_dataset)->required();
  iso->add_option("--landmarks-file", i_landmarks, "restrict to these points");
  iso->add_option("--knn", i_knn)->capture_default_str();
  iso->add_option("--target-dim", i_dim)->capture_default_str();
  iso->add_option("--out", i_out);

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Run every stage and write a report directory");
  lens::PipelineConfig cfg;
  std::string g_space = "circle", g_metric = "moore_quotient", g_out;
  std::optional<std::size_t> g_points, g_landmarks, g_compare;
  std::optional<double> g_tau, g_gamma;
  bool g_no_compare = false;
  pipe->add_option("--space", g_space, "circle, moore or lens")->capture_default_str();
  pipe->add_option("--points", g_points, "sample size (default depends on the space)");
  pipe->add_option("--landmarks", g_landmarks, "landmark count (default depends on the space)");
  pipe->add_option("--q", cfg.q)->capture_default_str();
  pipe->add_option("--seed", cfg.seed)->capture_default_str();
  pipe->add_option("--noise", cfg.noise)->capture_default_str();
  pipe->add_option("--epsilon", cfg.epsilon, "fixed scale (default: birth + delta rule)");
  pipe->add_option("--delta", cfg.delta)->capture_default_str();
  pipe->add_option("--target-dim", cfg.target_dim);
  pipe->add_option("--tau", g_tau, "cumulative variance threshold (default 0.75)");
  pipe->add_option("--gamma", g_gamma, "variance gap rule");
  pipe->add_option("--knn", cfg.knn)->capture_default_str();
  pipe->add_option("--isomap-dim", cfg.isomap_dim)->capture_default_str();
  pipe->add_option("--compare-points", g_compare, "points for the per-ratio comparison (0: landmarks)");
  pipe->add_flag("--no-compare", g_no_compare, "skip the Isomap comparison");
  pipe->add_option("--boundary-seeds", cfg.boundary_seeds)->capture_default_str();
  pipe->add_option("--moore-metric", g_metric, "moore or moore_quotient")->capture_default_str();
  pipe->add_option("--max-dim", cfg.max_dim)->capture_default_str();
  pipe->add_option("--out", g_out, "report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sample) {
      const auto space = lens::space_from_string(s_space);
      lens::MetricDataset x;
      if (space == lens::Space::circle) x = lens::sample_circle(s_points, s_noise, s_seed);
      else if (space == lens::Space::moore) x = lens::sample_moore(s_points, s_seed, moore_metric(s_metric));
      else x = lens::sample_lens(s_points, s_q, s_seed);
      emit(lens::to_json(x), s_out);
    } else if (*landmarks) {
      const auto x = lens::dataset_from_json(read_json(l_dataset));
      lens::LandmarkSet l;
      if (l_method == "maxmin") l = lens::maxmin_landmarks(x, l_count, l_seeds, l_seed);
      else if (l_method == "random") l = lens::random_landmarks(x, l_count, l_seed);
      else throw lens::Error(lens::ErrorCode::ConfigError, "unknown landmark method '" + l_method + "'");
      emit(lens::to_json(l), l_out);
    } else if (*persistence) {
      const auto x = lens::dataset_from_json(read_json(p_dataset));
      const auto l = lens::landmarks_from_json(read_json(p_landmarks));
      const auto rips = lens::build_rips(lens::pairwise_distances(x, l.indices), p_max_dim);
      emit(lens::to_json(lens::persistent_cohomology(rips, p_q)), p_out);
    } else if (*lensmap) {
      const auto x = lens::dataset_from_json(read_json(m_dataset));
      const auto l = lens::landmarks_from_json(read_json(m_landmarks));
      const auto ph = lens::persistence_from_json(read_json(m_persistence));
      if (ph.diagrams.size() < 2) throw lens::Error(lens::ErrorCode::EmptyDiagram, "no dimension-1 diagram");
      lens::SelectedClass chosen;
      if (m_class) {
        chosen = {ph.diagrams[1].pairs.at(*m_class), *m_class};
      } else {
        chosen = lens::select_class(ph.diagrams[1]);
      }
      lens::LensMapConfig mc{m_epsilon ? *m_epsilon : lens::default_epsilon(chosen.pair, m_delta), ph.q, m_delta};
      const auto lc = lens::lens_coordinates(x, l, ph.cocycles.at(chosen.index), mc);
      emit(lens::to_json(lc.cloud), m_out);
    } else if (*lpcacmd) {
      const auto cloud = lens::lens_cloud_from_json(read_json(c_cloud));
      emit(lens::to_json(lens::lpca(cloud, c_coords)), c_out);
    } else if (*viz) {
      const auto res = lens::lpca_from_json(read_json(v_lpca));
      if (!res.coords.count(2)) throw lens::Error(lens::ErrorCode::ConfigError, "LPCA file has no k=2 coordinates");
      const auto pts = lens::fundamental_domain_map(res.coords.at(2));
      std::vector<std::size_t> source(pts.size());
      for (std::size_t i = 0; i < source.size(); ++i) source[i] = i;
      if (!v_cloud.empty()) source = lens::lens_cloud_from_json(read_json(v_cloud)).source_index;
      if (source.size() != pts.size()) throw lens::Error(lens::ErrorCode::LengthMismatch, "cloud and LPCA sizes differ");
      std::vector<lens::ExportRow> rows;
      for (std::size_t i = 0; i < pts.size(); ++i) rows.push_back({pts[i], source[i]});
      if (v_format != "csv" && v_format != "json") throw lens::Error(lens::ErrorCode::ConfigError, "format must be csv or json");
      lens::export_cloud(rows, v_format == "csv" ? lens::ExportFormat::csv : lens::ExportFormat::json, v_out);
    } else if (*iso) {
      const auto x = lens::dataset_from_json(read_json(i_dataset));
      std::vector<std::size_t> idx;
      if (!i_landmarks.empty()) {
        idx = lens::landmarks_from_json(read_json(i_landmarks)).indices;
      } else {
        for (std::size_t i = 0; i < x.size(); ++i) idx.push_back(i);
      }
      const auto y = lens::isomap(lens::pairwise_distances(x, idx), {i_knn, i_dim});
      json rows = json::array();
      for (Eigen::Index r = 0; r < y.rows(); ++r) {
        std::vector<double> row;
        for (Eigen::Index c = 0; c < y.cols(); ++c) row.push_back(y(r, c));
        rows.push_back(row);
      }
      emit({{"indices", idx}, {"coordinates", rows}}, i_out);
    } else if (*pipe) {
      const auto space = lens::space_from_string(g_space);
      const auto defaults = lens::desk_defaults(space);
      cfg.space = space;
      cfg.n_points = g_points.value_or(defaults.n_points);
      cfg.n_landmarks = g_landmarks.value_or(defaults.n_landmarks);
      cfg.compare_points = g_compare.value_or(defaults.compare_points);
      cfg.moore_metric = moore_metric(g_metric);
      cfg.compare = !g_no_compare;
      if (g_tau && g_gamma) throw lens::Error(lens::ErrorCode::ConfigError, "--tau and --gamma are exclusive");
      if (g_tau) cfg.dim_rule = {lens::DimRule::Mode::threshold, *g_tau};
      if (g_gamma) cfg.dim_rule = {lens::DimRule::Mode::gap, *g_gamma};
      const auto report = lens::run_pipeline(cfg);
      lens::write_report(report, g_out);
      std::cout << report.variance_row();
      if (report.comparison) std::cout << report.comparison->to_text();
    }
  } catch (const lens::CoverageFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCoverage;
  } catch (const lens::Error& e) {
    std::cerr << "error [" << lens::to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
