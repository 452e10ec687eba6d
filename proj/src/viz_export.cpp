#include "lenscoords/viz_export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lenscoords/errors.hpp"

namespace lens {

namespace {

constexpr double kWedge = 2.0 * kPi / 3.0;

double arg_in(Complex c, double period) {
  double a = std::fmod(std::arg(c), period);
  if (a < 0.0) a += period;
  if (a >= period) a -= period;
  return a;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DomainPoint fundamental_domain_map(Complex z, Complex w) {
  const double z2 = std::norm(z);
  if (std::abs(z2 + std::norm(w) - 1.0) > 1e-9) {
    throw Error(ErrorCode::NonUnitInput, "(z, w) is not on the unit sphere S^3");
  }
  const double az = arg_in(z, 2.0 * kPi);
  const long k = static_cast<long>(std::floor(az / kWedge)) % 3;
  const Complex planar = std::conj(root_of_unity(3, k)) * z;
  const double height = (arg_in(w, kWedge) - kPi / 3.0) * std::sqrt(std::max(0.0, 1.0 - z2));
  return {planar.real(), planar.imag(), height};
}

std::vector<DomainPoint> fundamental_domain_map(const std::vector<LensPoint>& points) {
  std::vector<DomainPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (p.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "display map needs points of L^2");
    out.push_back(fundamental_domain_map(p.rep(0), p.rep(1)));
  }
  return out;
}

std::string format_cloud(const std::vector<ExportRow>& rows, ExportFormat format) {
  if (format == ExportFormat::csv) {
    std::string out = "x,y,z,source_index\n";
    for (const auto& r : rows) {
      out += number(r.p.x) + "," + number(r.p.y) + "," + number(r.p.z) + "," + std::to_string(r.source_index) + "\n";
    }
    return out;
  }
  nlohmann::json data = nlohmann::json::array();
  for (const auto& r : rows) data.push_back({r.p.x, r.p.y, r.p.z, r.source_index});
  nlohmann::json doc = {{"columns", {"x", "y", "z", "source_index"}}, {"rows", data}};
  return doc.dump(1) + "\n";
}

void export_cloud(const std::vector<ExportRow>& rows, ExportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  out << format_cloud(rows, format);
  if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

std::vector<ExportRow> read_cloud(const std::string& path, ExportFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "'");
  std::vector<ExportRow> rows;
  if (format == ExportFormat::json) {
    try {
      const auto doc = nlohmann::json::parse(in);
      for (const auto& r : doc.at("rows")) {
        rows.push_back({{r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()},
                        r.at(3).get<std::size_t>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("malformed cloud JSON: ") + e.what());
    }
    return rows;
  }
  std::string line;
  std::getline(in, line);
  if (line != "x,y,z,source_index") throw Error(ErrorCode::ParseError, "unexpected CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string x, y, z, idx;
    if (!std::getline(fields, x, ',') || !std::getline(fields, y, ',') || !std::getline(fields, z, ',') ||
        !std::getline(fields, idx)) {
      throw Error(ErrorCode::ParseError, "malformed CSV row: " + line);
    }
    rows.push_back({{std::stod(x), std::stod(y), std::stod(z)}, std::stoul(idx)});
  }
  return rows;
}

}  // namespace lens
