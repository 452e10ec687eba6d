#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lenscoords/numeric.hpp"

namespace lens {

struct DomainPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Display map of L_3^2 into the solid wedge model: the planar part is zeta_3^{-k} z
// with k = floor(arg z / (2 pi / 3)), the height is (arg w - pi/3) sqrt(1 - |z|^2)
// with arg w reduced to [0, 2 pi / 3). Requires |z|^2 + |w|^2 = 1 within 1e-9.
DomainPoint fundamental_domain_map(Complex z, Complex w);

// Maps every point of a cloud in L_3^2.
std::vector<DomainPoint> fundamental_domain_map(const std::vector<LensPoint>& points);

enum class ExportFormat { csv, json };

struct ExportRow {
  DomainPoint p;
  std::size_t source_index = 0;
};

void export_cloud(const std::vector<ExportRow>& rows, ExportFormat format, const std::string& path);
std::vector<ExportRow> read_cloud(const std::string& path, ExportFormat format);

// Serialized form written by export_cloud, exposed for byte comparisons.
std::string format_cloud(const std::vector<ExportRow>& rows, ExportFormat format);

}  // namespace lens
