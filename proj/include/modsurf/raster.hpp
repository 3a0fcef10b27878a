#pragma once

// Artifacts from a scanned grid: causal rasters (PGM), zero-curvature
// isocurves, OBJ height meshes and CSV tables.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modsurf/geometry.hpp"

namespace modsurf {

enum class PixelCode : std::uint8_t { timelike = 0, lightlike = 1, spacelike = 2, excluded = 3 };

// Row 0 is the top of the image (largest y).
struct Raster {
  int width = 0, height = 0;
  std::vector<PixelCode> pixels;

  PixelCode at(int col, int row) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  // Plain P2 with gray = 85 * code, lines at most 70 characters.
  std::string to_pgm() const;
};

// A timelike/spacelike pixel next to the opposite class becomes lightlike
// when it is the neighbour closer to |F'| = 1, so the band is always visible.
Raster causal_raster(const GridField& g);
void write_pgm(const Raster& r, const std::string& path);

struct IsoCurveSet {
  std::vector<std::vector<cplx>> polylines;
  // Closed loops repeat their first point at the end.
  std::vector<bool> closed;
  // The curvature numerator is zero within tolerance at every usable sample.
  bool degenerate_level = false;
};

// Zero level of |F'|^4 - |2FF'' - F'^2|^2 by marching squares. Cells with an
// excluded corner are skipped; saddle cells use the mean of the corners.
IsoCurveSet zero_k_isocurves(const GridField& g, double zero_tol = 1e-12);

std::string mesh_text(const GridField& g);
void export_mesh(const GridField& g, const std::string& path);

std::string csv_text(const GridField& g);
void export_csv(const GridField& g, const std::string& path);

struct CsvRow {
  double x = 0, y = 0;
  std::optional<double> h, gradsq, K, H;
  std::string causal, kmode;
};

// Reads the format written by export_csv. Throws IoError.
std::vector<CsvRow> read_csv(const std::string& path);
std::vector<CsvRow> parse_csv(const std::string& text);

}  // namespace modsurf
