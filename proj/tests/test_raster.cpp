#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "modsurf/classify.hpp"
#include "modsurf/errors.hpp"
#include "modsurf/raster.hpp"

using namespace modsurf;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / (std::string("modsurf_") + name)).string();
}

GridField sin2_grid() {
  return scan_grid(parse_or_throw("sin(z)^2"), Rect{0, std::numbers::pi / 2, -1, 1}, 64, 64);
}

int count(const Raster& r, PixelCode c) {
  int n = 0;
  for (PixelCode p : r.pixels) n += p == c;
  return n;
}

}  // namespace

TEST_CASE("causal raster") {
  const GridField g = sin2_grid();
  const Raster r = causal_raster(g);
  CHECK(r.width == 64);
  CHECK(r.height == 64);
  CHECK(count(r, PixelCode::timelike) > 0);
  CHECK(count(r, PixelCode::spacelike) > 0);
  CHECK(count(r, PixelCode::lightlike) > 0);
  // No timelike pixel touches a spacelike one.
  for (int row = 0; row < 64; ++row)
    for (int col = 0; col + 1 < 64; ++col) {
      const PixelCode a = r.at(col, row), b = r.at(col + 1, row);
      CHECK_FALSE((a == PixelCode::timelike && b == PixelCode::spacelike));
      CHECK_FALSE((a == PixelCode::spacelike && b == PixelCode::timelike));
    }
  // Top row is the largest y.
  const Raster small = causal_raster(scan_grid(parse_or_throw("2*z"), Rect{0, 1, 0, 1}, 3, 3));
  CHECK(count(small, PixelCode::timelike) == 9);

  const Raster flat = causal_raster(scan_grid(parse_or_throw("0.5*z"), Rect{-1, 1, -1, 1}, 8, 8));
  CHECK(count(flat, PixelCode::spacelike) == 64);

  const GridField pole = scan_grid(parse_or_throw("1/z"), Rect{-1, 1, -1, 1}, 5, 5);
  const Raster pr = causal_raster(pole);
  CHECK(pr.at(2, 2) == PixelCode::excluded);
  CHECK(count(pr, PixelCode::excluded) == 1);

  const std::string pgm = pr.to_pgm();
  CHECK(pgm.rfind("P2\n5 5\n255\n", 0) == 0);
  CHECK(pgm.find("255") != std::string::npos);
  std::istringstream lines(r.to_pgm());
  std::string line;
  int values = 0, n = 0;
  while (std::getline(lines, line)) {
    CHECK(line.size() <= 70);
    if (++n > 3) {
      std::istringstream ls(line);
      int v;
      while (ls >> v) {
        CHECK((v == 0 || v == 85 || v == 170 || v == 255));
        ++values;
      }
    }
  }
  CHECK(values == 64 * 64);
}

TEST_CASE("zero-curvature isocurves") {
  // Offset so the diagonal zero lines miss the lattice points.
  const Rect w{-0.05, 0.0531, -0.0473, 0.05};
  const GridField g = scan_grid(parse_or_throw("1+z+z^4"), w, 40, 40);
  const IsoCurveSet iso = zero_k_isocurves(g);
  CHECK_FALSE(iso.degenerate_level);
  // Branch ends on the window boundary, one per curve reaching the origin.
  std::vector<double> ends;
  const double eps = 1e-12;
  for (std::size_t p = 0; p < iso.polylines.size(); ++p) {
    if (iso.closed[p]) continue;
    for (cplx e : {iso.polylines[p].front(), iso.polylines[p].back()})
      if (std::fabs(e.real() - w.x0) < eps || std::fabs(e.real() - w.x1) < eps || std::fabs(e.imag() - w.y0) < eps ||
          std::fabs(e.imag() - w.y1) < eps)
        ends.push_back(std::arg(e));
  }
  REQUIRE(ends.size() == 4);
  std::sort(ends.begin(), ends.end());
  for (int k = 0; k < 4; ++k) {
    double gap = (k + 1 < 4 ? ends[k + 1] : ends[0] + 2 * std::numbers::pi) - ends[k];
    CHECK(gap == doctest::Approx(std::numbers::pi / 2).epsilon(0.15));
  }

  // Vertices sit on the zero level up to the local variation of the numerator.
  const double cell = std::hypot(g.dx(), g.dy());
  for (const auto& line : iso.polylines) {
    for (std::size_t k = 0; k + 1 < line.size(); ++k) CHECK(std::abs(line[k + 1] - line[k]) <= cell * (1 + 1e-12));
    for (cplx p : line) {
      const int i = std::min(static_cast<int>((p.real() - w.x0) / g.dx()), g.nx - 2);
      const int j = std::min(static_cast<int>((p.imag() - w.y0) / g.dy()), g.ny - 2);
      double lo = 1e300, hi = -1e300;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          lo = std::min(lo, g.at(i + a, j + b).k_numer);
          hi = std::max(hi, g.at(i + a, j + b).k_numer);
        }
      CHECK(std::fabs(sample_point(parse_or_throw("1+z+z^4"), p).k_numer) <= hi - lo);
    }
  }

  CHECK(zero_k_isocurves(scan_grid(parse_or_throw("exp(z)"), w, 16, 16)).degenerate_level);
  const IsoCurveSet none = zero_k_isocurves(scan_grid(parse_or_throw("1+z^2"), Rect{-0.1, 0.1, -0.1, 0.1}, 20, 20));
  CHECK_FALSE(none.degenerate_level);
  CHECK(none.polylines.empty());
}

TEST_CASE("marching squares on a circle") {
  // For z^2 + 1 the numerator is 16|z|^4 - 16, so the zero set is the unit circle.
  const GridField g = scan_grid(parse_or_throw("z^2+1"), Rect{-2, 2, -2, 2}, 60, 60);
  const IsoCurveSet iso = zero_k_isocurves(g);
  REQUIRE(iso.polylines.size() == 1);
  CHECK(iso.closed[0]);
  CHECK(iso.polylines[0].front() == iso.polylines[0].back());
  CHECK(iso.polylines[0].size() > 40);
  for (cplx p : iso.polylines[0]) CHECK(std::abs(p) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("obj mesh") {
  const GridField one = scan_grid(parse_or_throw("1"), Rect{0, 1, 0, 1}, 2, 2);
  CHECK(mesh_text(one) == "v 0 0 1\nv 1 0 1\nv 0 1 1\nv 1 1 1\nf 1 2 4\nf 1 4 3\n");

  const GridField pole = scan_grid(parse_or_throw("1/z"), Rect{-1, 1, -1, 1}, 3, 3);
  const std::string m = mesh_text(pole);
  int v = 0, f = 0;
  std::istringstream in(m);
  std::string line;
  while (std::getline(in, line)) {
    v += line[0] == 'v';
    f += line[0] == 'f';
  }
  CHECK(v == 8);
  CHECK(f == 0);

  const std::string path = tmp_path("mesh.obj");
  export_mesh(one, path);
  CHECK(slurp(path) == mesh_text(one));
  CHECK_THROWS_AS(export_mesh(one, "/nonexistent-dir/x.obj"), IoError);
}

TEST_CASE("csv export and round trip") {
  const GridField c = scan_grid(parse_or_throw("2"), Rect{0, 1, 0, 1}, 3, 3);
  const std::vector<CsvRow> rows = parse_csv(csv_text(c));
  REQUIRE(rows.size() == 9);
  for (const CsvRow& r : rows) {
    CHECK(r.h == rows[0].h);
    CHECK(r.K == rows[0].K);
    CHECK(r.causal == rows[0].causal);
  }

  const GridField pole = scan_grid(parse_or_throw("1/z"), Rect{-1, 1, -1, 1}, 3, 3);
  const std::vector<CsvRow> pr = parse_csv(csv_text(pole));
  CHECK(pr[4].causal == "excluded");
  CHECK_FALSE(pr[4].h);
  CHECK_FALSE(pr[4].K);
  CHECK(pr[4].x == 0);

  const GridField g = sin2_grid();
  const std::string path = tmp_path("grid.csv");
  export_csv(g, path);
  const std::vector<CsvRow> back = read_csv(path);
  REQUIRE(back.size() == g.samples.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const CsvRow& r = back[g.index(i, j)];
      const SurfaceSample& s = g.at(i, j);
      CHECK(r.x == g.x(i));
      CHECK(r.y == g.y(j));
      CHECK(*r.h == s.h);
      CHECK(*r.gradsq == s.grad_sq);
      if (std::isfinite(s.K)) CHECK(*r.K == s.K);
      else CHECK_FALSE(r.K);
      CHECK(r.H == s.H);
    }
  CHECK_THROWS_AS(parse_csv("a,b\n"), IoError);
}

TEST_CASE("golden artifacts") {
  const GridField g = sin2_grid();
  const std::string dir = MODSURF_GOLDEN_DIR;
  const std::string pgm = causal_raster(g).to_pgm(), obj = mesh_text(g), csv = csv_text(g);
  if (std::getenv("MODSURF_WRITE_GOLDEN")) {
    std::filesystem::create_directories(dir);
    std::ofstream(dir + "/sin2_causal.pgm", std::ios::binary) << pgm;
    std::ofstream(dir + "/sin2_mesh.obj", std::ios::binary) << obj;
    std::ofstream(dir + "/sin2_grid.csv", std::ios::binary) << csv;
  }
  CHECK(slurp(dir + "/sin2_causal.pgm") == pgm);
  CHECK(slurp(dir + "/sin2_mesh.obj") == obj);
  CHECK(slurp(dir + "/sin2_grid.csv") == csv);
  // Repeated runs are byte identical.
  CHECK(mesh_text(sin2_grid()) == obj);
}
