#include "modsurf/raster.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "modsurf/errors.hpp"

namespace modsurf {

namespace {

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write failed: " + path);
}

bool usable(const GridField& g, std::size_t k) { return g.excluded[k] == 0; }

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string Raster::to_pgm() const {
  std::string s = "P2\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  for (int row = 0; row < height; ++row) {
    std::string line;
    for (int col = 0; col < width; ++col) {
      const std::string v = std::to_string(85 * static_cast<int>(at(col, row)));
      if (!line.empty() && line.size() + 1 + v.size() > 70) {
        s += line + "\n";
        line.clear();
      }
      if (!line.empty()) line += ' ';
      line += v;
    }
    s += line + "\n";
  }
  return s;
}

Raster causal_raster(const GridField& g) {
  Raster r;
  r.width = g.nx;
  r.height = g.ny;
  r.pixels.assign(static_cast<std::size_t>(g.nx) * g.ny, PixelCode::excluded);
  auto code = [&](int i, int j) {
    if (g.is_excluded(i, j)) return PixelCode::excluded;
    switch (g.at(i, j).causal) {
      case Causal::timelike: return PixelCode::timelike;
      case Causal::lightlike: return PixelCode::lightlike;
      case Causal::spacelike: return PixelCode::spacelike;
    }
    return PixelCode::excluded;
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      PixelCode c = code(i, j);
      if (c == PixelCode::timelike || c == PixelCode::spacelike) {
        const PixelCode other = c == PixelCode::timelike ? PixelCode::spacelike : PixelCode::timelike;
        const double gap = std::fabs(1.0 - g.at(i, j).grad_sq);
        constexpr int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
        for (int n = 0; n < 4; ++n) {
          const int a = i + di[n], b = j + dj[n];
          if (a < 0 || b < 0 || a >= g.nx || b >= g.ny || code(a, b) != other) continue;
          if (gap <= std::fabs(1.0 - g.at(a, b).grad_sq)) {
            c = PixelCode::lightlike;
            break;
          }
        }
      }
      r.pixels[static_cast<std::size_t>(g.ny - 1 - j) * g.nx + i] = c;
    }
  return r;
}

void write_pgm(const Raster& r, const std::string& path) { write_text(r.to_pgm(), path); }

IsoCurveSet zero_k_isocurves(const GridField& g, double zero_tol) {
  IsoCurveSet out;
  const std::size_t npts = g.samples.size();
  std::vector<double> v(npts, std::numeric_limits<double>::quiet_NaN());
  bool any = false, all_zero = true;
  for (std::size_t k = 0; k < npts; ++k) {
    if (!usable(g, k) || !std::isfinite(g.samples[k].k_numer)) continue;
    v[k] = g.samples[k].k_numer;
    any = true;
    if (std::fabs(v[k]) > zero_tol * g.samples[k].numer_scale) all_zero = false;
  }
  if (!any) return out;
  if (all_zero) {
    out.degenerate_level = true;
    return out;
  }

  // Edge ids: 2k is the edge from point k to its right neighbour, 2k+1 to the one above.
  auto hedge = [&](int i, int j) { return 2 * static_cast<long>(g.index(i, j)); };
  auto vedge = [&](int i, int j) { return 2 * static_cast<long>(g.index(i, j)) + 1; };
  std::unordered_map<long, cplx> point;
  auto edge_point = [&](long id) {
    auto it = point.find(id);
    if (it != point.end()) return;
    const std::size_t k = static_cast<std::size_t>(id / 2);
    const int i = static_cast<int>(k % g.nx), j = static_cast<int>(k / g.nx);
    const std::size_t k1 = id % 2 == 0 ? g.index(i + 1, j) : g.index(i, j + 1);
    const double t = v[k] / (v[k] - v[k1]);
    const cplx p0(g.x(i), g.y(j));
    const cplx p1 = id % 2 == 0 ? cplx(g.x(i + 1), g.y(j)) : cplx(g.x(i), g.y(j + 1));
    point.emplace(id, p0 + t * (p1 - p0));
  };

  std::vector<std::pair<long, long>> segs;
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const std::size_t ka = g.index(i, j), kb = g.index(i + 1, j), kc = g.index(i + 1, j + 1),
                        kd = g.index(i, j + 1);
      const double a = v[ka], b = v[kb], c = v[kc], d = v[kd];
      if (std::isnan(a) || std::isnan(b) || std::isnan(c) || std::isnan(d)) continue;
      const int mask = (a < 0) | (b < 0) << 1 | (c < 0) << 2 | (d < 0) << 3;
      if (mask == 0 || mask == 15) continue;
      const long bottom = hedge(i, j), top = hedge(i, j + 1), left = vedge(i, j), right = vedge(i + 1, j);
      auto add = [&](long e0, long e1) {
        edge_point(e0);
        edge_point(e1);
        segs.emplace_back(e0, e1);
      };
      switch (mask) {
        case 1: case 14: add(left, bottom); break;
        case 2: case 13: add(bottom, right); break;
        case 4: case 11: add(right, top); break;
        case 8: case 7: add(top, left); break;
        case 3: case 12: add(left, right); break;
        case 6: case 9: add(bottom, top); break;
        case 5: case 10: {
          const bool center_in = (a + b + c + d) / 4 < 0;
          const bool a_in = a < 0;
          if (center_in == a_in) {
            add(bottom, right);
            add(top, left);
          } else {
            add(left, bottom);
            add(right, top);
          }
          break;
        }
        default: break;
      }
    }

  std::unordered_map<long, std::vector<std::size_t>> at_edge;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    at_edge[segs[s].first].push_back(s);
    at_edge[segs[s].second].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  auto walk = [&](std::size_t s0, long start) {
    std::vector<cplx> line{point[start]};
    long e = start;
    std::size_t s = s0;
    bool closed = false;
    while (true) {
      used[s] = true;
      e = segs[s].first == e ? segs[s].second : segs[s].first;
      line.push_back(point[e]);
      if (e == start) {
        closed = true;
        break;
      }
      std::size_t next = segs.size();
      for (std::size_t c : at_edge[e])
        if (!used[c]) next = c;
      if (next == segs.size()) break;
      s = next;
    }
    out.polylines.push_back(std::move(line));
    out.closed.push_back(closed);
  };
  // Open chains start at an edge used by one segment; scan in segment order for determinism.
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    for (long e : {segs[s].first, segs[s].second})
      if (!used[s] && at_edge[e].size() == 1) walk(s, e);
  }
  for (std::size_t s = 0; s < segs.size(); ++s)
    if (!used[s]) walk(s, segs[s].first);
  return out;
}

std::string mesh_text(const GridField& g) {
  std::string s;
  std::vector<long> id(g.samples.size(), 0);
  long next = 1;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      if (!usable(g, k) || !std::isfinite(g.samples[k].h)) continue;
      id[k] = next++;
      s += "v " + shortest(g.x(i)) + " " + shortest(g.y(j)) + " " + shortest(g.samples[k].h) + "\n";
    }
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const long a = id[g.index(i, j)], b = id[g.index(i + 1, j)], c = id[g.index(i + 1, j + 1)],
                 d = id[g.index(i, j + 1)];
      if (!a || !b || !c || !d) continue;
      s += "f " + std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(c) + "\n";
      s += "f " + std::to_string(a) + " " + std::to_string(c) + " " + std::to_string(d) + "\n";
    }
  return s;
}

void export_mesh(const GridField& g, const std::string& path) { write_text(mesh_text(g), path); }

std::string csv_text(const GridField& g) {
  std::string s = "x,y,h,gradsq,K,H,causal,kmode\n";
  auto num = [](double v) { return std::isfinite(v) ? g17(v) : std::string(); };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      s += g17(g.x(i)) + "," + g17(g.y(j)) + ",";
      if (g.is_excluded(i, j)) {
        s += ",,,,excluded,\n";
        continue;
      }
      const SurfaceSample& p = g.at(i, j);
      s += num(p.h) + "," + num(p.grad_sq) + "," + num(p.K) + "," + (p.H ? num(*p.H) : std::string()) + ",";
      s += std::string(to_string(p.causal)) + "," + std::string(to_string(p.k_mode)) + "\n";
    }
  return s;
}

void export_csv(const GridField& g, const std::string& path) { write_text(csv_text(g), path); }

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,h,gradsq,K,H,causal,kmode") throw IoError("unexpected CSV header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t c = line.find(',', pos);
      cells.push_back(line.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    if (cells.size() != 8) throw IoError("CSV row has " + std::to_string(cells.size()) + " cells: " + line);
    auto num = [&](const std::string& cell) -> std::optional<double> {
      if (cell.empty()) return std::nullopt;
      double v = 0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) throw IoError("bad number: " + cell);
      return v;
    };
    CsvRow r;
    r.x = num(cells[0]).value_or(0);
    r.y = num(cells[1]).value_or(0);
    r.h = num(cells[2]);
    r.gradsq = num(cells[3]);
    r.K = num(cells[4]);
    r.H = num(cells[5]);
    r.causal = cells[6];
    r.kmode = cells[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<CsvRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace modsurf
