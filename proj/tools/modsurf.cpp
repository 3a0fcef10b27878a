#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <variant>

#include "modsurf/classify.hpp"
#include "modsurf/construct.hpp"
#include "modsurf/errors.hpp"
#include "modsurf/fieldtheory.hpp"
#include "modsurf/kernels.hpp"
#include "modsurf/raster.hpp"
#include "modsurf/repro.hpp"
#include "modsurf/textio.hpp"

using json = nlohmann::json;
using namespace modsurf;

namespace {

constexpr int kOk = 0, kDomain = 1, kUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

cplx to_cplx(const std::string& text, const char* what) {
  const auto z = parse_complex(text);
  if (!z) throw UsageError(std::string("bad complex number for ") + what + ": '" + text + "'");
  return *z;
}

Rect to_rect(const std::vector<double>& v) {
  if (v.size() != 4) throw UsageError("a rectangle needs four numbers: x0 x1 y0 y1");
  if (!(v[0] < v[1]) || !(v[2] < v[3])) throw UsageError("rectangle needs x0 < x1 and y0 < y1");
  return {v[0], v[1], v[2], v[3]};
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json cnum(cplx z) { return format_complex(z); }
template <class T>
json opt(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, cplx>)
    return cnum(*v);
  else
    return num(*v);
}

json sample_json(const SurfaceSample& s) {
  json j;
  j["point"] = cnum(s.point);
  j["F"] = cnum(s.F);
  j["dF"] = cnum(s.dF);
  j["d2F"] = cnum(s.d2F);
  j["h"] = num(s.h);
  j["hx"] = num(s.hx);
  j["hy"] = num(s.hy);
  j["gradsq"] = num(s.grad_sq);
  j["hess"] = s.hess ? json{{"xx", num(s.hess->xx)}, {"xy", num(s.hess->xy)}, {"yy", num(s.hess->yy)}} : json(nullptr);
  j["causal"] = to_string(s.causal);
  j["K"] = num(s.K);
  j["K_state"] = to_string(s.k_state);
  j["Kmode"] = to_string(s.k_mode);
  j["K_alpha_form"] = opt(s.K_eq6);
  j["H"] = opt(s.H);
  j["H_graph"] = opt(s.H_graph);
  j["alpha"] = opt(s.alpha);
  j["beta"] = opt(s.beta);
  j["t"] = opt(s.t);
  j["smooth"] = s.smooth;
  j["f_zero"] = s.f_zero;
  j["f1_zero"] = s.f1_zero;
  j["f2_zero"] = s.f2_zero;
  return j;
}

json census_json(const CensusReport& c) {
  json circles = json::array();
  for (const CensusCircle& k : c.circles)
    circles.push_back({{"radius", k.radius}, {"samples", k.samples}, {"resolved", k.resolved},
                       {"sign_changes", k.sign_changes}, {"pos_arcs", k.pos_arcs}, {"neg_arcs", k.neg_arcs}});
  return {{"radius", c.radius}, {"sign_changes", c.sign_changes}, {"pos_arcs", c.pos_arcs},
          {"neg_arcs", c.neg_arcs}, {"stable", c.stable}, {"crossings", c.crossings}, {"circles", circles}};
}

struct FunctionOpts {
  std::string f;
  std::string anchor, value;

  Expr expr() const {
    const ParseResult r = parse(f);
    if (auto* d = std::get_if<ParseDiagnostic>(&r)) throw UsageError("cannot parse -f '" + f + "': " + d->to_string());
    return std::get<Expr>(r);
  }
  BranchPolicy policy() const {
    if (anchor.empty()) return {};
    std::optional<cplx> ref;
    if (!value.empty()) ref = to_cplx(value, "--branch-value");
    return BranchPolicy::anchored(to_cplx(anchor, "--branch-anchor"), ref);
  }
  void add(CLI::App* app, bool required = true) {
    auto* o = app->add_option("-f,--function", f, "analytic function of z");
    if (required) o->required();
    app->add_option("--branch-anchor", anchor, "point where branches of log/pow are fixed");
    app->add_option("--branch-value", value, "value of F at the anchor, selecting the branch");
  }
};

struct GridOpts {
  std::vector<double> rect{-1, 1, -1, 1};
  int nx = 64, ny = 64;
  void add(CLI::App* app) {
    app->add_option("--rect", rect, "x0 x1 y0 y1")->expected(4);
    app->add_option("--nx", nx, "samples along x")->check(CLI::Range(2, 100000));
    app->add_option("--ny", ny, "samples along y")->check(CLI::Range(2, 100000));
  }
};

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Folds a --config file of key=value lines into the argument list. Flags given
// on the command line win; "command" names the subcommand when none is given;
// only "rect" is split on whitespace.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc), kept;
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size())
      path = args[++k];
    else if (args[k].rfind("--config=", 0) == 0)
      path = args[k].substr(9);
    else
      kept.push_back(args[k]);
  }
  if (path.empty()) return kept;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<std::string> extra, command;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key.empty()) throw UsageError("config line without a key: " + line);
    if (key == "command") {
      std::istringstream ws(value);
      for (std::string w; ws >> w;) command.push_back(w);
      continue;
    }
    const std::string flag = (key == "z" || key == "f" ? "-" : "--") + key;
    bool given = false;
    for (const std::string& a : kept) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (given) continue;
    extra.push_back(flag);
    if (key == "rect") {
      std::istringstream ws(value);
      for (std::string w; ws >> w;) extra.push_back(w);
    } else {
      extra.push_back(value);
    }
  }
  bool has_command = false;
  for (const std::string& a : kept)
    for (const char* name : {"eval", "classify", "construct", "verify", "raster", "mesh", "csv", "repro"})
      has_command = has_command || a == name;
  std::vector<std::string> out = has_command ? kept : command;
  if (!has_command) out.insert(out.end(), kept.begin(), kept.end());
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modsurf: surfaces t = |F(z)| in Lorentz-Minkowski 3-space"};
  std::string config_help;
  app.add_option("--config", config_help, "flat key=value file mirroring the flags");
  app.require_subcommand(1);
  std::string kernel;
  app.add_option("--kernel", kernel, "force the curvature kernel")->check(CLI::IsMember({"scalar", "auto"}));

  FunctionOpts fo;
  std::string zs = "0";
  GridOpts go;
  std::string output;

  auto* eval = app.add_subcommand("eval", "jet and surface sample at a point");
  fo.add(eval);
  eval->add_option("-z", zs, "point, as a+bi")->required();

  auto* classify = app.add_subcommand("classify", "local sign prediction and circle census");
  FunctionOpts fo_c;
  fo_c.add(classify);
  std::string zc = "0";
  classify->add_option("-z", zc, "point, as a+bi")->required();

  auto* construct = app.add_subcommand("construct", "build F from beta");
  std::string beta, kstr, f0str, domain = "disk 0.5", target = "none", out_fmt;
  int cn = 32;
  std::vector<std::string> probe;
  construct->add_option("--beta", beta, "beta(z)")->required();
  construct->add_option("--k", kstr, "F(0)/F'(0)")->required();
  construct->add_option("--f0", f0str, "F(0)")->required();
  construct->add_option("--domain", domain, "'disk r' or 'rect x0 x1 y0 y1'");
  construct->add_option("--target-sign", target, "require K of one sign")->check(CLI::IsMember({"pos", "neg", "none"}));
  construct->add_option("--out", out_fmt, "grid export format")->check(CLI::IsMember({"csv", "obj"}));
  construct->add_option("--output", output, "grid export path");
  construct->add_option("--n", cn, "grid size for exports")->check(CLI::Range(2, 4096));
  construct->add_option("-z", probe, "points to report F and K at");

  auto* verify = app.add_subcommand("verify", "field-theory residual reports");
  verify->require_subcommand(1);
  GridOpts vg;
  vg.nx = vg.ny = 21;
  vg.rect = {0, 1, 0, 1};
  FunctionOpts vf;

  auto* v_cmc = verify->add_subcommand("cmc", "constant mean curvature family");
  double H = 1, a = 0, b = 0;
  v_cmc->add_option("--H", H, "nonzero mean curvature");
  v_cmc->add_option("--a", a);
  v_cmc->add_option("--b", b);
  vg.add(v_cmc);

  auto* v_zmc = verify->add_subcommand("zmc", "zero mean curvature residual scan");
  vf.add(v_zmc);
  vg.add(v_zmc);

  auto* v_liou = verify->add_subcommand("liouville", "first-order Liouville residual of h = |F|");
  double Q = 0, mu = 0, bc = 0, Sg = 0;
  vf.add(v_liou);
  vg.add(v_liou);
  v_liou->add_option("--Q", Q);
  v_liou->add_option("--mu", mu);
  v_liou->add_option("--bcpl", bc);
  v_liou->add_option("--Sg", Sg);

  auto* v_mass = verify->add_subcommand("massless", "h = f(x +- y) wave residuals");
  std::string orient = "plus";
  vf.add(v_mass);
  vg.add(v_mass);
  v_mass->add_option("--orientation", orient)->check(CLI::IsMember({"plus", "minus"}));

  auto* v_sigma = verify->add_subcommand("sigma", "minimum-norm Christoffel recovery from h^i = |F_i|");
  std::vector<std::string> fs;
  int sx = 1, sy = 1;
  v_sigma->add_option("-f,--function", fs, "component functions")->required();
  v_sigma->add_option("--sx", sx)->check(CLI::IsMember({-1, 1}));
  v_sigma->add_option("--sy", sy)->check(CLI::IsMember({-1, 1}));
  vg.add(v_sigma);

  auto* v_bounds = verify->add_subcommand("bounds", "convexity bound of h = |F|");
  std::string ambient = "euclidean";
  vf.add(v_bounds);
  vg.add(v_bounds);
  v_bounds->add_option("--ambient", ambient)->check(CLI::IsMember({"euclidean", "minkowski"}));

  FunctionOpts ff;
  auto* raster = app.add_subcommand("raster", "causal character raster (PGM)");
  ff.add(raster);
  go.add(raster);
  raster->add_option("--output", output, "PGM path")->required();
  std::string iso_out;
  raster->add_option("--isocurves", iso_out, "also write zero-curvature polylines as JSON");
  auto* mesh = app.add_subcommand("mesh", "height mesh (OBJ)");
  ff.add(mesh);
  go.add(mesh);
  mesh->add_option("--output", output, "OBJ path")->required();
  auto* csv = app.add_subcommand("csv", "per-sample table (CSV)");
  ff.add(csv);
  go.add(csv);
  csv->add_option("--output", output, "CSV path")->required();

  auto* repro = app.add_subcommand("repro", "run the worked-example suite");
  std::uint64_t seed = 1;
  repro->add_option("--seed", seed);

  try {
    std::vector<std::string> args;
    try {
      args = expand_config(argc, argv);
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kUsage;
    }
    std::vector<char*> cargs{argv[0]};
    for (std::string& a : args) cargs.push_back(a.data());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (kernel == "scalar") kernels::force_isa(kernels::Isa::scalar);

    if (*eval) {
      const Expr F = fo.expr();
      const cplx z = to_cplx(zs, "-z");
      const ComplexJet jet = eval_jet(F, z, 2, fo.policy());
      json derivs = json::array();
      for (int k = 0; k <= 2; ++k) derivs.push_back(cnum(jet.derivative(k)));
      print({{"function", format(F)}, {"z", cnum(z)}, {"jet", derivs},
             {"sample", sample_json(sample_point(F, z, fo.policy()))}});
    } else if (*classify) {
      const Expr F = fo_c.expr();
      const cplx z = to_cplx(zc, "-z");
      json j{{"function", format(F)}, {"z", cnum(z)}};
      const ZeroProfile p = zero_profile(F, z, kMaxJetOrder, kVanishTol, fo_c.policy());
      j["profile"] = {{"f_zero", p.f_zero}, {"f1_zero", p.f1_zero}, {"f2_zero", p.f2_zero}, {"n", p.n}};
      try {
        const LocalPrediction lp = predict(p);
        j["prediction"] = {{"K_at_point", to_string(lp.k_at_point)}, {"nPlus", lp.n_plus}, {"nMinus", lp.n_minus},
                           {"zero_curves", lp.zero_curves}, {"source", lp.source}, {"disputed", lp.disputed}};
      } catch (const UnclassifiedError& e) {
        j["prediction"] = nullptr;
        j["unclassified"] = e.what();
      }
      try {
        const CensusReport c = census(F, z, {}, fo_c.policy());
        j["census"] = census_json(c);
        if (j["prediction"].is_object())
          j["agreement"] = c.pos_arcs == j["prediction"]["nPlus"] && c.neg_arcs == j["prediction"]["nMinus"];
      } catch (const DegeneracyError& e) {
        j["census"] = nullptr;
        j["census_error"] = e.what();
      }
      const MeanCurvatureRow r = mean_curvature_row(F, z, fo_c.policy());
      j["mean_curvature"] = {{"row", to_string(r.row)}, {"sign", to_string(r.sign)},
                             {"printed_sign", to_string(r.printed_sign)}, {"disputed", r.disputed}};
      print(j);
    } else if (*construct) {
      const ParseResult br = parse(beta);
      if (auto* d = std::get_if<ParseDiagnostic>(&br)) throw UsageError("cannot parse --beta: " + d->to_string());
      Domain dom;
      try {
        dom = parse_domain(domain);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const BetaSpec spec{std::get<Expr>(br), to_cplx(kstr, "--k"), to_cplx(f0str, "--f0"), dom};
      if (!out_fmt.empty() && output.empty()) throw UsageError("--out needs --output");
      std::optional<ConstructedF> F;
      json j{{"beta", format(spec.beta)}, {"k", cnum(spec.k)}, {"F0", cnum(spec.F0)}, {"domain", dom.describe()}};
      if (target == "none") {
        validate_spec(spec);
        F.emplace(spec);
      } else {
        SignLockResult r = sign_locked_construct(spec, target == "pos" ? TargetSign::positive : TargetSign::negative);
        if (auto* fail = std::get_if<ValidationFailure>(&r)) {
          json pts = json::array();
          for (cplx z : fail->points) pts.push_back(cnum(z));
          j["validation"] = {{"ok", false}, {"reason", fail->reason}, {"points", pts}};
          print(j);
          return kDomain;
        }
        F.emplace(std::get<ConstructedF>(std::move(r)));
        j["validation"] = {{"ok", true}};
      }
      json probes = json::array();
      const AnalyticSource src = F->source(DerivativeMode::structural);
      for (const std::string& s : probe) {
        const cplx z = to_cplx(s, "-z");
        const UllrichResult u = F->eval(z);
        const SurfaceSample sm = sample_point(src, z);
        probes.push_back({{"z", cnum(z)}, {"F", cnum(u.F)}, {"err", u.err}, {"K", num(sm.K)},
                          {"causal", to_string(sm.causal)}});
      }
      j["points"] = probes;
      if (!output.empty()) {
        AnalyticSource inside = src;
        inside.jet = [src, dom](cplx z, int k) {
          if (!dom.contains(z)) throw DomainError("outside the construction domain");
          return src.jet(z, k);
        };
        const GridField g = scan_grid(inside, dom.bounds(), cn, cn);
        if (out_fmt == "obj")
          export_mesh(g, output);
        else
          export_csv(g, output);
        j["output"] = output;
      }
      print(j);
    } else if (*verify) {
      const Rect r = to_rect(vg.rect);
      json j;
      if (*v_cmc) {
        const CmcReport c = cmc_verify({H, a, b}, r, vg.nx);
        j = {{"case", "cmc"}, {"H", H}, {"a", a}, {"b", b}, {"max_res_laplace", c.max_res_laplace},
             {"max_res_eikonal", c.max_res_eikonal}, {"max_res_square", c.max_res_square},
             {"characteristic", characteristic_f_check(a, b, H, r, vg.nx)}};
      } else if (*v_zmc) {
        const ZmcScan s = zmc_scan(vf.expr(), r, vg.nx, vg.ny, vf.policy());
        j = {{"case", "zmc"}, {"function", format(vf.expr())}, {"max_residual", s.max_residual},
             {"min_residual", s.min_residual}, {"points", s.points}, {"affine", s.affine}, {"vacuous", s.vacuous}};
      } else if (*v_liou) {
        const ScalarField h = ScalarField::from_F(vf.expr(), r, vg.nx, vg.ny, vf.policy());
        const LiouvilleReport l = liouville_residual(h, {Q, mu, bc, Sg});
        int nontrivial = 0;
        for (auto v : l.nontrivial) nontrivial += v;
        j = {{"case", "liouville"}, {"function", format(vf.expr())}, {"max_abs_residual", l.residual.max},
             {"nontrivial_points", nontrivial}, {"points", static_cast<int>(l.nontrivial.size())}};
      } else if (*v_mass) {
        const MasslessReport m = massless_check(vf.expr(), orient == "plus" ? NullOrientation::plus : NullOrientation::minus,
                                                r, vg.nx);
        j = {{"case", "massless"}, {"function", format(vf.expr())}, {"orientation", orient},
             {"box_res", m.box_res}, {"null_res", m.null_res}};
      } else if (*v_sigma) {
        std::vector<ScalarField> hs;
        for (const std::string& s : fs) {
          FunctionOpts one;
          one.f = s;
          hs.push_back(ScalarField::from_F(one.expr(), r, vg.nx, vg.ny));
        }
        const SigmaSolveResult s = sigma_solve(hs, sx, sy);
        j = {{"case", "sigma"}, {"n", s.n}, {"max_residual", s.max_residual},
             {"singular_points", s.singular_points}, {"signature", {sx, sy}}};
      } else if (*v_bounds) {
        const ScalarField h = ScalarField::from_F(vf.expr(), r, vg.nx, vg.ny, vf.policy());
        const ConvexityReport c =
            convexity_bounds(h, ambient == "euclidean" ? Ambient::euclidean : Ambient::minkowski);
        j = {{"case", "bounds"}, {"function", format(vf.expr())}, {"ambient", ambient},
             {"max_bound", c.max_bound}, {"bound_holds", c.bound_holds},
             {"max_log_harmonic_residual", c.max_log_harmonic_residual}, {"ring_max", c.ring_max},
             {"trend_decreasing", c.trend_decreasing}, {"points", c.points}};
      }
      print(j);
    } else if (*raster || *mesh || *csv) {
      const GridField g = scan_grid(ff.expr(), to_rect(go.rect), go.nx, go.ny, ff.policy());
      json j{{"function", format(ff.expr())}, {"output", output}, {"nx", go.nx}, {"ny", go.ny}};
      if (*raster) {
        write_pgm(causal_raster(g), output);
        if (!iso_out.empty()) {
          const IsoCurveSet iso = zero_k_isocurves(g);
          json lines = json::array();
          for (const auto& pl : iso.polylines) {
            json pts = json::array();
            for (cplx p : pl) pts.push_back({p.real(), p.imag()});
            lines.push_back(pts);
          }
          std::ofstream out(iso_out);
          if (!out) throw IoError("cannot open " + iso_out);
          out << json{{"degenerate_level", iso.degenerate_level}, {"polylines", lines}}.dump() << "\n";
          j["isocurves"] = iso_out;
        }
      } else if (*mesh) {
        export_mesh(g, output);
      } else {
        export_csv(g, output);
      }
      int excluded = 0;
      for (auto e : g.excluded) excluded += e;
      j["excluded"] = excluded;
      print(j);
    } else if (*repro) {
      const ReproReport rep = run_repro(seed);
      json items = json::array();
      for (const ReproItem& it : rep.items)
        items.push_back({{"name", it.name}, {"passed", it.passed}, {"disputed", it.disputed}, {"detail", it.detail},
                         {"seconds", it.seconds}});
      print({{"seed", seed}, {"all_passed", rep.all_passed()}, {"items", items}});
      return rep.all_passed() ? kOk : kDomain;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kOk;
}
