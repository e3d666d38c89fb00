#include "commands.hpp"

#include "acceptance.hpp"

#include <padic/geodesic.hpp>
#include <padic/sde.hpp>

#include <iostream>
#include <sstream>

namespace padic_cli {

namespace {

ChristoffelField christoffel_1d(Config& cfg, const Globals& g) {
  auto coeffs = padic_list(g.p, cfg.str("geo.gamma", "0"), g.precision);
  ChristoffelField G(g.p, 1, g.precision);
  G.set(0, 0, 0, poly_from_coeffs(g.p, 1, 0, coeffs, g.precision));
  return G;
}

GeodesicOptions geo_options(Config& cfg) {
  GeodesicOptions o;
  o.chart_radius = static_cast<int>(cfg.integer("geo.chart_radius", 0));
  auto basis = cfg.str("geo.basis", "power");
  if (basis == "mahler")
    o.basis = Basis::mahler;
  else if (basis != "power")
    throw ConfigError("geo.basis must be power or mahler");
  return o;
}

int geodesic_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg);
  auto G = christoffel_1d(cfg, g);
  auto opt = geo_options(cfg);
  auto x0 = padic_value(g.p, cfg.str("geo.x0", "0"), g.precision);
  auto y0 = padic_value(g.p, cfg.str("geo.y0", "1"), g.precision);
  auto bs = padic_list(g.p, cfg.str("geo.b", "0,1,2,3"), g.precision);
  GeodesicResult res;
  try {
    res = geodesic_solve(G, {x0}, {y0}, opt);
  } catch (const NoContraction& e) {
    CsvTable t({"status", "detail"});
    t.row({"no_contraction", std::string("\"") + e.what() + "\""});
    run.table("", t);
    throw CertificateFailure(e.what());
  }
  CsvTable t({"b", "in_domain", "c", "velocity", "residual"});
  for (const auto& b : bs) {
    bool inside = b.is_zero() || b.valuation() >= res.domain_exponent;
    if (!inside) {
      t.row({literal(b), "0", "", "", ""});
      continue;
    }
    t.row({literal(b), "1", literal(res.at(b)), literal(res.velocity(b)), num(geodesic_residual(G, res, {b}))});
  }
  run.table("", t);
  run.note("domain_exponent", std::to_string(res.domain_exponent));
  run.note("certificate", num(res.certificate));
  run.note("iterations", std::to_string(res.iterations));
  return 0;
}

int exp_map_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg);
  auto G = christoffel_1d(cfg, g);
  auto opt = geo_options(cfg);
  auto x0 = padic_value(g.p, cfg.str("geo.x0", "0"), g.precision);
  auto Ss = padic_list(g.p, cfg.str("geo.s", std::to_string(g.p) + "," + std::to_string(g.p * g.p)), g.precision);
  CsvTable t({"S", "status", "exp"});
  std::string failure;
  for (const auto& S : Ss) {
    try {
      t.row({literal(S), "ok", literal(exp_map(G, {x0}, {S}, opt))});
    } catch (const NoContraction& e) {
      t.row({literal(S), "no_contraction", ""});
      failure = e.what();
    }
  }
  run.table("", t);
  if (!failure.empty()) throw CertificateFailure(failure);
  return 0;
}

struct SdeSetup {
  SdeSpec spec;
  TimeGrid grid;
  State xi0;
  std::function<DriverPath(std::uint64_t)> driver;
  std::shared_ptr<WienerSampler> sampler;
};

SdeSetup sde_setup(Config& cfg, const Globals& g) {
  SdeSetup s;
  auto t0 = padic_value(g.p, cfg.str("sde.t0", "0"), g.precision);
  int r = static_cast<int>(cfg.integer("sde.r", 1));
  int L = static_cast<int>(cfg.integer("sde.l", 3));
  if (L < 0 || L > 10) throw ConfigError("sde.l must lie in [0, 10]");
  s.grid = TimeGrid(g.p, t0, r, L);
  s.spec = SdeSpec(g.p, 1, 1, g.precision);
  s.spec.drift(0) = poly_from_coeffs(g.p, 2, 1, padic_list(g.p, cfg.str("sde.a", "1"), g.precision), g.precision);
  s.spec.diffusion(0, 0) =
      poly_from_coeffs(g.p, 2, 1, padic_list(g.p, cfg.str("sde.e", "0"), g.precision), g.precision);
  s.spec.radius = static_cast<int>(cfg.integer("sde.radius", 0));
  s.spec.C1 = cfg.real("sde.c1", 1.0);
  s.spec.C2 = cfg.real("sde.c2", 1.0);
  s.xi0 = {padic_value(g.p, cfg.str("sde.xi0", "0"), g.precision)};
  auto kind = cfg.str("sde.driver", "zero");
  if (kind == "zero") {
    auto grid = s.grid;
    s.driver = [grid, prec = g.precision](std::uint64_t) { return zero_driver(grid, 1, prec); };
  } else if (kind == "wiener") {
    auto q = qgauss_spec(cfg, "gauss", g);
    if (q.dim() != 1) throw ConfigError("sde needs a 1-d gauss.b");
    s.sampler = std::make_shared<WienerSampler>(q);
    auto grid = s.grid;
    auto sampler = s.sampler;
    s.driver = [grid, sampler, seed = g.seed](std::uint64_t i) { return wiener_driver(grid, *sampler, seed, i); };
  } else if (kind == "poisson") {
    LevySpec ls;
    ls.p = g.p;
    ls.m0 = cfg.real("levy.m0", 0.0);
    ls.cells = cells_from_text(g.p, cfg.str("levy.cells", "1/2:-2:1.2"), g.precision);
    auto grid = s.grid;
    s.driver = [grid, ls, seed = g.seed](std::uint64_t i) { return poisson_driver(grid, ls, seed, i); };
  } else {
    throw ConfigError("sde.driver must be zero, wiener or poisson");
  }
  return s;
}

int sde_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg, 0, 3, 1);
  auto s = sde_setup(cfg, g);
  bool require = cfg.integer("sde.require_certificate", 1) != 0;
  CsvTable t({"path", "tau", "time", "state", "driver"});
  CsvTable rep({"path", "iterations", "certificate", "observed_ratio", "residual", "left_ball"});
  for (std::size_t path = 0; path < g.samples; ++path) {
    auto w = s.driver(path);
    SdeSolution sol;
    try {
      sol = solve_sde(s.spec, s.grid, s.xi0, w, 200, require);
    } catch (const NoContraction& e) {
      rep.row({std::to_string(path), "0", "", "", "", ""});
      run.table("report", rep);
      throw CertificateFailure(e.what());
    }
    for (std::size_t tau = 0; tau < s.grid.size(); ++tau)
      t.row({std::to_string(path), std::to_string(tau), literal(s.grid.time(tau)), literal(sol.states[tau]),
             literal(w.at(tau))});
    rep.row({std::to_string(path), std::to_string(sol.iterations), num(sol.certificate), num(sol.observed_ratio),
             num(sol.residual), sol.left_ball ? "1" : "0"});
  }
  run.table("", t);
  run.table("report", rep);
  return 0;
}

PolyMap polymap_1d(Config& cfg, const std::string& key, const std::string& fallback, const Globals& g) {
  return {poly_from_coeffs(g.p, 1, 0, padic_list(g.p, cfg.str(key, fallback), g.precision), g.precision)};
}

int cocycle_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg);
  auto phi = polymap_1d(cfg, "cocycle.phi", "0,2,1", g);
  auto psi = polymap_1d(cfg, "cocycle.psi", "1,0,3", g);
  auto xs = padic_list(g.p, cfg.str("cocycle.x", "0,1,2,7"), g.precision);
  auto h = padic_value(g.p, cfg.str("cocycle.h", std::to_string(g.p * g.p)), g.precision);
  double tol = std::pow(static_cast<double>(g.p), -g.precision / 2.0);
  CsvTable t({"x", "cocycle_gap", "first_order_gap", "sum_gap", "higher_order"});
  bool ok = true;
  for (const auto& x : xs) {
    double gap = cocycle_gap(phi, psi, {x});
    auto js = j_series_check(phi, {x}, {h});
    t.row({literal(x), num(gap), num(js.first_order_gap), num(js.sum_gap), num(js.higher_order)});
    ok = ok && gap <= tol && js.first_order_gap <= tol && js.sum_gap <= tol;
  }
  run.table("", t);
  run.note("tolerance", num(tol));
  if (!ok) throw CertificateFailure("cocycle or series gap above p^(-W/2)");
  return 0;
}

int evolution_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg, 0, 3, 100);
  auto s = sde_setup(cfg, g);
  auto scale = padic_value(g.p, cfg.str("evolution.scale", std::to_string(g.p)), g.precision);
  auto atlas = affine_atlas(ChristoffelField(g.p, 1, g.precision), Ball(PAdicNumber::from_int(g.p, 0, g.precision), 0),
                            {{scale}}, {PAdicNumber::from_int(g.p, 0, g.precision)});
  EvolutionFamily fam(s.spec, atlas, s.grid);
  auto rep = evolution_check(fam, s.spec, s.xi0, s.driver, g.samples, g.workers);
  double tol = std::pow(static_cast<double>(g.p), -g.precision / 2.0);
  CsvTable t({"paths", "escaped", "escape_fraction", "evolution_gap", "glue_gap", "flow_gap", "tolerance"});
  t.row({std::to_string(rep.paths), std::to_string(rep.escaped), num(rep.escape_fraction), num(rep.evolution_gap),
         num(rep.glue_gap), num(rep.flow_gap), num(tol)});
  run.table("", t);
  if (std::max({rep.evolution_gap, rep.glue_gap, rep.flow_gap}) > tol)
    throw CertificateFailure("evolution identities above p^(-W/2)");
  return 0;
}

int acceptance_cmd(Run& run) {
  auto& cfg = run.config();
  acceptance::Options opt;
  opt.seed = static_cast<std::uint64_t>(cfg.integer("seed", static_cast<long long>(opt.seed)));
  auto w = cfg.integer("workers", 1);
  if (w < 1 || w > 256) throw ConfigError("workers must lie in [1, 256]");
  opt.workers = static_cast<unsigned>(w);
  auto outcomes = acceptance::run_all(opt);
  bool all = true;
  for (const auto& o : outcomes) {
    std::cout << o.line() << '\n';
    all = all && o.pass();
  }
  std::ofstream os(run.out_dir() / "acceptance.csv", std::ios::binary);
  acceptance::write_csv(os, outcomes);
  os.close();
  run.record_artifact("acceptance.csv");
  if (!all) throw CertificateFailure("acceptance criteria failed");
  return 0;
}

}  // namespace

void register_geometry(std::map<std::string, Command>& m) {
  m["geodesic"] = geodesic_cmd;
  m["exp-map"] = exp_map_cmd;
  m["sde-solve"] = sde_cmd;
  m["cocycle-check"] = cocycle_cmd;
  m["evolution"] = evolution_cmd;
  m["acceptance"] = acceptance_cmd;
}

}  // namespace padic_cli
