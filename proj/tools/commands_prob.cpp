#include "commands.hpp"

#include <padic/rng.hpp>

namespace padic_cli {

namespace {

int gauss_density_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg);
  auto spec = qgauss_spec(cfg, "gauss", g);
  GridFunction rho;
  try {
    rho = density(spec);
  } catch (const DegenerateCovariance& e) {
    throw ConfigError(std::string("gauss.b: ") + e.what());
  }
  CsvTable t({"index", "norm", "density"});
  for (std::size_t i = 0; i < rho.size(); ++i) t.row({std::to_string(i), num(rho.norm_at(i)), num(rho[i].real())});
  run.table("", t);
  run.note("mass", num(haar_integral(rho).real()));
  return 0;
}

int gauss_moments_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg);
  auto spec = qgauss_spec(cfg, "gauss", g);
  auto idx = cfg.integers("gauss.indices", {0, 0});
  auto Ls = cfg.integers("gauss.l", {0, g.M});
  for (auto L : Ls)
    if (L > g.M) throw ConfigError("gauss.l may not exceed level_m");
  std::vector<int> indices;
  for (auto i : idx) {
    if (i < 0 || i >= spec.dim()) throw ConfigError("gauss.indices out of range");
    indices.push_back(static_cast<int>(i));
  }
  if (indices.size() % 2) throw ConfigError("gauss.indices needs an even count");
  double wick = moment_wick(spec.B, indices);
  CsvTable t({"L", "moment_numeric", "moment_wick", "trace_sum"});
  for (auto L : Ls)
    t.row({std::to_string(L), num(moment_numeric(spec, indices, static_cast<int>(L)).value), num(wick),
           num(trace_sum(spec, static_cast<int>(L)))});
  run.table("", t);
  return 0;
}

int wiener_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg, 2, 3, 4);
  auto spec = qgauss_spec(cfg, "gauss", g);
  auto times = cfg.reals("wiener.times", {0.0, 0.25, 0.5, 0.75, 1.0});
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ConfigError("wiener.times must increase");
  WienerSampler ws(spec);
  std::vector<std::string> header{"path", "t"};
  for (int k = 0; k < spec.dim(); ++k) header.push_back("x" + std::to_string(k));
  CsvTable t(header);
  for (std::size_t path = 0; path < g.samples; ++path) {
    auto ps = ws.path(times, g.seed, path);
    for (std::size_t j = 0; j < ps.times.size(); ++j) {
      std::vector<std::string> row{std::to_string(path), num(ps.times[j])};
      for (auto a : ps.states[j]) row.push_back(literal(ws.lattice().to_padic(a)));
      t.row(row);
    }
  }
  run.table("", t);
  return 0;
}

int ito_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg, 4, 4, 20000);
  auto spec = qgauss_spec(cfg, "gauss", g);
  if (spec.dim() != 1) throw ConfigError("ito-check needs a 1-d gauss.b");
  auto parts = cfg.integers("ito.partitions", {16, 32, 64});
  double a = cfg.real("ito.a", 0.0), b = cfg.real("ito.b", 1.0);
  if (!(b > a)) throw ConfigError("ito.b must exceed ito.a");
  std::vector<int> ps;
  for (auto n : parts) ps.push_back(static_cast<int>(n));
  for (int n : ps)
    if (n < 1 || ps.back() % n) throw ConfigError("ito.partitions must divide the largest one");
  // integrands 1 and t
  std::vector<std::function<double(double)>> phis{[](double) { return 1.0; }, [](double t) { return t; }};
  std::vector<double> ints{b - a, (b * b - a * a) / 2};
  auto rep = ito_check(spec, a, b, ps, phis, ints, g.samples, g.seed, g.workers);
  CsvTable t({"partition", "integrand", "integral", "mean", "se", "ratio", "ratio_se"});
  const char* names[] = {"1", "t"};
  for (const auto& r : rep.rows)
    t.row({std::to_string(r.partition), names[r.integrand], num(r.integral), num(r.mean), num(r.se), num(r.ratio),
           num(r.ratio_se)});
  run.table("", t);
  return 0;
}

const char* kDefaultCells = "0:-2:0.3; 1:-2:0.7; 2:-2:1.1; 3:-2:0.5";

int poisson_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg, 3, 3, 100000);
  auto cells = cells_from_text(g.p, cfg.str("poisson.cells", kDefaultCells), g.precision);
  IntensitySpec spec(g.p, cells);
  int cap = static_cast<int>(cfg.integer("poisson.cap", 3));
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < cells.size(); ++i) groups.push_back({static_cast<int>(i)});
  auto chi = count_chi_square(spec, groups, g.samples, g.seed, cap);
  CsvTable t({"statistic", "dof", "p_value", "bins", "samples"});
  t.row({num(chi.statistic), std::to_string(chi.dof), num(chi.p_value), std::to_string(chi.bins),
         std::to_string(g.samples)});
  run.table("", t);

  // P(card = n) for n = 0, 1, cell by cell
  CsvTable law({"cell", "count", "empirical", "se", "expected", "z"});
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto rows = count_law_check(spec, {{static_cast<int>(i)}}, {{0}, {1}}, g.samples, mix_seed(g.seed, 1 + i));
    for (const auto& r : rows)
      law.row({std::to_string(i), std::to_string(r.targets[0]), num(r.empirical), num(r.se), num(r.expected),
               num(r.z)});
  }
  run.table("law", law);
  return 0;
}

int levy_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg, 3, 3, 100000);
  LevySpec s;
  s.p = g.p;
  s.m0 = cfg.real("levy.m0", 0.4);
  s.cells = cells_from_text(g.p, cfg.str("levy.cells", "1/2:-2:1.2"), g.precision);
  s.a = cfg.real("levy.a", 2.0);
  s.pi0.k = cfg.integer("levy.character", 0);
  for (const auto& c : s.cells)
    if (c.ball.contains(PAdicNumber::from_int(g.p, 0, g.precision)))
      throw ConfigError("levy.cells: a cell contains 0");
  double t = cfg.real("levy.t", 1.0);
  if (!(t >= 0)) throw ConfigError("levy.t must be nonnegative");
  auto rhos = cfg.reals("levy.rho", {0.5, 1.0, 2.0});
  auto rows = levy_laplace_check(s, t, rhos, g.samples, g.seed, g.workers);
  CsvTable tab({"rho", "empirical", "se", "exact", "z", "psi"});
  for (const auto& r : rows)
    tab.row({num(r.rho), num(r.empirical), num(r.se), num(r.exact), num(r.z), num(levy_exponent(s, r.rho))});
  run.table("", tab);
  return 0;
}

}  // namespace

void register_probability(std::map<std::string, Command>& m) {
  m["gauss-density"] = gauss_density_cmd;
  m["gauss-moments"] = gauss_moments_cmd;
  m["wiener"] = wiener_cmd;
  m["ito-check"] = ito_cmd;
  m["poisson-counts"] = poisson_cmd;
  m["levy-laplace"] = levy_cmd;
}

}  // namespace padic_cli
