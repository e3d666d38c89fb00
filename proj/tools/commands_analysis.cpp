#include "commands.hpp"

#include "support/oracles.hpp"

#include <padic/gamma.hpp>
#include <padic/rng.hpp>

#include <random>

namespace padic_cli {

namespace {

int gamma_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg);
  auto us = cfg.reals("gamma.u", {2.0});
  CsvTable t({"p", "u", "value_re", "value_im", "oracle_re", "oracle_im", "oracle_delta"});
  for (double u : us) {
    std::complex<double> v;
    try {
      v = gamma_K(g.p, u);
    } catch (const PoleError& e) {
      throw ConfigError("gamma.u = " + num(u) + ": " + e.what());
    }
    auto o = oracle::gamma_truncated(g.p, u);
    t.row({std::to_string(g.p), num(u), num(v.real()), num(v.imag()), num(o.real()), num(o.imag()),
           num(std::abs(v - o))});
  }
  run.table("", t);
  return 0;
}

int fourier_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg, 2, 2);
  int d = static_cast<int>(cfg.integer("fourier.d", 1));
  if (d < 1 || d > 3) throw ConfigError("fourier.d must lie in [1, 3]");
  auto us = cfg.reals("fourier.u", {0.5, 1.0, 2.0});
  double tol = cfg.real("fourier.tolerance", 1e-12);

  GridFunction f(g.p, d, g.M, g.N);
  auto rng = make_stream(g.seed, 0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = {unif(rng), unif(rng)};
  auto F = fourier(f);
  double inversion = max_abs_diff(fourier(F, true), f);
  double parseval = std::abs(l2_norm(F) - l2_norm(f)) / l2_norm(f);

  CsvTable checks({"check", "value", "limit", "pass"});
  bool ok = true;
  auto add = [&](const std::string& name, double v, double lim) {
    checks.row({name, num(v), num(lim), v <= lim ? "1" : "0"});
    ok = ok && v <= lim;
  };
  add("inversion", inversion, tol);
  add("parseval", parseval, tol);

  CsvTable power({"u", "worst_rel", "safe_radii"});
  for (double u : us) {
    auto r = oracle::fourier_power_check(g.p, g.M, g.N, u);
    power.row({num(u), num(r.worst), std::to_string(r.radii)});
    if (r.radii > 0) add("power_law_u=" + num(u), r.worst, 0.01);
  }
  run.table("checks", checks);
  run.table("power_law", power);
  if (!ok) throw CertificateFailure("fourier checks out of tolerance");
  return 0;
}

int vladimirov_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg, 4, 4);
  auto ns = cfg.integers("vladimirov.n", {1, 2});
  auto us = cfg.reals("vladimirov.u", {0.5, 1.0});
  CsvTable eigen({"n", "u", "worst_rel", "safe_radii"});
  CsvTable apply({"n", "u", "index", "norm", "re", "im"});
  bool ok = true;
  for (auto n : ns)
    for (double u : us) {
      if (n < 0) throw ConfigError("vladimirov.n must be nonnegative");
      auto r = oracle::vladimirov_eigen_check(g.p, g.M, g.N, static_cast<int>(n), u);
      eigen.row({std::to_string(n), num(u), num(r.worst), std::to_string(r.radii)});
      ok = ok && (r.radii == 0 || r.worst <= 0.01);
      GridFunction f(g.p, 1, g.M, g.N);
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(f.axis_norm(i), static_cast<double>(n));
      auto Df = vladimirov_apply(f, u, 0);
      for (std::size_t i = 0; i < Df.size(); ++i)
        apply.row({std::to_string(n), num(u), std::to_string(i), num(Df.norm_at(i)), num(Df[i].real()),
                   num(Df[i].imag())});
    }
  run.table("eigen", eigen);
  run.table("apply", apply);
  if (!ok) throw CertificateFailure("eigenrelation outside 1% on the safe region");
  return 0;
}

int heat_cmd(Run& run) {
  auto& cfg = run.config();
  auto g = globals(cfg, 5, 2);
  int d = static_cast<int>(cfg.integer("heat.d", 1));
  if (d < 1 || d > 3) throw ConfigError("heat.d must lie in [1, 3]");
  auto symbol = symbol_from_text(d, cfg.str("heat.symbol", d == 1 ? "0,0:1" : "0,0:1;1,1:1"));
  auto ts = cfg.reals("heat.t", {0.1, 0.2});

  auto cert = symbol.certify();
  CsvTable report({"t", "mass", "mass_deficit", "min_symbol", "elliptic"});
  CsvTable dens({"t", "index", "norm", "re", "im"});
  std::string failure;
  for (double t : ts) {
    if (!(t > 0)) throw ConfigError("heat.t must be positive");
    HeatMeasureSpec spec{t, symbol, g.p, g.M, g.N};
    double deficit = cert.elliptic ? heat_mass_deficit(spec) : 0.0;
    double mass = 0.0;
    try {
      auto rho = heat_measure(spec);
      mass = haar_integral(rho).real();
      for (std::size_t i = 0; i < rho.size(); ++i)
        dens.row({num(t), std::to_string(i), num(rho.norm_at(i)), num(rho[i].real()), num(rho[i].imag())});
    } catch (const NotElliptic& e) {
      failure = e.what();
    } catch (const MassDeficit& e) {
      failure = e.what();
    }
    report.row({num(t), num(mass), num(deficit), num(cert.min_symbol), cert.elliptic ? "1" : "0"});
  }
  run.table("report", report);
  run.table("density", dens);
  if (!failure.empty()) throw CertificateFailure(failure);
  return 0;
}

}  // namespace

void register_analysis(std::map<std::string, Command>& m) {
  m["gamma"] = gamma_cmd;
  m["fourier-check"] = fourier_cmd;
  m["vladimirov"] = vladimirov_cmd;
  m["heat"] = heat_cmd;
}

}  // namespace padic_cli
