#include "commands.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>

using namespace padic_cli;

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> sets;
  std::optional<long long> p, precision, level_m, level_n, seed, samples, workers;
  std::optional<std::string> out;
  std::optional<std::string> u, t;  // gamma.u, heat.t
};

void add_flags(CLI::App* sub, Flags& f, const std::string& name) {
  sub->add_option("--config", f.config, "key = value config file with [section] headers");
  sub->add_option("--set", f.sets, "override, section.key=value (repeatable)");
  sub->add_option("--p", f.p, "prime");
  sub->add_option("--precision", f.precision, "working precision W in digits");
  sub->add_option("--level-m", f.level_m, "support level M");
  sub->add_option("--level-n", f.level_n, "resolution level N");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--samples", f.samples, "sample or path count");
  sub->add_option("--workers", f.workers, "worker threads");
  sub->add_option("--out", f.out, "output directory");
  if (name == "gamma") sub->add_option("--u", f.u, "comma separated exponents");
  if (name == "heat") sub->add_option("--t", f.t, "comma separated times");
}

Config resolve(const Flags& f) {
  Config cfg = f.config.empty() ? Config{} : Config::parse_file(f.config);
  for (const auto& s : f.sets) cfg.set_assignment(s);
  auto put = [&](const char* key, const std::optional<long long>& v) {
    if (v) cfg.set(key, std::to_string(*v));
  };
  put("p", f.p);
  put("precision", f.precision);
  put("level_m", f.level_m);
  put("level_n", f.level_n);
  put("seed", f.seed);
  put("samples", f.samples);
  put("workers", f.workers);
  if (f.out) cfg.set("out", *f.out);
  if (f.u) cfg.set("gamma.u", *f.u);
  if (f.t) cfg.set("heat.t", *f.t);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic analysis and stochastic toolkit"};
  app.require_subcommand(1);
  std::map<std::string, Flags> flags;
  for (const auto& [name, cmd] : commands()) add_flags(app.add_subcommand(name), flags[name], name);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  auto* sub = app.get_subcommands().front();
  const auto name = sub->get_name();

  std::optional<Config> cfg;
  std::optional<Run> run;
  try {
    cfg = resolve(flags[name]);
    run.emplace(name, *cfg);
    int rc = commands().at(name)(*run);
    auto unused = cfg->unused();
    if (!unused.empty()) throw ConfigError("unknown key '" + unused.front() + "' for " + name);
    run->finish("ok");
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    if (run) run->finish("config_error");
    return 2;
  } catch (const CertificateFailure& e) {
    std::cerr << "certificate failure: " << e.what() << '\n';
    if (run) run->finish("certificate_failure");
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    if (run) run->finish("error");
    return 1;
  }
}
