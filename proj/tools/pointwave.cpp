#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pointwave/cli.hpp"
#include "pointwave/config.hpp"

namespace {

enum Exit { ok = 0, tolerance = 1, config = 2, lightcone = 3, runtime = 4 };

int run(const std::string& command, const std::string& path, bool override_lightcone) {
  using namespace pointwave;
  try {
    const RunConfig cfg = load_config(path);
    const auto res = cli::execute(command, cfg, override_lightcone);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : res.files) std::cout << "wrote " << f << "\n";
    const auto bad = res.failures();
    for (const auto& c : bad)
      std::cerr << "tolerance failure: invariant '" << c.check << "' at alpha = " << cli::num(c.alpha)
                << ": observed " << cli::num(c.observed) << " > " << cli::num(c.tolerance) << "\n";
    std::cout << res.checks.size() - bad.size() << " of " << res.checks.size() << " checks pass\n";
    return bad.empty() ? ok : tolerance;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config;
  } catch (const cli::LightconeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lightcone;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return runtime;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointwave: waves with a point interaction at the origin"};
  app.require_subcommand(1);
  std::string path;
  bool override_lightcone = false;
  std::string chosen;
  for (const char* name : {"evolve", "verify", "scatter", "spectrum"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", path, "run configuration")->required();
    sub->add_flag("--override-lightcone", override_lightcone, "run past the truncation light cone with a warning");
    sub->callback([&chosen, name] { chosen = name; });
  }
  CLI11_PARSE(app, argc, argv);
  return run(chosen, path, override_lightcone);
}
