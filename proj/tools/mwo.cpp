// mwo: run, validate and plot scenario configs.
#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "mwo/cli/config.hpp"
#include "mwo/cli/plot.hpp"
#include "mwo/cli/runner.hpp"
#include "mwo/error.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

template <class F>
int guarded(F&& f) {
  try {
    f();
    return kOk;
  } catch (const mwo::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const mwo::PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const mwo::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matter-wave optics scenario runner"};
  app.set_version_flag("--version", mwo::cli::tool_version());
  app.require_subcommand(1);

  std::string config_path, manifest_path, figure, out_dir;
  int workers = 1;
  long long seed = 0;

  auto* run = app.add_subcommand("run", "run a scenario config and write CSVs plus manifest.json");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides [output] dir)");
  run->add_option("--workers", workers, "worker threads across sweep points")->check(CLI::Range(1, 1024));
  auto* seed_opt = run->add_option("--seed", seed, "reserved, recorded in the manifest");

  auto* validate = app.add_subcommand("validate", "parse and validate a config without running it");
  validate->add_option("config", config_path, "config file")->required();

  auto* plot = app.add_subcommand("plot", "render fig1 or fig2 from a manifest as SVG");
  plot->add_option("manifest", manifest_path, "manifest.json from a run")->required();
  plot->add_option("figure", figure, "fig1 or fig2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (*run)
    return guarded([&] {
      const auto cfg = mwo::cli::load_config(config_path);
      mwo::cli::RunOptions opt;
      if (!out_dir.empty()) opt.out_dir = out_dir;
      opt.workers = workers;
      if (seed_opt->count() > 0) opt.seed = seed;
      const auto manifest = mwo::cli::run(cfg, opt);
      std::cout << "wrote " << manifest["outputs"].size() << " files for " << cfg.name << "\n";
      for (const auto& w : manifest["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    });
  if (*validate)
    return guarded([&] {
      const auto cfg = mwo::cli::load_config(config_path);
      std::cout << "ok: " << mwo::cli::kind_name(cfg.kind) << " scenario '" << cfg.name << "', " << cfg.points.size()
                << (cfg.points.size() == 1 ? " point\n" : " points\n");
    });
  return guarded([&] {
    const auto out = mwo::cli::plot(manifest_path, figure);
    std::cout << "wrote " << out << "\n";
  });
}
