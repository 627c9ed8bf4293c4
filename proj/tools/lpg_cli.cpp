// lpg: run configured experiments, list them, and emit plot data.
//
//   lpg run <config.json>        exit 0 pass, 1 invariant failure, 2 config error
//   lpg list
//   lpg plot-data <manifest.json>
//
// LPG_THREADS sets the worker-pool size.

#include <CLI11.hpp>
#include <iostream>

#include "lpg/error.hpp"
#include "lpg/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvariant = 1;
constexpr int kConfig = 2;

int cmd_run(const std::string& path) {
  const auto config = lpg::load_config(path);
  const auto manifest = lpg::run(config);
  for (const auto& o : manifest.outcomes)
    std::cout << (o.passed ? "PASS " : "FAIL ") << o.name << ": " << o.summary << '\n';
  std::cout << "outputs in " << config.output_dir << " (" << manifest.outputs.size() << " files)\n";
  return manifest.passed() ? kOk : kInvariant;
}

int cmd_list() {
  for (const auto& e : lpg::list_experiments()) std::cout << e.name << "  " << e.reference << '\n';
  return kOk;
}

int cmd_plot(const std::string& path) {
  for (const auto& f : lpg::emit_plot_data(path)) std::cout << f.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Littlewood-Paley and Besov experiments on graded groups"};
  app.require_subcommand(1);
  std::string config_path, manifest_path;
  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  run->add_option("config", config_path, "config file")->required();
  auto* list = app.add_subcommand("list", "list experiments");
  auto* plot = app.add_subcommand("plot-data", "write (x, y) data files for slope plots");
  plot->add_option("manifest", manifest_path, "manifest.json of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*list) return cmd_list();
    if (*plot) return cmd_plot(manifest_path);
  } catch (const lpg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariant;
  }
  return kOk;
}
