#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mscale/config.hpp"
#include "mscale/errors.hpp"
#include "mscale/experiment.hpp"
#include "mscale/selfcheck.hpp"
#include "mscale/svg_plot.hpp"

namespace {

int cmd_run(const std::string& config_path, std::uint64_t seed, bool seed_set,
            const std::string& out_dir, std::int64_t epochs, bool quiet) {
  mscale::ExperimentConfig cfg = mscale::load_config(config_path);
  if (seed_set) cfg.seed = seed;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (epochs >= 0) cfg.epochs = epochs;

  std::int64_t every = cfg.epochs > 20 ? cfg.epochs / 20 : 1;
  mscale::EpochCallback progress;
  if (!quiet) {
    progress = [&](const mscale::EpochRow& row) {
      if (row.epoch % every != 0 && row.epoch != cfg.epochs) return;
      std::fprintf(stderr, "epoch %lld  lr %.3e  train_loss %.6e",
                   static_cast<long long>(row.epoch), row.lr, row.train_loss);
      if (!std::isnan(row.test_loss))
        std::fprintf(stderr, "  test_loss %.6e", row.test_loss);
      if (!std::isnan(row.mse_true))
        std::fprintf(stderr, "  mse_true %.6e", row.mse_true);
      std::fprintf(stderr, "\n");
    };
  }

  mscale::RunRecord rec = mscale::run_experiment(cfg, progress);
  std::printf("wrote %s/%s.csv (%zu epochs)\n", cfg.out_dir.c_str(),
              rec.name.c_str(), rec.rows.size());
  return 0;
}

int cmd_plot(const std::string& out_path, const std::vector<std::string>& csvs) {
  std::vector<mscale::RunRecord> records;
  records.reserve(csvs.size());
  for (const std::string& path : csvs) records.push_back(mscale::parse_csv(path));
  mscale::emit_svg_plot(records, out_path);
  std::printf("wrote %s (%zu series)\n", out_path.c_str(), records.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-scale network training runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::int64_t epochs = -1;
  bool quiet = false;
  CLI::App* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("--config", config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out_dir, "override the output directory");
  run->add_option("--epochs", epochs, "override the epoch count");
  run->add_flag("--quiet", quiet, "suppress progress lines");

  std::string plot_out;
  std::vector<std::string> csvs;
  CLI::App* plot = app.add_subcommand("plot", "Render metric CSVs as an SVG chart");
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("csv", csvs, "metric CSV files")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* check =
      app.add_subcommand("check", "Run finite-difference and oracle self-tests");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, seed, seed_opt->count() > 0, out_dir, epochs,
                     quiet);
    if (plot->parsed()) return cmd_plot(plot_out, csvs);
    if (check->parsed()) {
      int failures = mscale::run_selfchecks(std::cout);
      if (failures == 0) std::printf("all checks passed\n");
      return failures == 0 ? 0 : 1;
    }
  } catch (const mscale::RunDiverged& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
