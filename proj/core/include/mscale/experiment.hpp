#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mscale/config.hpp"

namespace mscale {

/// One CSV row. NaN marks an empty cell (metric not applicable).
struct EpochRow {
  std::int64_t epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double test_loss;
  double mse_true;
  double wall_ms;

  EpochRow();
};

struct RunRecord {
  std::string name;
  std::vector<EpochRow> rows;
};

/// Called after each completed epoch, before anything is written to disk.
using EpochCallback = std::function<void(const EpochRow&)>;

/// Runs the experiment and writes <name>.csv and <name>.meta into
/// cfg.out_dir. Deterministic for a fixed config and seed, whatever the
/// thread count. A non-finite loss aborts with RunDiverged carrying the epoch
/// and the parameter norm.
RunRecord run_experiment(const ExperimentConfig& cfg,
                         const EpochCallback& on_epoch = {});

/// Header `epoch,lr,train_loss,test_loss,mse_true,wall_ms`, 9 significant
/// digits, LF endings, empty cells for NaN.
void emit_csv(const RunRecord& record, const std::string& path);

/// Inverse of emit_csv up to the 9-digit rendering; record name = file stem.
RunRecord parse_csv(const std::string& path);

/// Writes artifact version, generator name/version, and the config hash,
/// then the canonical config dump.
void write_run_metadata(const ExperimentConfig& cfg, const std::string& path);

}  // namespace mscale
