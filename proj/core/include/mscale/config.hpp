#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mscale/adam.hpp"
#include "mscale/network.hpp"
#include "mscale/objective.hpp"
#include "mscale/targets.hpp"

namespace mscale {

enum class TaskKind { Fit, Pde };
enum class MetricMode { Fixed, StepSample };

/// One experiment, fully determined. Produced by load_config; every field is
/// validated there, so downstream code can trust it.
struct ExperimentConfig {
  std::string name;  // output file stem

  TaskKind task = TaskKind::Fit;
  LossKind loss = LossKind::Mse;

  // network
  std::vector<int> widths;
  Activation activation = Activation::Srelu;
  int scale_parts = 1;
  std::vector<double> scale_list;
  InitScheme init = InitScheme::D1;

  // optimizer
  double lr0 = 1e-3;
  double lr_decay = 0.0;
  DecayKind decay_kind = DecayKind::InverseTime;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;

  // fit data
  FitTarget target;
  int train_size = 0;
  int test_size = 0;
  int batch_size = 0;  // 0 means full batch

  // pde data
  int dim = 0;
  int n_interior = 0;
  int n_boundary = 0;  // per face
  double beta = 0.0;
  double epsilon = 1.0;

  // domain override; NaN bounds mean "use the task's default box"
  double domain_lo = 0.0, domain_hi = 0.0;
  bool domain_set = false;

  // evaluation
  MetricMode metric_mode = MetricMode::Fixed;
  int eval_size = 0;  // 0 means 10 * n_interior

  std::int64_t epochs = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  bool record_wall_time = true;
  std::string out_dir = ".";
};

/// Flat `key = value` text; '#' starts a comment; unknown, duplicate, or
/// malformed keys are errors naming the key; seed is mandatory.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

/// Defaults, cross-field rules (task/loss compatibility, widths vs target
/// dimension, schedule positivity), and derived fields.
void validate_config(ExperimentConfig& cfg);

/// Canonical `key = value` rendering of the effective config; equal configs
/// render identically.
std::string dump_config(const ExperimentConfig& cfg);

/// FNV-1a 64 over dump_config.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Sampling box for the run (domain override or task default).
Box config_domain(const ExperimentConfig& cfg);

const char* task_name(TaskKind t);
const char* metric_mode_name(MetricMode m);

}  // namespace mscale
