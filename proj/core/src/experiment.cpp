#include "mscale/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "mscale/errors.hpp"
#include "mscale/sampling.hpp"
#include "mscale/version.hpp"

namespace mscale {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Metric evaluation walks fixed-size slices so its reduction order never
// depends on the point count split or the worker count.
constexpr int kEvalChunk = 2048;

double param_norm(const std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

double batched_sse_vs(const Network& net, Workspace& ws, const double* pts,
                      int count, int dim, const ScalarField& ref,
                      std::vector<double>& vals) {
  double sse = 0.0;
  for (int lo = 0; lo < count; lo += kEvalChunk) {
    int m = count - lo < kEvalChunk ? count - lo : kEvalChunk;
    vals.resize(m);
    const double* X = pts + static_cast<std::size_t>(lo) * dim;
    forward_batch(net, X, m, EvalMode::Value, ws, vals.data(), nullptr, nullptr);
    for (int i = 0; i < m; ++i) {
      std::span<const double> x(X + static_cast<std::size_t>(i) * dim, dim);
      double e = vals[i] - ref.value(x);
      sse += e * e;
    }
  }
  return sse;
}

double batched_sse_labels(const Network& net, Workspace& ws, const double* pts,
                          const double* labels, int count, int dim,
                          std::vector<double>& vals) {
  double sse = 0.0;
  for (int lo = 0; lo < count; lo += kEvalChunk) {
    int m = count - lo < kEvalChunk ? count - lo : kEvalChunk;
    vals.resize(m);
    forward_batch(net, pts + static_cast<std::size_t>(lo) * dim, m,
                  EvalMode::Value, ws, vals.data(), nullptr, nullptr);
    for (int i = 0; i < m; ++i) {
      double e = vals[i] - labels[lo + i];
      sse += e * e;
    }
  }
  return sse;
}

void check_finite(double loss, std::int64_t epoch, const Network& net) {
  if (std::isfinite(loss)) return;
  std::ostringstream msg;
  msg << "training diverged: non-finite loss at epoch " << epoch
      << " (parameter norm " << param_norm(net.params) << ")";
  throw RunDiverged(msg.str(), epoch, param_norm(net.params));
}

RunRecord run_fit(const ExperimentConfig& cfg, const EpochCallback& on_epoch) {
  Box domain = config_domain(cfg);
  Pcg32 data_rng = make_stream(cfg.seed, SubStream::Data);
  Dataset train = make_dataset(cfg.target, cfg.train_size, domain, data_rng, "train");
  Dataset test;
  if (cfg.test_size > 0)
    test = make_dataset(cfg.target, cfg.test_size, domain, data_rng, "test");

  NetworkSpec spec{cfg.widths, cfg.activation, cfg.scale_parts, cfg.scale_list,
                   cfg.init};
  Network net = make_network(spec, cfg.seed);
  AdamState adam = make_adam_state(net.param_count(), cfg.beta1, cfg.beta2,
                                   cfg.adam_eps);
  LrSchedule sched{cfg.lr0, cfg.lr_decay, cfg.decay_kind};
  Objective obj{LossKind::Mse, nullptr, 0.0};

  Pcg32 shuffle_rng = make_stream(cfg.seed, SubStream::Shuffle);
  Batcher batcher(cfg.train_size, cfg.batch_size);
  int dim = train.dim;
  std::vector<double> bx(static_cast<std::size_t>(cfg.batch_size) * dim);
  std::vector<double> by(static_cast<std::size_t>(cfg.batch_size));
  std::vector<double> grad, vals;
  Workspace ws, eval_ws;

  RunRecord rec;
  rec.name = cfg.name;
  rec.rows.reserve(static_cast<std::size_t>(cfg.epochs));
  for (std::int64_t e = 1; e <= cfg.epochs; ++e) {
    auto t0 = std::chrono::steady_clock::now();
    batcher.start_epoch(shuffle_rng);
    const int* idx = nullptr;
    int m = 0;
    double loss_sum = 0.0;
    int nb = 0;
    double lr = kNaN;
    while (batcher.next(&idx, &m)) {
      gather_rows(train.inputs.data(), dim, idx, m, bx.data());
      for (int r = 0; r < m; ++r) by[r] = train.labels[idx[r]];
      TrainBatch batch;
      batch.dim = dim;
      batch.inputs = std::span<const double>(bx.data(), static_cast<std::size_t>(m) * dim);
      batch.labels = std::span<const double>(by.data(), static_cast<std::size_t>(m));
      double loss = objective_param_gradient(net, obj, batch, grad, ws);
      check_finite(loss, e, net);
      double used = adam_step(adam, net.params, grad, sched);
      if (nb == 0) lr = used;
      loss_sum += loss;
      ++nb;
    }
    EpochRow row;
    row.epoch = e;
    row.lr = lr;
    row.train_loss = loss_sum / nb;
    if (cfg.test_size > 0)
      row.test_loss = batched_sse_labels(net, eval_ws, test.inputs.data(),
                                         test.labels.data(), cfg.test_size, dim,
                                         vals) /
                      cfg.test_size;
    if (cfg.record_wall_time) {
      auto t1 = std::chrono::steady_clock::now();
      row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    rec.rows.push_back(row);
    if (on_epoch) on_epoch(row);
  }
  return rec;
}

RunRecord run_pde(const ExperimentConfig& cfg, const EpochCallback& on_epoch) {
  Box domain = config_domain(cfg);
  PoissonProblem problem = poisson_sine_problem(cfg.dim);
  problem.domain = domain;
  problem.epsilon = cfg.epsilon;

  NetworkSpec spec{cfg.widths, cfg.activation, cfg.scale_parts, cfg.scale_list,
                   cfg.init};
  Network net = make_network(spec, cfg.seed);
  AdamState adam = make_adam_state(net.param_count(), cfg.beta1, cfg.beta2,
                                   cfg.adam_eps);
  LrSchedule sched{cfg.lr0, cfg.lr_decay, cfg.decay_kind};
  Objective obj{cfg.loss, &problem, cfg.beta};

  Pcg32 interior_rng = make_stream(cfg.seed, SubStream::Interior);
  Pcg32 boundary_rng = make_stream(cfg.seed, SubStream::Boundary);
  std::vector<double> eval_pts;
  if (cfg.metric_mode == MetricMode::Fixed) {
    Pcg32 data_rng = make_stream(cfg.seed, SubStream::Data);
    eval_pts = sample_interior(domain, cfg.eval_size, data_rng);
  }

  const ScalarField* u_true = problem.true_solution.get();
  std::vector<double> grad, vals;
  Workspace ws, eval_ws;

  RunRecord rec;
  rec.name = cfg.name;
  rec.rows.reserve(static_cast<std::size_t>(cfg.epochs));
  for (std::int64_t e = 1; e <= cfg.epochs; ++e) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> interior = sample_interior(domain, cfg.n_interior, interior_rng);
    std::vector<double> boundary = sample_boundary(domain, cfg.n_boundary, boundary_rng);
    TrainBatch batch;
    batch.dim = cfg.dim;
    batch.interior = interior;
    batch.boundary = boundary;
    double loss = objective_param_gradient(net, obj, batch, grad, ws);
    check_finite(loss, e, net);
    double lr = adam_step(adam, net.params, grad, sched);

    EpochRow row;
    row.epoch = e;
    row.lr = lr;
    row.train_loss = loss;
    if (u_true) {
      if (cfg.metric_mode == MetricMode::Fixed) {
        row.mse_true = batched_sse_vs(net, eval_ws, eval_pts.data(), cfg.eval_size,
                                      cfg.dim, *u_true, vals) /
                       cfg.eval_size;
      } else {
        double sse = batched_sse_vs(net, eval_ws, interior.data(), cfg.n_interior,
                                    cfg.dim, *u_true, vals);
        int nb = static_cast<int>(boundary.size()) / cfg.dim;
        sse += batched_sse_vs(net, eval_ws, boundary.data(), nb, cfg.dim, *u_true,
                              vals);
        row.mse_true = sse / (cfg.n_interior + nb);
      }
    }
    if (cfg.record_wall_time) {
      auto t1 = std::chrono::steady_clock::now();
      row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    rec.rows.push_back(row);
    if (on_epoch) on_epoch(row);
  }
  return rec;
}

std::string render_cell(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

EpochRow::EpochRow()
    : test_loss(kNaN), mse_true(kNaN), wall_ms(kNaN) {}

RunRecord run_experiment(const ExperimentConfig& raw, const EpochCallback& on_epoch) {
  ExperimentConfig cfg = raw;
  validate_config(cfg);
  set_worker_count(cfg.threads);
  RunRecord rec = cfg.task == TaskKind::Fit ? run_fit(cfg, on_epoch)
                                            : run_pde(cfg, on_epoch);
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  emit_csv(rec, (dir / (cfg.name + ".csv")).string());
  write_run_metadata(cfg, (dir / (cfg.name + ".meta")).string());
  return rec;
}

void emit_csv(const RunRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write csv '" + path + "'");
  out << "epoch,lr,train_loss,test_loss,mse_true,wall_ms\n";
  for (const EpochRow& r : record.rows) {
    out << r.epoch << ',' << render_cell(r.lr) << ',' << render_cell(r.train_loss)
        << ',' << render_cell(r.test_loss) << ',' << render_cell(r.mse_true)
        << ',' << render_cell(r.wall_ms) << '\n';
  }
  if (!out) throw ConfigError("write failure on csv '" + path + "'");
}

RunRecord parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read csv '" + path + "'");
  RunRecord rec;
  rec.name = std::filesystem::path(path).stem().string();
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("csv '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "epoch,lr,train_loss,test_loss,mse_true,wall_ms")
    throw ConfigError("csv '" + path + "' has an unexpected header");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (cells.size() != 6)
      throw ConfigError("csv '" + path + "' has a malformed row");
    auto cell = [&](int i) -> double {
      if (cells[i].empty()) return kNaN;
      return std::strtod(cells[i].c_str(), nullptr);
    };
    EpochRow row;
    row.epoch = std::strtoll(cells[0].c_str(), nullptr, 10);
    row.lr = cell(1);
    row.train_loss = cell(2);
    row.test_loss = cell(3);
    row.mse_true = cell(4);
    row.wall_ms = cell(5);
    rec.rows.push_back(row);
  }
  return rec;
}

void write_run_metadata(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write metadata '" + path + "'");
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  out << "artifact_version = " << kArtifactVersion << "\n";
  out << "generator = " << kGeneratorName << " v" << kGeneratorVersion << "\n";
  out << "config_hash = " << hash << "\n";
  out << "\n" << dump_config(cfg);
  if (!out) throw ConfigError("write failure on metadata '" + path + "'");
}

}  // namespace mscale
