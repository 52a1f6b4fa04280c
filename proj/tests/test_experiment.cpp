#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mscale/adam.hpp"
#include "mscale/config.hpp"
#include "mscale/errors.hpp"
#include "mscale/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mscale-test-" + std::to_string(std::rand()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this) & 0xffff));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

mscale::ExperimentConfig small_pde(const fs::path& out) {
  mscale::ExperimentConfig cfg = mscale::parse_config(R"(
name = tiny
task = pde
loss = ritz
dim = 2
widths = 2-8-8-1
n = 50
n_tilde = 10
beta = 100
epochs = 30
seed = 11
lr0 = 1e-3
eval_size = 64
record_wall_time = false
)",
                                                      "tiny");
  cfg.out_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("a zero-epoch run still writes header and metadata") {
  TempDir tmp;
  mscale::ExperimentConfig cfg = small_pde(tmp.path);
  cfg.epochs = 0;
  mscale::RunRecord rec = mscale::run_experiment(cfg);
  CHECK(rec.rows.empty());
  CHECK(slurp(tmp.path / "tiny.csv") ==
        "epoch,lr,train_loss,test_loss,mse_true,wall_ms\n");
  std::string meta = slurp(tmp.path / "tiny.meta");
  CHECK(meta.find("config_hash") != std::string::npos);
  CHECK(meta.find("generator") != std::string::npos);
}

TEST_CASE("reruns and thread counts leave the CSV byte-identical") {
  TempDir a, b, c;
  mscale::ExperimentConfig cfg = small_pde(a.path);
  mscale::run_experiment(cfg);

  cfg.out_dir = b.path.string();
  mscale::run_experiment(cfg);
  CHECK(slurp(a.path / "tiny.csv") == slurp(b.path / "tiny.csv"));

  cfg.out_dir = c.path.string();
  cfg.threads = 3;
  mscale::run_experiment(cfg);
  CHECK(slurp(a.path / "tiny.csv") == slurp(c.path / "tiny.csv"));
}

TEST_CASE("the seed changes the trajectory") {
  TempDir a, b;
  mscale::ExperimentConfig cfg = small_pde(a.path);
  cfg.epochs = 5;
  mscale::run_experiment(cfg);
  cfg.out_dir = b.path.string();
  cfg.seed = 12;
  mscale::run_experiment(cfg);
  CHECK(slurp(a.path / "tiny.csv") != slurp(b.path / "tiny.csv"));
}

TEST_CASE("parse_csv inverts emit_csv") {
  TempDir tmp;
  mscale::ExperimentConfig cfg = small_pde(tmp.path);
  cfg.epochs = 7;
  mscale::RunRecord rec = mscale::run_experiment(cfg);
  REQUIRE(rec.rows.size() == 7);

  mscale::RunRecord back = mscale::parse_csv((tmp.path / "tiny.csv").string());
  CHECK(back.name == "tiny");
  REQUIRE(back.rows.size() == rec.rows.size());
  // Cells carry 9 significant digits, so a re-emission is byte-equal.
  mscale::emit_csv(back, (tmp.path / "again.csv").string());
  CHECK(slurp(tmp.path / "again.csv") == slurp(tmp.path / "tiny.csv"));
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    CHECK(back.rows[i].epoch == rec.rows[i].epoch);
    CHECK(back.rows[i].lr ==
          doctest::Approx(rec.rows[i].lr).epsilon(1e-8));
    // wall_ms was disabled, so the cell must be empty on both sides.
    CHECK(std::isnan(back.rows[i].wall_ms));
    CHECK(std::isnan(rec.rows[i].wall_ms));
  }
  CHECK_THROWS_AS(mscale::parse_csv((tmp.path / "missing.csv").string()),
                  mscale::ConfigError);
}

TEST_CASE("the recorded lr follows the schedule") {
  TempDir tmp;
  mscale::ExperimentConfig cfg = small_pde(tmp.path);
  cfg.epochs = 4;
  cfg.lr_decay = 1e-3;
  mscale::RunRecord rec = mscale::run_experiment(cfg);
  mscale::LrSchedule sched{cfg.lr0, cfg.lr_decay, cfg.decay_kind};
  // One optimizer step per epoch here, so row t reports lr_at(t).
  for (std::size_t i = 0; i < rec.rows.size(); ++i)
    CHECK(rec.rows[i].lr ==
          doctest::Approx(lr_at(sched, static_cast<std::int64_t>(i) + 1))
              .epsilon(1e-12));
}

TEST_CASE("an exploding run raises RunDiverged with the epoch") {
  TempDir tmp;
  mscale::ExperimentConfig cfg = mscale::parse_config(R"(
name = blowup
task = fit
loss = mse
target = osc3d
widths = 3-8-1
activation = relu
epochs = 50
seed = 3
train_size = 16
lr0 = 1e155
record_wall_time = false
)",
                                                      "blowup");
  cfg.out_dir = tmp.path.string();
  bool caught = false;
  try {
    mscale::run_experiment(cfg);
  } catch (const mscale::RunDiverged& e) {
    caught = true;
    CHECK(e.epoch >= 0);
    CHECK(e.epoch < 50);
    CHECK(std::string(e.what()).find("diverged") != std::string::npos);
  }
  CHECK(caught);
}

TEST_CASE("metadata records the generator and the config hash") {
  TempDir tmp;
  mscale::ExperimentConfig cfg = small_pde(tmp.path);
  cfg.epochs = 0;
  mscale::run_experiment(cfg);
  std::string meta = slurp(tmp.path / "tiny.meta");
  char expect[64];
  std::snprintf(expect, sizeof expect, "%016llx",
                static_cast<unsigned long long>(mscale::config_hash(cfg)));
  CHECK(meta.find(expect) != std::string::npos);
  CHECK(meta.find("pcg32") != std::string::npos);
  // The canonical dump is appended, so the metadata alone rebuilds the run.
  CHECK(meta.find("widths = 2-8-8-1") != std::string::npos);
}
