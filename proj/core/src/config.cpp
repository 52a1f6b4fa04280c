#include "mscale/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mscale/errors.hpp"

namespace mscale {

const char* task_name(TaskKind t) { return t == TaskKind::Fit ? "fit" : "pde"; }

const char* metric_mode_name(MetricMode m) {
  return m == MetricMode::Fixed ? "fixed" : "step_sample";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& origin, const std::string& msg) {
  throw ConfigError(origin + ": " + msg);
}

double to_double(const std::string& origin, const std::string& key,
                 const std::string& v) {
  const char* s = v.c_str();
  char* end = nullptr;
  double x = std::strtod(s, &end);
  if (end == s || *end != '\0' || !std::isfinite(x))
    bad(origin, "key '" + key + "' needs a finite number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& origin, const std::string& key,
                 const std::string& v) {
  const char* s = v.c_str();
  char* end = nullptr;
  long long x = std::strtoll(s, &end, 10);
  if (end == s || *end != '\0')
    bad(origin, "key '" + key + "' needs an integer, got '" + v + "'");
  return x;
}

std::uint64_t to_uint(const std::string& origin, const std::string& key,
                      const std::string& v) {
  const char* s = v.c_str();
  if (*s == '-') bad(origin, "key '" + key + "' needs a non-negative integer");
  char* end = nullptr;
  std::uint64_t x = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0')
    bad(origin, "key '" + key + "' needs a non-negative integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& origin, const std::string& key,
             const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad(origin, "key '" + key + "' needs true or false, got '" + v + "'");
}

std::vector<int> to_widths(const std::string& origin, const std::string& v) {
  std::vector<int> w;
  std::string part;
  std::istringstream ss(v);
  while (std::getline(ss, part, '-')) {
    part = trim(part);
    if (part.empty()) bad(origin, "widths has an empty component");
    w.push_back(static_cast<int>(to_int(origin, "widths", part)));
  }
  if (w.size() < 3)
    bad(origin, "widths needs at least input-hidden-output, e.g. 3-512-1");
  return w;
}

std::vector<double> to_scale_list(const std::string& origin, const std::string& v) {
  std::vector<double> out;
  std::string part;
  std::istringstream ss(v);
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) bad(origin, "scale_list has an empty component");
    out.push_back(to_double(origin, "scale_list", part));
  }
  return out;
}

TargetKind to_target(const std::string& origin, const std::string& v) {
  if (v == "osc3d") return TargetKind::Osc3d;
  if (v == "embed60") return TargetKind::Embed60;
  if (v == "hf1d") return TargetKind::Hf1d;
  if (v == "hf2d") return TargetKind::Hf2d;
  bad(origin, "unknown target '" + v + "' (expected osc3d, embed60, hf1d, or hf2d)");
}

Embedding to_embedding(const std::string& origin, const std::string& v) {
  if (v == "none") return Embedding::None;
  if (v == "linear") return Embedding::Linear;
  if (v == "nonlinear") return Embedding::Nonlinear;
  bad(origin, "unknown embedding '" + v + "' (expected none, linear, or nonlinear)");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      bad(origin, "line " + std::to_string(lineno) + " is not 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) bad(origin, "line " + std::to_string(lineno) + " has an empty key");
    if (val.empty()) bad(origin, "key '" + key + "' has an empty value");
    if (kv.count(key)) bad(origin, "duplicate key '" + key + "'");
    kv[key] = val;
  }

  ExperimentConfig cfg;
  bool saw_seed = false, saw_task = false, saw_loss = false, saw_widths = false,
       saw_epochs = false, saw_embedding = false;
  std::set<std::string> known;
  auto take = [&](const char* key) -> const std::string* {
    known.insert(key);
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (const auto* v = take("name")) cfg.name = *v;
  if (const auto* v = take("task")) {
    saw_task = true;
    if (*v == "fit") cfg.task = TaskKind::Fit;
    else if (*v == "pde") cfg.task = TaskKind::Pde;
    else bad(origin, "unknown task '" + *v + "' (expected fit or pde)");
  }
  if (const auto* v = take("loss")) {
    saw_loss = true;
    cfg.loss = loss_from_name(*v);
  }
  if (const auto* v = take("target")) cfg.target.kind = to_target(origin, *v);
  if (const auto* v = take("embedding")) {
    saw_embedding = true;
    cfg.target.embedding = to_embedding(origin, *v);
  }
  if (const auto* v = take("dim")) cfg.dim = static_cast<int>(to_int(origin, "dim", *v));
  if (const auto* v = take("d_in"))
    cfg.target.d_in = static_cast<int>(to_int(origin, "d_in", *v));
  if (const auto* v = take("widths")) {
    saw_widths = true;
    cfg.widths = to_widths(origin, *v);
  }
  if (const auto* v = take("activation")) cfg.activation = activation_from_name(*v);
  if (const auto* v = take("scale_parts"))
    cfg.scale_parts = static_cast<int>(to_int(origin, "scale_parts", *v));
  if (const auto* v = take("scale_list")) cfg.scale_list = to_scale_list(origin, *v);
  if (const auto* v = take("init")) {
    if (*v == "d1") cfg.init = InitScheme::D1;
    else if (*v == "d2") cfg.init = InitScheme::D2;
    else bad(origin, "unknown init '" + *v + "' (expected d1 or d2)");
  }
  if (const auto* v = take("seed")) {
    saw_seed = true;
    cfg.seed = to_uint(origin, "seed", *v);
  }
  if (const auto* v = take("epochs")) {
    saw_epochs = true;
    cfg.epochs = to_int(origin, "epochs", *v);
  }
  if (const auto* v = take("lr0")) cfg.lr0 = to_double(origin, "lr0", *v);
  if (const auto* v = take("lr_decay")) cfg.lr_decay = to_double(origin, "lr_decay", *v);
  if (const auto* v = take("decay_kind")) cfg.decay_kind = decay_from_name(*v);
  if (const auto* v = take("beta1")) cfg.beta1 = to_double(origin, "beta1", *v);
  if (const auto* v = take("beta2")) cfg.beta2 = to_double(origin, "beta2", *v);
  if (const auto* v = take("adam_eps")) cfg.adam_eps = to_double(origin, "adam_eps", *v);
  if (const auto* v = take("batch_size"))
    cfg.batch_size = static_cast<int>(to_int(origin, "batch_size", *v));
  if (const auto* v = take("train_size"))
    cfg.train_size = static_cast<int>(to_int(origin, "train_size", *v));
  if (const auto* v = take("test_size"))
    cfg.test_size = static_cast<int>(to_int(origin, "test_size", *v));
  if (const auto* v = take("n"))
    cfg.n_interior = static_cast<int>(to_int(origin, "n", *v));
  if (const auto* v = take("n_tilde"))
    cfg.n_boundary = static_cast<int>(to_int(origin, "n_tilde", *v));
  if (const auto* v = take("beta")) cfg.beta = to_double(origin, "beta", *v);
  if (const auto* v = take("epsilon")) cfg.epsilon = to_double(origin, "epsilon", *v);
  if (const auto* v = take("metric_mode")) {
    if (*v == "fixed") cfg.metric_mode = MetricMode::Fixed;
    else if (*v == "step_sample") cfg.metric_mode = MetricMode::StepSample;
    else bad(origin, "unknown metric_mode '" + *v + "' (expected fixed or step_sample)");
  }
  if (const auto* v = take("eval_size"))
    cfg.eval_size = static_cast<int>(to_int(origin, "eval_size", *v));
  if (const auto* v = take("out_dir")) cfg.out_dir = *v;
  if (const auto* v = take("threads"))
    cfg.threads = static_cast<int>(to_int(origin, "threads", *v));
  if (const auto* v = take("record_wall_time"))
    cfg.record_wall_time = to_bool(origin, "record_wall_time", *v);
  bool saw_lo = false, saw_hi = false;
  if (const auto* v = take("domain_lo")) {
    saw_lo = true;
    cfg.domain_lo = to_double(origin, "domain_lo", *v);
  }
  if (const auto* v = take("domain_hi")) {
    saw_hi = true;
    cfg.domain_hi = to_double(origin, "domain_hi", *v);
  }
  if (saw_lo != saw_hi)
    bad(origin, "domain_lo and domain_hi must be given together");
  cfg.domain_set = saw_lo;

  for (const auto& [key, value] : kv)
    if (!known.count(key)) bad(origin, "unknown key '" + key + "'");

  if (!saw_task) bad(origin, "missing required key 'task'");
  if (!saw_loss) bad(origin, "missing required key 'loss'");
  if (!saw_widths) bad(origin, "missing required key 'widths'");
  if (!saw_epochs) bad(origin, "missing required key 'epochs'");
  if (!saw_seed) bad(origin, "missing required key 'seed' (runs must be reproducible)");
  if (cfg.task == TaskKind::Fit && cfg.target.kind == TargetKind::Embed60 &&
      !saw_embedding)
    bad(origin, "embedded target needs an explicit 'embedding' key");

  if (cfg.name.empty()) {
    std::filesystem::path p(origin);
    cfg.name = p.stem().string();
    if (cfg.name.empty()) cfg.name = "run";
  }

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void validate_config(ExperimentConfig& cfg) {
  const std::string& o = cfg.name.empty() ? "config" : cfg.name;
  if (cfg.widths.size() < 3) bad(o, "widths needs at least one hidden layer");
  for (int w : cfg.widths)
    if (w < 1) bad(o, "widths entries must be positive");
  if (cfg.widths.back() != 1) bad(o, "output width must be 1");
  if (cfg.epochs < 0) bad(o, "epochs must be non-negative");
  if (cfg.threads < 1) bad(o, "threads must be at least 1");
  if (!(cfg.lr0 > 0.0)) bad(o, "lr0 must be positive");
  if (cfg.lr_decay < 0.0) bad(o, "lr_decay must be non-negative");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0)) bad(o, "beta1 must lie in [0, 1)");
  if (!(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) bad(o, "beta2 must lie in [0, 1)");
  if (!(cfg.adam_eps > 0.0)) bad(o, "adam_eps must be positive");

  int n1 = cfg.widths[1];
  if (!cfg.scale_list.empty()) {
    if (cfg.scale_list.size() != static_cast<std::size_t>(n1))
      bad(o, "scale_list length must equal the first hidden width");
    for (double s : cfg.scale_list)
      if (!(s > 0.0)) bad(o, "scale_list entries must be positive");
  } else if (cfg.scale_parts < 1 || cfg.scale_parts > n1) {
    bad(o, "scale_parts must lie in [1, first hidden width]");
  }

  std::int64_t steps_per_epoch = 1;
  if (cfg.task == TaskKind::Fit) {
    if (cfg.loss != LossKind::Mse)
      bad(o, "task fit requires loss = mse");
    if (cfg.target.kind == TargetKind::Embed60) {
      if (cfg.dim < 1) bad(o, "embedded target needs 'dim' (ambient dimension)");
      cfg.target.d = cfg.dim;
    }
    validate_target(cfg.target);
    if (cfg.train_size < 1) bad(o, "task fit needs train_size >= 1");
    if (cfg.test_size < 0) bad(o, "test_size must be non-negative");
    if (cfg.batch_size == 0) cfg.batch_size = cfg.train_size;
    if (cfg.batch_size < 1 || cfg.batch_size > cfg.train_size)
      bad(o, "batch_size must lie in [1, train_size]");
    if (cfg.widths.front() != target_input_dim(cfg.target))
      bad(o, "network input width must equal the target input dimension");
    steps_per_epoch = (cfg.train_size + cfg.batch_size - 1) / cfg.batch_size;
    if (cfg.n_interior != 0 || cfg.n_boundary != 0)
      bad(o, "n and n_tilde apply only to task pde");
  } else {
    if (cfg.loss != LossKind::Ritz && cfg.loss != LossKind::Lse)
      bad(o, "task pde requires loss = ritz or lse");
    if (cfg.dim < 1) bad(o, "task pde needs 'dim' >= 1");
    if (cfg.n_interior < 1) bad(o, "task pde needs n >= 1");
    if (cfg.n_boundary < 1) bad(o, "task pde needs n_tilde >= 1");
    if (cfg.beta < 0.0) bad(o, "beta must be non-negative");
    if (!(cfg.epsilon > 0.0)) bad(o, "epsilon must be positive");
    if (cfg.widths.front() != cfg.dim)
      bad(o, "network input width must equal the problem dimension");
    if (cfg.eval_size == 0) cfg.eval_size = 10 * cfg.n_interior;
    if (cfg.eval_size < 1) bad(o, "eval_size must be positive");
    if (cfg.train_size != 0 || cfg.test_size != 0 || cfg.batch_size != 0)
      bad(o, "train_size/test_size/batch_size apply only to task fit");
  }

  if (cfg.domain_set && !(cfg.domain_lo < cfg.domain_hi))
    bad(o, "domain_lo must be less than domain_hi");

  std::int64_t total_steps = cfg.epochs * steps_per_epoch;
  if (cfg.decay_kind == DecayKind::Linear &&
      cfg.lr_decay * static_cast<double>(total_steps) >= 1.0)
    bad(o, "linear decay reaches zero within the run; lower lr_decay or epochs");
  if (cfg.decay_kind == DecayKind::Exponential && cfg.lr_decay >= 1.0)
    bad(o, "exponential decay needs lr_decay < 1");
}

Box config_domain(const ExperimentConfig& cfg) {
  if (cfg.task == TaskKind::Fit) {
    Box b = target_domain(cfg.target);
    if (cfg.domain_set) {
      b.lo = cfg.domain_lo;
      b.hi = cfg.domain_hi;
    }
    return b;
  }
  Box b{cfg.dim, 0.0, 1.0};
  if (cfg.domain_set) {
    b.lo = cfg.domain_lo;
    b.hi = cfg.domain_hi;
  }
  return b;
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "name = " << cfg.name << "\n";
  out << "task = " << task_name(cfg.task) << "\n";
  out << "loss = " << loss_name(cfg.loss) << "\n";
  out << "widths = ";
  for (std::size_t i = 0; i < cfg.widths.size(); ++i)
    out << (i ? "-" : "") << cfg.widths[i];
  out << "\n";
  out << "activation = " << activation_name(cfg.activation) << "\n";
  if (!cfg.scale_list.empty()) {
    out << "scale_list = ";
    for (std::size_t i = 0; i < cfg.scale_list.size(); ++i)
      out << (i ? "," : "") << num(cfg.scale_list[i]);
    out << "\n";
  } else {
    out << "scale_parts = " << cfg.scale_parts << "\n";
  }
  out << "init = " << (cfg.init == InitScheme::D1 ? "d1" : "d2") << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "epochs = " << cfg.epochs << "\n";
  out << "lr0 = " << num(cfg.lr0) << "\n";
  out << "lr_decay = " << num(cfg.lr_decay) << "\n";
  out << "decay_kind = " << decay_name(cfg.decay_kind) << "\n";
  out << "beta1 = " << num(cfg.beta1) << "\n";
  out << "beta2 = " << num(cfg.beta2) << "\n";
  out << "adam_eps = " << num(cfg.adam_eps) << "\n";
  if (cfg.task == TaskKind::Fit) {
    out << "target = ";
    switch (cfg.target.kind) {
      case TargetKind::Osc3d: out << "osc3d"; break;
      case TargetKind::Embed60: out << "embed60"; break;
      case TargetKind::Hf1d: out << "hf1d"; break;
      case TargetKind::Hf2d: out << "hf2d"; break;
    }
    out << "\n";
    if (cfg.target.kind == TargetKind::Embed60) {
      out << "embedding = "
          << (cfg.target.embedding == Embedding::Linear ? "linear" : "nonlinear")
          << "\n";
      out << "dim = " << cfg.dim << "\n";
      out << "d_in = " << cfg.target.d_in << "\n";
    }
    out << "train_size = " << cfg.train_size << "\n";
    out << "test_size = " << cfg.test_size << "\n";
    out << "batch_size = " << cfg.batch_size << "\n";
  } else {
    out << "dim = " << cfg.dim << "\n";
    out << "n = " << cfg.n_interior << "\n";
    out << "n_tilde = " << cfg.n_boundary << "\n";
    out << "beta = " << num(cfg.beta) << "\n";
    out << "epsilon = " << num(cfg.epsilon) << "\n";
    out << "metric_mode = " << metric_mode_name(cfg.metric_mode) << "\n";
    out << "eval_size = " << cfg.eval_size << "\n";
  }
  Box dom = config_domain(cfg);
  out << "domain_lo = " << num(dom.lo) << "\n";
  out << "domain_hi = " << num(dom.hi) << "\n";
  out << "threads = " << cfg.threads << "\n";
  out << "record_wall_time = " << (cfg.record_wall_time ? "true" : "false") << "\n";
  out << "out_dir = " << cfg.out_dir << "\n";
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::string text = dump_config(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace mscale
