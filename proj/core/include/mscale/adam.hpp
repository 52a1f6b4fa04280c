#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace mscale {

enum class DecayKind { InverseTime, Linear, Exponential };

DecayKind decay_from_name(std::string_view name);
const char* decay_name(DecayKind k);

/// Per-step learning rate:
///   inverse_time: lr0 / (1 + decay * t)
///   linear:       lr0 * (1 - decay * t)   (caller must keep decay * t < 1)
///   exponential:  lr0 * (1 - decay)^t
struct LrSchedule {
  double lr0 = 1e-3;
  double decay = 0.0;
  DecayKind kind = DecayKind::InverseTime;
};

double lr_at(const LrSchedule& s, std::int64_t t);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

AdamState make_adam_state(std::size_t param_count, double beta1 = 0.9,
                          double beta2 = 0.999, double eps = 1e-8);

/// One update: t += 1; moments; bias correction; params -= lr(t) * mhat /
/// (sqrt(vhat) + eps). Returns the learning rate used. Shape mismatch throws.
double adam_step(AdamState& st, std::vector<double>& params,
                 const std::vector<double>& grad, const LrSchedule& schedule);

}  // namespace mscale
