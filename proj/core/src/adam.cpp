#include "mscale/adam.hpp"

#include <cmath>
#include <string>

#include "mscale/errors.hpp"

namespace mscale {

DecayKind decay_from_name(std::string_view name) {
  if (name == "inverse_time") return DecayKind::InverseTime;
  if (name == "linear") return DecayKind::Linear;
  if (name == "exponential") return DecayKind::Exponential;
  throw ConfigError("unknown decay_kind '" + std::string(name) +
                    "' (expected inverse_time, linear, or exponential)");
}

const char* decay_name(DecayKind k) {
  switch (k) {
    case DecayKind::InverseTime: return "inverse_time";
    case DecayKind::Linear: return "linear";
    case DecayKind::Exponential: return "exponential";
  }
  return "?";
}

double lr_at(const LrSchedule& s, std::int64_t t) {
  switch (s.kind) {
    case DecayKind::InverseTime:
      return s.lr0 / (1.0 + s.decay * static_cast<double>(t));
    case DecayKind::Linear:
      return s.lr0 * (1.0 - s.decay * static_cast<double>(t));
    case DecayKind::Exponential:
      return s.lr0 * std::pow(1.0 - s.decay, static_cast<double>(t));
  }
  return s.lr0;
}

AdamState make_adam_state(std::size_t param_count, double beta1, double beta2,
                          double eps) {
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ConfigError("adam betas must lie in [0, 1)");
  if (!(eps > 0.0)) throw ConfigError("adam eps must be positive");
  AdamState st;
  st.m.assign(param_count, 0.0);
  st.v.assign(param_count, 0.0);
  st.beta1 = beta1;
  st.beta2 = beta2;
  st.eps = eps;
  return st;
}

double adam_step(AdamState& st, std::vector<double>& params,
                 const std::vector<double>& grad, const LrSchedule& schedule) {
  std::size_t n = params.size();
  if (st.m.size() != n || st.v.size() != n || grad.size() != n)
    throw ShapeError("adam state, parameters, and gradient must be congruent");
  st.t += 1;
  double lr = lr_at(schedule, st.t);
  double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.t));
  double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.t));
  double b1 = st.beta1, b2 = st.beta2, eps = st.eps;
  for (std::size_t i = 0; i < n; ++i) {
    double g = grad[i];
    double m = b1 * st.m[i] + (1.0 - b1) * g;
    double v = b2 * st.v[i] + (1.0 - b2) * g * g;
    st.m[i] = m;
    st.v[i] = v;
    params[i] -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
  }
  return lr;
}

}  // namespace mscale
