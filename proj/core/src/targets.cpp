#include "mscale/targets.hpp"

#include <cmath>
#include <numbers>

#include "mscale/errors.hpp"

namespace mscale {

namespace {
constexpr double kPi = std::numbers::pi;

int embed_index(int i, int d, int d_in) {
  // 1-based component i reads t[q], q = floor(i / (d / d_in)) clamped.
  int q = i / (d / d_in);
  if (q < 1) q = 1;
  if (q > d_in) q = d_in;
  return q;
}
}  // namespace

int target_intrinsic_dim(const FitTarget& t) {
  switch (t.kind) {
    case TargetKind::Osc3d: return 3;
    case TargetKind::Embed60: return t.d_in;
    case TargetKind::Hf1d: return 1;
    case TargetKind::Hf2d: return 2;
  }
  return 0;
}

int target_input_dim(const FitTarget& t) {
  return t.kind == TargetKind::Embed60 ? t.d : target_intrinsic_dim(t);
}

Box target_domain(const FitTarget& t) {
  switch (t.kind) {
    case TargetKind::Osc3d: return Box{3, -kPi / 2.0, kPi / 2.0};
    case TargetKind::Embed60: return Box{t.d_in, 0.0, 1.0};
    case TargetKind::Hf1d: return Box{1, 0.0, kPi};
    case TargetKind::Hf2d: return Box{2, 0.0, kPi};
  }
  return Box{};
}

void validate_target(const FitTarget& t) {
  if (t.kind == TargetKind::Embed60) {
    if (t.embedding == Embedding::None)
      throw ConfigError("embedded target needs embedding = linear or nonlinear");
    if (t.d_in < 1) throw ConfigError("intrinsic dimension must be positive");
    if (t.d < t.d_in)
      throw ConfigError("ambient dimension must be at least the intrinsic dimension");
  } else if (t.embedding != Embedding::None) {
    throw ConfigError("embedding applies only to the embedded target");
  }
}

double eval_target(const FitTarget& t, std::span<const double> input) {
  int di = target_intrinsic_dim(t);
  if (static_cast<int>(input.size()) != di)
    throw ShapeError("target input length disagrees with the target kind");
  switch (t.kind) {
    case TargetKind::Osc3d:
    case TargetKind::Embed60: {
      double s = 0.0;
      for (int j = 0; j < di; ++j)
        s += std::cos(10.0 * input[j]) + std::sin(5.0 * input[j]);
      return s;
    }
    case TargetKind::Hf1d: {
      double x = input[0];
      return std::sin(23.0 * x) + std::sin(137.0 * x) + std::sin(203.0 * x);
    }
    case TargetKind::Hf2d: {
      auto f1 = [](double x) { return std::sin(23.0 * x) + std::sin(32.0 * x); };
      return f1(input[0]) * f1(input[1]);
    }
  }
  return 0.0;
}

void embed_linear(std::span<const double> t, int d, std::span<double> x) {
  int d_in = static_cast<int>(t.size());
  if (static_cast<int>(x.size()) != d) throw ShapeError("embedding output length mismatch");
  if (d_in < 1 || d < d_in) throw ShapeError("embedding needs 1 <= d_in <= d");
  for (int i = 1; i <= d; ++i)
    x[i - 1] = std::cos(static_cast<double>(i)) * t[embed_index(i, d, d_in) - 1];
}

void embed_nonlinear(std::span<const double> t, int d, std::span<double> x) {
  int d_in = static_cast<int>(t.size());
  if (static_cast<int>(x.size()) != d) throw ShapeError("embedding output length mismatch");
  if (d_in < 1 || d < d_in) throw ShapeError("embedding needs 1 <= d_in <= d");
  for (int i = 1; i <= d; ++i)
    x[i - 1] = std::cos(std::cos(static_cast<double>(i)) * t[embed_index(i, d, d_in) - 1]);
}

}  // namespace mscale
