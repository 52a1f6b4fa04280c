#pragma once

#include <span>
#include <vector>

#include "mscale/fields.hpp"

namespace mscale {

/// Closed-form regression targets.
///   Osc3d:   sum_{j=1..3} cos(10 x_j) + sin(5 x_j)      on [-pi/2, pi/2]^3
///   Embed60: the Osc3d formula applied to t in [0,1]^3, observed through a
///            fixed embedding into d ambient coordinates
///   Hf1d:    sin(23 x) + sin(137 x) + sin(203 x)        on [0, pi]
///   Hf2d:    f1(x) f1(y), f1(x) = sin(23 x) + sin(32 x) on [0, pi]^2
enum class TargetKind { Osc3d, Embed60, Hf1d, Hf2d };

enum class Embedding { None, Linear, Nonlinear };

struct FitTarget {
  TargetKind kind = TargetKind::Osc3d;
  Embedding embedding = Embedding::None;  // Embed60 only
  int d = 0;                              // ambient dimension (Embed60 only)
  int d_in = 3;                           // intrinsic dimension (Embed60 only)
};

/// Dimension of the vector the target formula consumes (3, d_in, 1, 2).
int target_intrinsic_dim(const FitTarget& t);

/// Dimension of the network input (equals intrinsic except Embed60: d).
int target_input_dim(const FitTarget& t);

/// Sampling domain for the intrinsic variable.
Box target_domain(const FitTarget& t);

/// Evaluates the formula on the intrinsic vector (for Embed60 that is t, not
/// the embedded point; the target depends on t alone).
double eval_target(const FitTarget& t, std::span<const double> input);

/// x_i = cos(i) * t_{q(i)} for i = 1..d, with q(i) = floor(i / (d / d_in))
/// clamped into [1, d_in] (integer arithmetic).
void embed_linear(std::span<const double> t, int d, std::span<double> x);

/// x_i = cos(cos(i) * t_{q(i)}), same index map.
void embed_nonlinear(std::span<const double> t, int d, std::span<double> x);

void validate_target(const FitTarget& t);

}  // namespace mscale
