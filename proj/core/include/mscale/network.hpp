#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mscale/activation.hpp"
#include "mscale/linalg.hpp"

namespace mscale {

/// D1: weights ~ N(0, (2/(n_in+n_out))^2). D2: weights ~ N(0, 2/(n_in+n_out)).
enum class InitScheme { D1, D2 };

struct NetworkSpec {
  std::vector<int> widths;  // input, hidden..., output; output width must be 1
  Activation activation = Activation::Srelu;
  int scale_parts = 1;              // used when scale_list is empty
  std::vector<double> scale_list;   // explicit per-neuron scales, length widths[1]
  InitScheme init = InitScheme::D1;
};

/// First-hidden-layer multipliers: n1 neurons split into `parts` groups, group
/// i (1-based) holding the value i. When parts does not divide n1, the
/// earliest groups take one extra neuron each.
std::vector<double> build_scale_vector(int n1, int parts);

/// Fully-connected scalar-output net. The first pre-activation is
/// K ⊙ (W_0 x) + b_0; later layers are affine + activation; the last layer is
/// affine only. Parameters live in one flat vector in draw order:
/// W_0 (row-major), b_0, W_1, b_1, ...
struct Network {
  std::vector<int> widths;
  Activation activation = Activation::Srelu;
  std::vector<double> scales;  // length widths[1]
  std::vector<double> params;

  int layer_count() const { return static_cast<int>(widths.size()) - 1; }
  int input_dim() const { return widths.front(); }
  int width_in(int l) const { return widths[l]; }
  int width_out(int l) const { return widths[l + 1]; }

  std::size_t weight_offset(int l) const;
  std::size_t bias_offset(int l) const;
  std::size_t param_count() const;

  const double* W(int l) const { return params.data() + weight_offset(l); }
  double* W(int l) { return params.data() + weight_offset(l); }
  const double* b(int l) const { return params.data() + bias_offset(l); }
  double* b(int l) { return params.data() + bias_offset(l); }
};

/// Validates the NetworkSpec and draws parameters from the init sub-stream
/// of `seed`, layer by layer, weights before biases.
Network make_network(const NetworkSpec& spec, std::uint64_t seed);

/// Throws ShapeError when widths, scales, and params disagree.
void check_network(const Network& net);

/// What a batched evaluation tracks alongside values.
enum class EvalMode { Value, Grad, GradLap };

/// Reusable batch scratch. Buffers persist across calls so an epoch loop
/// allocates only on the first batch of each shape.
struct Workspace {
  int m = 0;          // points in the prepared batch
  int d = 0;          // input dimension
  EvalMode mode = EvalMode::Value;
  // Per hidden layer: pre-activations and their input derivatives.
  std::vector<Mat> A;    // m x n        pre-activation
  std::vector<Mat> Z;    // m x n        activation output
  std::vector<Mat> G;    // (m*d) x n    Jacobian of A w.r.t. x
  std::vector<Mat> J;    // (m*d) x n    Jacobian of Z
  std::vector<Mat> R;    // m x n        sum_k G_k^2
  std::vector<Mat> Lam;  // m x n        Laplacian of A
  std::vector<Mat> Mu;   // m x n        Laplacian of Z
  // Reverse-sweep buffers, congruent to A/G/Lam.
  std::vector<Mat> bA, bG, bL;
  Mat scratch0;  // m x n1, layer-0 weight gradient staging
  Mat tsum;      // d x n1, layer-0 Jacobian column sums

  void prepare(const Network& net, int batch, EvalMode mode);
};

/// Batched evaluation over m points (X row-major m x d). Fills values (m),
/// and in Grad/GradLap mode grads (m x d); in GradLap mode laplacians (m).
/// Leaves the forward state in ws for a following backward_batch.
void forward_batch(const Network& net, const double* X, int m, EvalMode mode,
                   Workspace& ws, double* values, double* grads,
                   double* laplacians);

/// Accumulates into grad (length param_count) the gradient of
///   sum_i wv[i] h(x_i) + sum_{i,k} wg[i*d+k] dh/dx_k(x_i) + sum_i wl[i] Lap h(x_i)
/// with respect to every weight and bias. Null seed pointers mean zero; seeds
/// may only reference quantities the prepared mode computed. Must run on the
/// workspace state left by forward_batch for the same net, X, m, and mode.
void backward_batch(const Network& net, const double* X, int m, EvalMode mode,
                    Workspace& ws, const double* wv, const double* wg,
                    const double* wl, std::vector<double>& grad);

double forward(const Network& net, std::span<const double> x);

struct DerivBundle {
  double value = 0.0;
  std::vector<double> grad;  // d entries
  double laplacian = 0.0;
};

/// Value, input gradient, and input Laplacian in one pass. Single-point
/// wrapper over the batched path, so it matches forward_batch bit for bit.
DerivBundle forward_bundle(const Network& net, std::span<const double> x);

}  // namespace mscale
