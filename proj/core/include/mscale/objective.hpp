#pragma once

#include <span>
#include <vector>

#include "mscale/fields.hpp"
#include "mscale/losses.hpp"
#include "mscale/network.hpp"

namespace mscale {

enum class LossKind { Mse, Ritz, Lse };

const char* loss_name(LossKind k);
LossKind loss_from_name(std::string_view name);

/// What a training step minimizes. Mse needs labels only; Ritz and Lse need
/// the problem (for g, g_tilde, eps, V) and the penalty weight beta.
struct Objective {
  LossKind kind = LossKind::Mse;
  const PoissonProblem* problem = nullptr;
  double beta = 0.0;
};

/// One batch of training data. Mse uses inputs/labels; Ritz and Lse use
/// interior/boundary point sets (flat row-major, counts in points).
struct TrainBatch {
  int dim = 0;
  std::span<const double> inputs;
  std::span<const double> labels;
  std::span<const double> interior;
  std::span<const double> boundary;
};

/// Returns the batch objective and accumulates its exact parameter gradient
/// into grad (resized and zeroed to param_count first). Derivatives flowing
/// through the input gradient and Laplacian of the net are included.
/// Lse with a ReLU net is allowed but warns once: the net's Laplacian is zero
/// almost everywhere, so the residual term cannot steer training.
double objective_param_gradient(const Network& net, const Objective& obj,
                                const TrainBatch& batch, std::vector<double>& grad,
                                Workspace& ws);

/// The batch objective alone, same arithmetic as the gradient path.
double objective_value(const Network& net, const Objective& obj,
                       const TrainBatch& batch, Workspace& ws);

/// Adapter so a Network can stand wherever a ScalarField is expected.
class NetworkField : public ScalarField {
 public:
  explicit NetworkField(const Network& net) : net_(&net) {}
  int dim() const override { return net_->input_dim(); }
  double value(std::span<const double> x) const override;
  bool has_gradient() const override { return true; }
  void gradient(std::span<const double> x, std::span<double> out) const override;
  bool has_laplacian() const override { return true; }
  double laplacian(std::span<const double> x) const override;

 private:
  const Network* net_;
};

}  // namespace mscale
