#include "mscale/objective.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "mscale/errors.hpp"

namespace mscale {

const char* loss_name(LossKind k) {
  switch (k) {
    case LossKind::Mse: return "mse";
    case LossKind::Ritz: return "ritz";
    case LossKind::Lse: return "lse";
  }
  return "?";
}

LossKind loss_from_name(std::string_view name) {
  if (name == "mse") return LossKind::Mse;
  if (name == "ritz") return LossKind::Ritz;
  if (name == "lse") return LossKind::Lse;
  throw ConfigError("unknown loss '" + std::string(name) + "' (expected mse, ritz, or lse)");
}

namespace {

struct Scratch {
  std::vector<double> val, grd, lap;   // batch outputs
  std::vector<double> sv, sg, sl;      // seeds
  std::vector<double> aux;             // per-point field values (g or labels side)
};

Scratch& scratch() {
  static thread_local Scratch s;
  return s;
}

void warn_relu_laplacian_once() {
  static bool warned = false;
  if (warned) return;
  warned = true;
  std::fprintf(stderr,
               "warning: laplacian-based objective with relu activation; the "
               "network laplacian is zero almost everywhere, so the residual "
               "term cannot steer training\n");
}

double fit_mse(const Network& net, const TrainBatch& batch,
               std::vector<double>* grad, Workspace& ws) {
  int m = static_cast<int>(batch.labels.size());
  if (m < 1) throw ShapeError("mse objective needs a non-empty batch");
  if (batch.inputs.size() != static_cast<std::size_t>(m) * batch.dim)
    throw ShapeError("inputs and labels disagree in length");
  Scratch& s = scratch();
  s.val.resize(m);
  forward_batch(net, batch.inputs.data(), m, EvalMode::Value, ws, s.val.data(),
                nullptr, nullptr);
  double loss = 0.0;
  for (int i = 0; i < m; ++i) {
    double e = s.val[i] - batch.labels[i];
    loss += e * e;
  }
  loss /= m;
  if (grad) {
    s.sv.resize(m);
    for (int i = 0; i < m; ++i)
      s.sv[i] = 2.0 * (s.val[i] - batch.labels[i]) / m;
    backward_batch(net, batch.inputs.data(), m, EvalMode::Value, ws,
                   s.sv.data(), nullptr, nullptr, *grad);
  }
  return loss;
}

double boundary_penalty(const Network& net, const Objective& obj,
                        const TrainBatch& batch, std::vector<double>* grad,
                        Workspace& ws) {
  int d = batch.dim;
  int mb = static_cast<int>(batch.boundary.size()) / d;
  if (mb < 1) throw ShapeError("pde objective needs a non-empty boundary batch");
  if (batch.boundary.size() != static_cast<std::size_t>(mb) * d)
    throw ShapeError("boundary batch length is not a multiple of the dimension");
  const ScalarField& gt = *obj.problem->boundary_data;
  Scratch& s = scratch();
  s.val.resize(mb);
  forward_batch(net, batch.boundary.data(), mb, EvalMode::Value, ws,
                s.val.data(), nullptr, nullptr);
  double loss = 0.0;
  s.sv.resize(mb);
  for (int i = 0; i < mb; ++i) {
    std::span<const double> x(batch.boundary.data() + static_cast<std::size_t>(i) * d, d);
    double e = s.val[i] - gt.value(x);
    loss += e * e;
    s.sv[i] = 2.0 * obj.beta * e / mb;
  }
  loss = obj.beta * loss / mb;
  if (grad)
    backward_batch(net, batch.boundary.data(), mb, EvalMode::Value, ws,
                   s.sv.data(), nullptr, nullptr, *grad);
  return loss;
}

double ritz_interior(const Network& net, const Objective& obj,
                     const TrainBatch& batch, std::vector<double>* grad,
                     Workspace& ws) {
  int d = batch.dim;
  int n = static_cast<int>(batch.interior.size()) / d;
  if (n < 1) throw ShapeError("pde objective needs a non-empty interior batch");
  const PoissonProblem& prob = *obj.problem;
  const ScalarField& g = *prob.source;
  const ScalarField* V = prob.potential.get();
  double eps = prob.epsilon;
  Scratch& s = scratch();
  s.val.resize(n);
  s.grd.resize(static_cast<std::size_t>(n) * d);
  forward_batch(net, batch.interior.data(), n, EvalMode::Grad, ws, s.val.data(),
                s.grd.data(), nullptr);
  s.sv.resize(n);
  s.sg.resize(static_cast<std::size_t>(n) * d);
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    std::span<const double> x(batch.interior.data() + static_cast<std::size_t>(i) * d, d);
    double gg = 0.0;
    for (int k = 0; k < d; ++k) {
      double gv = s.grd[static_cast<std::size_t>(i) * d + k];
      gg += gv * gv;
      s.sg[static_cast<std::size_t>(i) * d + k] = eps * gv / n;
    }
    double gi = g.value(x);
    double vi = V ? V->value(x) : 0.0;
    double h = s.val[i];
    loss += 0.5 * eps * gg + vi * h * h - gi * h;
    s.sv[i] = (2.0 * vi * h - gi) / n;
  }
  loss /= n;
  if (grad)
    backward_batch(net, batch.interior.data(), n, EvalMode::Grad, ws,
                   s.sv.data(), s.sg.data(), nullptr, *grad);
  return loss;
}

double lse_interior(const Network& net, const Objective& obj,
                    const TrainBatch& batch, std::vector<double>* grad,
                    Workspace& ws) {
  if (net.activation == Activation::Relu) warn_relu_laplacian_once();
  int d = batch.dim;
  int n = static_cast<int>(batch.interior.size()) / d;
  if (n < 1) throw ShapeError("pde objective needs a non-empty interior batch");
  const ScalarField& g = *obj.problem->source;
  Scratch& s = scratch();
  s.val.resize(n);
  s.grd.resize(static_cast<std::size_t>(n) * d);
  s.lap.resize(n);
  forward_batch(net, batch.interior.data(), n, EvalMode::GradLap, ws,
                s.val.data(), s.grd.data(), s.lap.data());
  s.sl.resize(n);
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    std::span<const double> x(batch.interior.data() + static_cast<std::size_t>(i) * d, d);
    double r = s.lap[i] + g.value(x);
    loss += r * r;
    s.sl[i] = 2.0 * r / n;
  }
  loss /= n;
  if (grad)
    backward_batch(net, batch.interior.data(), n, EvalMode::GradLap, ws,
                   nullptr, nullptr, s.sl.data(), *grad);
  return loss;
}

double evaluate(const Network& net, const Objective& obj, const TrainBatch& batch,
                std::vector<double>* grad, Workspace& ws) {
  check_network(net);
  if (batch.dim != net.input_dim())
    throw ShapeError("batch dimension disagrees with the network input width");
  if (obj.kind == LossKind::Mse) return fit_mse(net, batch, grad, ws);
  if (obj.problem == nullptr)
    throw ConfigError("ritz/lse objective needs a problem definition");
  if (obj.problem->dim != batch.dim)
    throw ShapeError("problem dimension disagrees with the batch");
  if (batch.interior.size() % batch.dim != 0)
    throw ShapeError("interior batch length is not a multiple of the dimension");
  double loss = obj.kind == LossKind::Ritz ? ritz_interior(net, obj, batch, grad, ws)
                                           : lse_interior(net, obj, batch, grad, ws);
  loss += boundary_penalty(net, obj, batch, grad, ws);
  return loss;
}

}  // namespace

double objective_param_gradient(const Network& net, const Objective& obj,
                                const TrainBatch& batch, std::vector<double>& grad,
                                Workspace& ws) {
  grad.assign(net.param_count(), 0.0);
  return evaluate(net, obj, batch, &grad, ws);
}

double objective_value(const Network& net, const Objective& obj,
                       const TrainBatch& batch, Workspace& ws) {
  return evaluate(net, obj, batch, nullptr, ws);
}

double NetworkField::value(std::span<const double> x) const {
  return forward(*net_, x);
}

void NetworkField::gradient(std::span<const double> x, std::span<double> out) const {
  DerivBundle b = forward_bundle(*net_, x);
  if (out.size() != b.grad.size()) throw ShapeError("gradient output length mismatch");
  for (std::size_t i = 0; i < b.grad.size(); ++i) out[i] = b.grad[i];
}

double NetworkField::laplacian(std::span<const double> x) const {
  return forward_bundle(*net_, x).laplacian;
}

}  // namespace mscale
