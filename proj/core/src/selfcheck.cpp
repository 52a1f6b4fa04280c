#include "mscale/selfcheck.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "mscale/adam.hpp"
#include "mscale/fields.hpp"
#include "mscale/losses.hpp"
#include "mscale/network.hpp"
#include "mscale/objective.hpp"
#include "mscale/rng.hpp"
#include "mscale/sampling.hpp"

namespace mscale {

namespace {

double rel_err(double got, double want) {
  double scale = std::max(std::abs(got), std::abs(want));
  if (scale < 1e-12) return 0.0;
  return std::abs(got - want) / scale;
}

// Away from the kinks of the piecewise definitions.
bool near_kink(double x) {
  return std::abs(x) < 1e-3 || std::abs(x - 1.0) < 1e-3;
}

bool check_activation_fd(std::ostream& out) {
  Pcg32 rng(99, 7);
  double h = 1e-6;
  double worst = 0.0;
  for (Activation f : {Activation::Relu, Activation::Srelu, Activation::Srelu2,
                       Activation::Srelu3}) {
    for (int i = 0; i < 200; ++i) {
      double x = rng.uniform(-0.5, 1.5);
      if (near_kink(x) || near_kink(x - h) || near_kink(x + h)) continue;
      double fd1 = (act_value(f, x + h) - act_value(f, x - h)) / (2.0 * h);
      double fd2 = (act_deriv1(f, x + h) - act_deriv1(f, x - h)) / (2.0 * h);
      worst = std::max(worst, rel_err(act_deriv1(f, x), fd1));
      worst = std::max(worst, rel_err(act_deriv2(f, x), fd2));
    }
  }
  bool ok = worst <= 1e-5;
  out << (ok ? "ok  " : "FAIL") << " activation derivatives vs central differences"
      << " (worst rel " << worst << ")\n";
  return ok;
}

bool check_bundle_fd(std::ostream& out) {
  NetworkSpec spec{{2, 8, 8, 1}, Activation::Srelu2, 2, {}, InitScheme::D2};
  Network net = make_network(spec, 1234);
  Pcg32 rng(55, 11);
  double worst_g = 0.0, worst_l = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x{rng.uniform(0.05, 0.45), rng.uniform(0.05, 0.45)};
    DerivBundle b = forward_bundle(net, x);
    double hg = 1e-5;
    for (int k = 0; k < 2; ++k) {
      std::vector<double> xp = x, xm = x;
      xp[k] += hg;
      xm[k] -= hg;
      double fd = (forward(net, xp) - forward(net, xm)) / (2.0 * hg);
      worst_g = std::max(worst_g, rel_err(b.grad[k], fd));
    }
    double hl = 1e-4;
    double lap_fd = 0.0;
    double f0 = forward(net, x);
    for (int k = 0; k < 2; ++k) {
      std::vector<double> xp = x, xm = x;
      xp[k] += hl;
      xm[k] -= hl;
      lap_fd += (forward(net, xp) - 2.0 * f0 + forward(net, xm)) / (hl * hl);
    }
    worst_l = std::max(worst_l, rel_err(b.laplacian, lap_fd));
  }
  bool ok = worst_g <= 1e-5 && worst_l <= 1e-3;
  out << (ok ? "ok  " : "FAIL") << " derivative bundle vs finite differences"
      << " (grad rel " << worst_g << ", laplacian rel " << worst_l << ")\n";
  return ok;
}

bool check_loss_gradients(std::ostream& out) {
  PoissonProblem prob = poisson_sine_problem(2);
  Pcg32 interior_rng(7, 1), boundary_rng(7, 2);
  std::vector<double> interior = sample_interior(prob.domain, 8, interior_rng);
  std::vector<double> boundary = sample_boundary(prob.domain, 2, boundary_rng);

  double worst = 0.0;
  for (LossKind kind : {LossKind::Mse, LossKind::Ritz, LossKind::Lse}) {
    NetworkSpec spec{{2, 4, 1},
                     kind == LossKind::Lse ? Activation::Srelu3 : Activation::Srelu2,
                     2,
                     {},
                     InitScheme::D2};
    Network net = make_network(spec, 99);
    TrainBatch batch;
    batch.dim = 2;
    std::vector<double> labels(8, 0.25);
    if (kind == LossKind::Mse) {
      batch.inputs = interior;
      batch.labels = labels;
    } else {
      batch.interior = interior;
      batch.boundary = boundary;
    }
    Objective obj{kind, &prob, 10.0};
    Workspace ws;
    std::vector<double> grad;
    objective_param_gradient(net, obj, batch, grad, ws);
    double h = 1e-4;
    for (std::size_t p = 0; p < net.param_count(); ++p) {
      double keep = net.params[p];
      net.params[p] = keep + h;
      double up = objective_value(net, obj, batch, ws);
      net.params[p] = keep - h;
      double dn = objective_value(net, obj, batch, ws);
      net.params[p] = keep;
      double fd = (up - dn) / (2.0 * h);
      double scale = std::max({std::abs(fd), std::abs(grad[p]), 1e-6});
      worst = std::max(worst, std::abs(fd - grad[p]) / scale);
    }
  }
  bool ok = worst <= 1e-4;
  out << (ok ? "ok  " : "FAIL") << " loss parameter gradients vs central differences"
      << " (worst rel " << worst << ")\n";
  return ok;
}

bool check_adam_oracle(std::ostream& out) {
  AdamState st = make_adam_state(1);
  std::vector<double> theta{0.0};
  std::vector<double> grad{1.0};
  LrSchedule sched{0.1, 0.0, DecayKind::InverseTime};
  adam_step(st, theta, grad, sched);
  double expected = -0.1 / (1.0 + 1e-8);
  double err = rel_err(theta[0], expected);
  bool ok = err <= 1e-12;
  out << (ok ? "ok  " : "FAIL") << " first optimizer step vs hand value (rel " << err
      << ")\n";
  return ok;
}

bool check_pde_identity(std::ostream& out) {
  PoissonProblem prob = poisson_sine_problem(3);
  Pcg32 rng(2024, 1);
  std::vector<double> pts = sample_interior(prob.domain, 1000, rng);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::span<const double> x(pts.data() + static_cast<std::size_t>(i) * 3, 3);
    double lhs = -prob.true_solution->laplacian(x);
    double rhs = prob.source->value(x);
    worst = std::max(worst, rel_err(lhs, rhs));
  }
  bool ok = worst <= 1e-12;
  out << (ok ? "ok  " : "FAIL")
      << " negative laplacian of the true solution equals the source (worst rel "
      << worst << ")\n";
  return ok;
}

bool check_residual_zero(std::ostream& out) {
  PoissonProblem prob = poisson_sine_problem(3);
  Pcg32 interior_rng(31, 1), boundary_rng(31, 2);
  std::vector<double> interior = sample_interior(prob.domain, 500, interior_rng);
  std::vector<double> boundary = sample_boundary(prob.domain, 30, boundary_rng);
  double loss = lse_loss(*prob.true_solution, prob, interior, boundary, 1000.0);
  ZeroField zero(3);
  double scale = lse_loss(zero, prob, interior, boundary, 1000.0);
  double rel = std::abs(loss) / scale;
  bool ok = rel <= 1e-10;
  out << (ok ? "ok  " : "FAIL")
      << " residual loss of the true solution vanishes (rel " << rel << ")\n";
  return ok;
}

}  // namespace

int run_selfchecks(std::ostream& out) {
  int failures = 0;
  failures += check_activation_fd(out) ? 0 : 1;
  failures += check_bundle_fd(out) ? 0 : 1;
  failures += check_loss_gradients(out) ? 0 : 1;
  failures += check_adam_oracle(out) ? 0 : 1;
  failures += check_pde_identity(out) ? 0 : 1;
  failures += check_residual_zero(out) ? 0 : 1;
  return failures;
}

}  // namespace mscale
