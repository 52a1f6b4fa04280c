#include "mscale/losses.hpp"

#include <vector>

#include "mscale/errors.hpp"

namespace mscale {

namespace {

int point_count(std::span<const double> flat, int dim, const char* what) {
  if (dim < 1) throw ShapeError("dimension must be positive");
  if (flat.empty())
    throw ShapeError(std::string(what) + " set must not be empty");
  if (flat.size() % dim != 0)
    throw ShapeError(std::string(what) + " set length is not a multiple of the dimension");
  return static_cast<int>(flat.size() / dim);
}

double boundary_term(const ScalarField& h, const PoissonProblem& prob,
                     std::span<const double> boundary, double beta) {
  int d = prob.dim;
  int nb = point_count(boundary, d, "boundary");
  const ScalarField& gt = *prob.boundary_data;
  double acc = 0.0;
  for (int i = 0; i < nb; ++i) {
    std::span<const double> x(boundary.data() + static_cast<std::size_t>(i) * d, d);
    double e = h.value(x) - gt.value(x);
    acc += e * e;
  }
  return beta * acc / nb;
}

}  // namespace

double ritz_loss(const ScalarField& h, const PoissonProblem& prob,
                 std::span<const double> interior, std::span<const double> boundary,
                 double beta) {
  if (!h.has_gradient())
    throw CapabilityError("ritz loss needs a field with a gradient");
  int d = prob.dim;
  int n = point_count(interior, d, "interior");
  const ScalarField& g = *prob.source;
  const ScalarField* V = prob.potential.get();
  std::vector<double> gr(static_cast<std::size_t>(d));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    std::span<const double> x(interior.data() + static_cast<std::size_t>(i) * d, d);
    h.gradient(x, gr);
    double gg = 0.0;
    for (int k = 0; k < d; ++k) gg += gr[k] * gr[k];
    double hv = h.value(x);
    double vv = V ? V->value(x) : 0.0;
    acc += 0.5 * prob.epsilon * gg + vv * hv * hv - g.value(x) * hv;
  }
  return acc / n + boundary_term(h, prob, boundary, beta);
}

double lse_loss(const ScalarField& h, const PoissonProblem& prob,
                std::span<const double> interior, std::span<const double> boundary,
                double beta) {
  if (!h.has_laplacian())
    throw CapabilityError("lse loss needs a field with a laplacian");
  int d = prob.dim;
  int n = point_count(interior, d, "interior");
  const ScalarField& g = *prob.source;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    std::span<const double> x(interior.data() + static_cast<std::size_t>(i) * d, d);
    double r = h.laplacian(x) + g.value(x);
    acc += r * r;
  }
  return acc / n + boundary_term(h, prob, boundary, beta);
}

double fit_mse_loss(const ScalarField& h, std::span<const double> inputs,
                    std::span<const double> labels, int dim) {
  int n = point_count(inputs, dim, "input");
  if (labels.size() != static_cast<std::size_t>(n))
    throw ShapeError("inputs and labels disagree in length");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    std::span<const double> x(inputs.data() + static_cast<std::size_t>(i) * dim, dim);
    double e = h.value(x) - labels[i];
    acc += e * e;
  }
  return acc / n;
}

double mse_vs_true(const ScalarField& h, const ScalarField& reference,
                   std::span<const double> points, int dim) {
  int n = point_count(points, dim, "evaluation");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    std::span<const double> x(points.data() + static_cast<std::size_t>(i) * dim, dim);
    double e = h.value(x) - reference.value(x);
    acc += e * e;
  }
  return acc / n;
}

}  // namespace mscale
