#include "mscale/fields.hpp"

#include <cmath>

#include "mscale/errors.hpp"

namespace mscale {

void ScalarField::gradient(std::span<const double>, std::span<double>) const {
  throw CapabilityError("field does not expose a gradient");
}

double ScalarField::laplacian(std::span<const double>) const {
  throw CapabilityError("field does not expose a laplacian");
}

void ZeroField::gradient(std::span<const double>, std::span<double> out) const {
  for (auto& v : out) v = 0.0;
}

namespace {

// u(x) = sum_i sin(x_i) + sin(10 x_i); smooth, with analytic derivatives.
class SineMixSolution : public ScalarField {
 public:
  explicit SineMixSolution(int d) : d_(d) {}
  int dim() const override { return d_; }
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (int i = 0; i < d_; ++i) s += std::sin(x[i]) + std::sin(10.0 * x[i]);
    return s;
  }
  bool has_gradient() const override { return true; }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    for (int i = 0; i < d_; ++i)
      out[i] = std::cos(x[i]) + 10.0 * std::cos(10.0 * x[i]);
  }
  bool has_laplacian() const override { return true; }
  double laplacian(std::span<const double> x) const override {
    double s = 0.0;
    for (int i = 0; i < d_; ++i) s += -std::sin(x[i]) - 100.0 * std::sin(10.0 * x[i]);
    return s;
  }

 private:
  int d_;
};

// g(x) = sum_i sin(x_i) + 100 sin(10 x_i) = -Lap u for the field above.
class SineMixSource : public ScalarField {
 public:
  explicit SineMixSource(int d) : d_(d) {}
  int dim() const override { return d_; }
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (int i = 0; i < d_; ++i) s += std::sin(x[i]) + 100.0 * std::sin(10.0 * x[i]);
    return s;
  }

 private:
  int d_;
};

}  // namespace

PoissonProblem poisson_sine_problem(int d) {
  if (d < 1) throw ShapeError("problem dimension must be positive");
  PoissonProblem p;
  p.dim = d;
  p.domain = Box{d, 0.0, 1.0};
  auto solution = std::make_shared<SineMixSolution>(d);
  p.source = std::make_shared<SineMixSource>(d);
  p.boundary_data = solution;
  p.true_solution = solution;
  p.epsilon = 1.0;
  return p;
}

}  // namespace mscale
