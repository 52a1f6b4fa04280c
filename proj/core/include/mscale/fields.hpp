#pragma once

#include <memory>
#include <span>

namespace mscale {

/// Axis-aligned cube [lo, hi]^dim.
struct Box {
  int dim = 1;
  double lo = 0.0;
  double hi = 1.0;
};

/// A scalar function of a d-vector with optional first and second derivative
/// information. Asking for a derivative the field cannot provide throws
/// CapabilityError, so losses can state their needs and fail loudly.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual int dim() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual bool has_gradient() const { return false; }
  virtual void gradient(std::span<const double> x, std::span<double> out) const;
  virtual bool has_laplacian() const { return false; }
  virtual double laplacian(std::span<const double> x) const;
};

class ZeroField : public ScalarField {
 public:
  explicit ZeroField(int d) : d_(d) {}
  int dim() const override { return d_; }
  double value(std::span<const double>) const override { return 0.0; }
  bool has_gradient() const override { return true; }
  void gradient(std::span<const double>, std::span<double> out) const override;
  bool has_laplacian() const override { return true; }
  double laplacian(std::span<const double>) const override { return 0.0; }

 private:
  int d_;
};

/// -eps * div(grad u) + V u = g on domain, u = g_tilde on the boundary.
struct PoissonProblem {
  int dim = 1;
  Box domain{1, 0.0, 1.0};
  std::shared_ptr<const ScalarField> source;         // g
  std::shared_ptr<const ScalarField> boundary_data;  // g_tilde
  std::shared_ptr<const ScalarField> true_solution;  // optional
  std::shared_ptr<const ScalarField> potential;      // V, null means 0
  double epsilon = 1.0;
};

/// The mixed-frequency test problem on [0,1]^d:
///   g      = sum_i sin(x_i) + 100 sin(10 x_i)
///   u_true = sum_i sin(x_i) + sin(10 x_i)      (also the boundary data)
/// u_true exposes analytic gradient and Laplacian, and -Lap u_true = g holds
/// identically, so it doubles as an exact oracle.
PoissonProblem poisson_sine_problem(int d);

}  // namespace mscale
