#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "mscale/errors.hpp"
#include "mscale/fields.hpp"
#include "mscale/losses.hpp"
#include "mscale/network.hpp"
#include "mscale/rng.hpp"
#include "mscale/sampling.hpp"

using mscale::Box;
using mscale::PoissonProblem;
using mscale::ScalarField;

namespace {

// Constant value with a fixed gradient and Laplacian everywhere.
class FlatField : public ScalarField {
 public:
  FlatField(int d, double value, std::vector<double> grad, double lap)
      : d_(d), value_(value), grad_(std::move(grad)), lap_(lap) {}
  int dim() const override { return d_; }
  double value(std::span<const double>) const override { return value_; }
  bool has_gradient() const override { return true; }
  void gradient(std::span<const double>, std::span<double> out) const override {
    std::copy(grad_.begin(), grad_.end(), out.begin());
  }
  bool has_laplacian() const override { return true; }
  double laplacian(std::span<const double>) const override { return lap_; }

 private:
  int d_;
  double value_;
  std::vector<double> grad_;
  double lap_;
};

class ValueOnlyField : public ScalarField {
 public:
  explicit ValueOnlyField(int d) : d_(d) {}
  int dim() const override { return d_; }
  double value(std::span<const double>) const override { return 1.0; }

 private:
  int d_;
};

PoissonProblem const_problem(int d, double g, double g_tilde) {
  PoissonProblem p;
  p.dim = d;
  p.domain = Box{d, 0.0, 1.0};
  p.source = std::make_shared<FlatField>(d, g, std::vector<double>(d, 0.0), 0.0);
  p.boundary_data =
      std::make_shared<FlatField>(d, g_tilde, std::vector<double>(d, 0.0), 0.0);
  return p;
}

}  // namespace

TEST_CASE("energy loss hand case") {
  // One interior point: |grad|^2/2 = 0.5 cancels g*h = 0.5. One boundary
  // point: (1 - 0.875)^2 * 1000, all powers of two, so the result is exact.
  PoissonProblem prob = const_problem(2, 0.5, 0.875);
  FlatField h(2, 1.0, {1.0, 0.0}, 0.0);
  std::vector<double> interior{0.5, 0.5};
  std::vector<double> boundary{0.0, 0.5};
  CHECK(mscale::ritz_loss(h, prob, interior, boundary, 1000.0) == 15.625);
}

TEST_CASE("residual loss hand case") {
  // Lap h + g = -0.25 + 0.5, exactly 0.0625 squared.
  PoissonProblem prob = const_problem(2, 0.5, 0.0);
  FlatField h(2, 0.0, {0.0, 0.0}, -0.25);
  std::vector<double> interior{0.5, 0.5};
  std::vector<double> boundary{0.0, 0.5};
  CHECK(mscale::lse_loss(h, prob, interior, boundary, 0.0) == 0.0625);
}

TEST_CASE("boundary penalty averages over the total boundary count") {
  PoissonProblem prob = const_problem(1, 0.0, 0.0);
  FlatField h(1, 1.0, {0.0}, 0.0);
  std::vector<double> interior{0.5};
  std::vector<double> boundary{0.0, 1.0};  // both endpoints
  // Interior term vanishes; two boundary points each contribute 1, and the
  // mean divides by 2, not by the per-face count.
  CHECK(mscale::ritz_loss(h, prob, interior, boundary, 8.0) == 8.0);
  CHECK(mscale::lse_loss(h, prob, interior, boundary, 8.0) == 8.0);
}

TEST_CASE("boundary penalty is linear in beta") {
  PoissonProblem prob = mscale::poisson_sine_problem(3);
  mscale::Pcg32 ri(3, 1), rb(3, 2);
  std::vector<double> interior = mscale::sample_interior(prob.domain, 40, ri);
  std::vector<double> boundary = mscale::sample_boundary(prob.domain, 5, rb);
  FlatField h(3, 0.7, {0.3, -0.2, 0.1}, 0.4);

  for (bool lse : {false, true}) {
    auto loss = [&](double beta) {
      return lse ? mscale::lse_loss(h, prob, interior, boundary, beta)
                 : mscale::ritz_loss(h, prob, interior, boundary, beta);
    };
    double base = loss(0.0);
    double unit = loss(1.0) - base;
    CHECK(loss(1000.0) - base ==
          doctest::Approx(1000.0 * unit).epsilon(1e-12));
  }
}

TEST_CASE("true solution zeroes the residual loss") {
  for (int d : {1, 3, 10}) {
    PoissonProblem prob = mscale::poisson_sine_problem(d);
    mscale::Pcg32 ri(7, 1), rb(7, 2);
    std::vector<double> interior = mscale::sample_interior(prob.domain, 200, ri);
    std::vector<double> boundary = mscale::sample_boundary(prob.domain, 10, rb);

    double loss =
        mscale::lse_loss(*prob.true_solution, prob, interior, boundary, 1000.0);
    mscale::ZeroField zero(d);
    double scale = mscale::lse_loss(zero, prob, interior, boundary, 1000.0);
    CHECK(std::abs(loss) <= 1e-10 * scale);
  }
}

TEST_CASE("zero field gives the plain quadrature of the data") {
  PoissonProblem prob = mscale::poisson_sine_problem(2);
  mscale::Pcg32 ri(9, 1), rb(9, 2);
  std::vector<double> interior = mscale::sample_interior(prob.domain, 64, ri);
  std::vector<double> boundary = mscale::sample_boundary(prob.domain, 8, rb);

  mscale::ZeroField zero(2);
  double got = mscale::lse_loss(zero, prob, interior, boundary, 1000.0);

  double gi = 0.0;
  for (int i = 0; i < 64; ++i) {
    std::span<const double> x(interior.data() + 2 * i, 2);
    double g = prob.source->value(x);
    gi += g * g;
  }
  int nb = static_cast<int>(boundary.size()) / 2;
  double gb = 0.0;
  for (int i = 0; i < nb; ++i) {
    std::span<const double> x(boundary.data() + 2 * i, 2);
    double g = prob.boundary_data->value(x);
    gb += g * g;
  }
  CHECK(got == doctest::Approx(gi / 64 + 1000.0 * gb / nb).epsilon(1e-13));
}

TEST_CASE("residual loss is never negative") {
  PoissonProblem prob = mscale::poisson_sine_problem(2);
  mscale::Pcg32 ri(11, 1), rb(11, 2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> interior = mscale::sample_interior(prob.domain, 32, ri);
    std::vector<double> boundary = mscale::sample_boundary(prob.domain, 4, rb);
    FlatField h(2, ri.uniform(-2, 2), {ri.uniform(-2, 2), ri.uniform(-2, 2)},
                ri.uniform(-2, 2));
    CHECK(mscale::lse_loss(h, prob, interior, boundary, 1000.0) >= 0.0);
  }
}

TEST_CASE("missing capabilities fail loudly") {
  PoissonProblem prob = mscale::poisson_sine_problem(2);
  mscale::Pcg32 ri(13, 1), rb(13, 2);
  std::vector<double> interior = mscale::sample_interior(prob.domain, 4, ri);
  std::vector<double> boundary = mscale::sample_boundary(prob.domain, 2, rb);

  ValueOnlyField flat(2);
  CHECK_THROWS_AS(mscale::ritz_loss(flat, prob, interior, boundary, 1.0),
                  mscale::CapabilityError);
  CHECK_THROWS_AS(mscale::lse_loss(flat, prob, interior, boundary, 1.0),
                  mscale::CapabilityError);
}

TEST_CASE("empty point sets are rejected") {
  PoissonProblem prob = mscale::poisson_sine_problem(2);
  mscale::Pcg32 rb(15, 2);
  std::vector<double> boundary = mscale::sample_boundary(prob.domain, 2, rb);
  std::vector<double> none;
  mscale::ZeroField zero(2);
  CHECK_THROWS_AS(mscale::ritz_loss(zero, prob, none, boundary, 1.0),
                  mscale::ShapeError);
  CHECK_THROWS_AS(mscale::lse_loss(zero, prob, boundary, none, 1.0),
                  mscale::ShapeError);
  CHECK_THROWS_AS(mscale::fit_mse_loss(zero, none, none, 2), mscale::ShapeError);
}

TEST_CASE("mse helpers match direct summation") {
  PoissonProblem prob = mscale::poisson_sine_problem(3);
  mscale::Pcg32 rng(17, 1);
  std::vector<double> pts = mscale::sample_interior(prob.domain, 10, rng);

  FlatField h(3, 0.25, {0, 0, 0}, 0.0);
  double got = mscale::mse_vs_true(h, *prob.true_solution, pts, 3);
  double want = 0.0;
  for (int i = 0; i < 10; ++i) {
    std::span<const double> x(pts.data() + 3 * i, 3);
    double e = 0.25 - prob.true_solution->value(x);
    want += e * e;
  }
  CHECK(got == doctest::Approx(want / 10).epsilon(1e-14));

  std::vector<double> labels(10);
  for (int i = 0; i < 10; ++i) labels[i] = rng.uniform(-1, 1);
  double fit = mscale::fit_mse_loss(h, pts, labels, 3);
  double wf = 0.0;
  for (double y : labels) wf += (0.25 - y) * (0.25 - y);
  CHECK(fit == doctest::Approx(wf / 10).epsilon(1e-14));
}
