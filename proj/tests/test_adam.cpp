#include <doctest.h>

#include <cmath>
#include <vector>

#include "mscale/adam.hpp"
#include "mscale/errors.hpp"
#include "mscale/rng.hpp"

using mscale::AdamState;
using mscale::DecayKind;
using mscale::LrSchedule;

TEST_CASE("schedules evaluate their closed forms") {
  LrSchedule inv{5e-5, 2e-7, DecayKind::InverseTime};
  CHECK(mscale::lr_at(inv, 0) == 5e-5);
  CHECK(mscale::lr_at(inv, 1000000) == doctest::Approx(5e-5 / 1.2).epsilon(1e-15));

  LrSchedule lin{1e-3, 1e-5, DecayKind::Linear};
  CHECK(mscale::lr_at(lin, 0) == 1e-3);
  CHECK(mscale::lr_at(lin, 50000) == doctest::Approx(1e-3 * 0.5).epsilon(1e-12));

  LrSchedule expo{1e-3, 1e-4, DecayKind::Exponential};
  CHECK(mscale::lr_at(expo, 0) == 1e-3);
  CHECK(mscale::lr_at(expo, 2) ==
        doctest::Approx(1e-3 * (1 - 1e-4) * (1 - 1e-4)).epsilon(1e-15));
}

TEST_CASE("first step matches the hand-computed update") {
  // Unit gradient, lr 0.1: mhat = g, vhat = g^2, step = -lr/(1 + eps).
  AdamState st = mscale::make_adam_state(1);
  std::vector<double> theta{0.0};
  std::vector<double> grad{1.0};
  LrSchedule sched{0.1, 0.0, DecayKind::InverseTime};
  double lr = mscale::adam_step(st, theta, grad, sched);
  CHECK(lr == 0.1);
  CHECK(st.t == 1);
  CHECK(theta[0] == doctest::Approx(-0.1 / (1.0 + 1e-8)).epsilon(1e-14));

  // Sign symmetry on the next parameter-free check: a fresh state and a
  // negated gradient move the same distance the other way.
  AdamState st2 = mscale::make_adam_state(1);
  std::vector<double> theta2{0.0};
  std::vector<double> ngrad{-1.0};
  mscale::adam_step(st2, theta2, ngrad, sched);
  CHECK(theta2[0] == -theta[0]);
}

TEST_CASE("zero gradient leaves parameters in place") {
  AdamState st = mscale::make_adam_state(3);
  std::vector<double> theta{1.0, -2.0, 0.5};
  std::vector<double> grad{0.0, 0.0, 0.0};
  LrSchedule sched{0.1, 0.0, DecayKind::InverseTime};
  mscale::adam_step(st, theta, grad, sched);
  CHECK(theta == std::vector<double>{1.0, -2.0, 0.5});
  CHECK(st.t == 1);
}

TEST_CASE("step size never exceeds a small multiple of the learning rate") {
  // The bias-corrected ratio mhat/sqrt(vhat) is bounded near 1 for any
  // gradient sequence, so each step stays within a few lr.
  AdamState st = mscale::make_adam_state(4);
  std::vector<double> theta{0, 0, 0, 0};
  LrSchedule sched{1e-3, 1e-6, DecayKind::InverseTime};
  mscale::Pcg32 rng(55, 1);
  std::vector<double> prev = theta;
  for (int step = 0; step < 200; ++step) {
    std::vector<double> grad(4);
    for (double& g : grad) g = rng.uniform(-10.0, 10.0) * std::pow(10.0, rng.uniform(-3, 3));
    double lr = mscale::adam_step(st, theta, grad, sched);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(theta[i] - prev[i]) <= 10.0 * lr);
      CHECK(std::isfinite(theta[i]));
    }
    prev = theta;
  }
}

TEST_CASE("learning rate follows the schedule as steps accumulate") {
  AdamState st = mscale::make_adam_state(1);
  std::vector<double> theta{0.0};
  std::vector<double> grad{1.0};
  LrSchedule sched{1e-2, 1e-3, DecayKind::InverseTime};
  for (int step = 1; step <= 5; ++step) {
    double lr = mscale::adam_step(st, theta, grad, sched);
    CHECK(lr == mscale::lr_at(sched, step));
  }
}

TEST_CASE("constructor and step validate their inputs") {
  CHECK_THROWS_AS(mscale::make_adam_state(2, 1.0), mscale::ConfigError);
  CHECK_THROWS_AS(mscale::make_adam_state(2, 0.9, 1.5), mscale::ConfigError);
  CHECK_THROWS_AS(mscale::make_adam_state(2, 0.9, 0.999, 0.0), mscale::ConfigError);

  AdamState st = mscale::make_adam_state(2);
  std::vector<double> theta{0.0, 0.0};
  std::vector<double> grad{1.0};
  LrSchedule sched{0.1, 0.0, DecayKind::InverseTime};
  CHECK_THROWS_AS(mscale::adam_step(st, theta, grad, sched), mscale::ShapeError);
}
