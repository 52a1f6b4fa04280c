#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "mscale/activation.hpp"
#include "mscale/checkpoint.hpp"
#include "mscale/errors.hpp"
#include "mscale/network.hpp"
#include "mscale/rng.hpp"

using mscale::Activation;
using mscale::DerivBundle;
using mscale::EvalMode;
using mscale::InitScheme;
using mscale::Network;
using mscale::NetworkSpec;
using mscale::Workspace;

namespace {

// Straight per-point evaluation with plain loops; shares nothing with the
// batched path it checks.
double ref_forward(const Network& net, std::span<const double> x) {
  std::vector<double> z(x.begin(), x.end());
  std::vector<double> a;
  for (int l = 0; l < net.layer_count(); ++l) {
    int nin = net.width_in(l), nout = net.width_out(l);
    a.assign(nout, 0.0);
    const double* W = net.W(l);
    const double* b = net.b(l);
    for (int j = 0; j < nout; ++j) {
      double dot = 0.0;
      for (int k = 0; k < nin; ++k) dot += W[j * nin + k] * z[k];
      a[j] = l == 0 ? net.scales[j] * dot + b[j] : dot + b[j];
    }
    if (l == net.layer_count() - 1) return a[0];
    z.resize(nout);
    for (int j = 0; j < nout; ++j) z[j] = act_value(net.activation, a[j]);
  }
  return 0.0;
}

std::vector<double> random_point(int d, double lo, double hi, mscale::Pcg32& rng) {
  std::vector<double> x(d);
  for (double& v : x) v = rng.uniform(lo, hi);
  return x;
}

double rel_diff(double a, double b) {
  double scale = std::max({std::abs(a), std::abs(b), 1e-9});
  return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("scale vector splits neurons into near-equal parts") {
  CHECK(mscale::build_scale_vector(5, 1) == std::vector<double>{1, 1, 1, 1, 1});
  CHECK(mscale::build_scale_vector(6, 3) == std::vector<double>{1, 1, 2, 2, 3, 3});
  // Remainder neurons go to the earliest parts.
  CHECK(mscale::build_scale_vector(7, 3) == std::vector<double>{1, 1, 1, 2, 2, 3, 3});
  CHECK(mscale::build_scale_vector(5, 5) == std::vector<double>{1, 2, 3, 4, 5});
  CHECK_THROWS_AS(mscale::build_scale_vector(4, 5), mscale::ShapeError);
  CHECK_THROWS_AS(mscale::build_scale_vector(4, 0), mscale::ShapeError);
}

TEST_CASE("parameter layout walks weights then biases per layer") {
  NetworkSpec spec{{3, 4, 2, 1}, Activation::Srelu, 2, {}, InitScheme::D1};
  Network net = mscale::make_network(spec, 7);
  CHECK(net.param_count() == (3 * 4 + 4) + (4 * 2 + 2) + (2 * 1 + 1));
  CHECK(net.weight_offset(0) == 0);
  CHECK(net.bias_offset(0) == 12);
  CHECK(net.weight_offset(1) == 16);
  CHECK(net.bias_offset(2) == net.param_count() - 1);
  CHECK(net.scales == std::vector<double>{1, 1, 2, 2});
}

TEST_CASE("initialization is seed-deterministic and the schemes differ by a per-layer factor") {
  NetworkSpec d1{{2, 5, 1}, Activation::Srelu2, 1, {}, InitScheme::D1};
  NetworkSpec d2 = d1;
  d2.init = InitScheme::D2;

  Network a = mscale::make_network(d1, 42);
  Network b = mscale::make_network(d1, 42);
  Network c = mscale::make_network(d1, 43);
  CHECK(a.params == b.params);
  CHECK(a.params != c.params);

  Network w = mscale::make_network(d2, 42);
  // Same normal draws, different stddev: the ratio is sqrt((nin+nout)/2).
  for (int l = 0; l < a.layer_count(); ++l) {
    double spread = 2.0 / (a.width_in(l) + a.width_out(l));
    double want = std::sqrt(spread) / spread;
    for (std::size_t i = a.weight_offset(l);
         i < a.bias_offset(l) + static_cast<std::size_t>(a.width_out(l)); ++i) {
      if (a.params[i] == 0.0) continue;
      CHECK(w.params[i] / a.params[i] == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("batched forward matches a naive per-point evaluation") {
  mscale::Pcg32 rng(404, 2);
  NetworkSpec spec{{2, 7, 5, 1}, Activation::Srelu2, 3, {}, InitScheme::D2};
  Network net = mscale::make_network(spec, 99);

  const int m = 9;
  std::vector<double> X;
  for (int i = 0; i < m; ++i) {
    auto x = random_point(2, -1.0, 1.0, rng);
    X.insert(X.end(), x.begin(), x.end());
  }
  std::vector<double> values(m);
  Workspace ws;
  mscale::forward_batch(net, X.data(), m, EvalMode::Value, ws, values.data(),
                        nullptr, nullptr);
  for (int i = 0; i < m; ++i) {
    std::span<const double> x(X.data() + 2 * i, 2);
    CHECK(rel_diff(values[i], ref_forward(net, x)) <= 1e-13);
    CHECK(values[i] == mscale::forward(net, x));
  }
}

TEST_CASE("derivative bundle agrees with finite differences") {
  NetworkSpec spec{{3, 10, 6, 1}, Activation::Srelu3, 4, {}, InitScheme::D2};
  Network net = mscale::make_network(spec, 5);
  mscale::Pcg32 rng(5, 17);

  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_point(3, 0.05, 0.45, rng);
    DerivBundle bundle = mscale::forward_bundle(net, x);
    CHECK(bundle.value == mscale::forward(net, x));

    double hg = 1e-5;
    for (int k = 0; k < 3; ++k) {
      auto xp = x, xm = x;
      xp[k] += hg;
      xm[k] -= hg;
      double fd = (mscale::forward(net, xp) - mscale::forward(net, xm)) / (2 * hg);
      CHECK(rel_diff(bundle.grad[k], fd) <= 1e-5);
    }

    double hl = 1e-4, lap = 0.0;
    double f0 = mscale::forward(net, x);
    for (int k = 0; k < 3; ++k) {
      auto xp = x, xm = x;
      xp[k] += hl;
      xm[k] -= hl;
      lap += (mscale::forward(net, xp) - 2 * f0 + mscale::forward(net, xm)) / (hl * hl);
    }
    CHECK(rel_diff(bundle.laplacian, lap) <= 1e-3);
  }
}

TEST_CASE("gradient projects correctly on random directions") {
  NetworkSpec spec{{4, 8, 1}, Activation::Srelu2, 2, {}, InitScheme::D2};
  Network net = mscale::make_network(spec, 21);
  mscale::Pcg32 rng(22, 1);

  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_point(4, 0.05, 0.45, rng);
    auto v = random_point(4, -1.0, 1.0, rng);
    DerivBundle bundle = mscale::forward_bundle(net, x);
    double dot = 0.0;
    for (int k = 0; k < 4; ++k) dot += bundle.grad[k] * v[k];

    double h = 1e-6;
    auto xp = x, xm = x;
    for (int k = 0; k < 4; ++k) {
      xp[k] += h * v[k];
      xm[k] -= h * v[k];
    }
    double fd = (mscale::forward(net, xp) - mscale::forward(net, xm)) / (2 * h);
    CHECK(rel_diff(dot, fd) <= 1e-5);
  }
}

TEST_CASE("scales can be absorbed into the first weight rows") {
  NetworkSpec spec{{3, 8, 1}, Activation::Srelu, 5, {}, InitScheme::D2};
  Network net = mscale::make_network(spec, 31);

  Network absorbed = net;
  for (int j = 0; j < 8; ++j) {
    for (int k = 0; k < 3; ++k) absorbed.W(0)[j * 3 + k] *= net.scales[j];
    absorbed.scales[j] = 1.0;
  }

  // Rounding differs (k*(sum w x) vs sum (k*w) x), so compare against the
  // output scale over the sample, not pointwise values that may cancel to 0.
  mscale::Pcg32 rng(31, 9);
  double scale = 0.0, worst_abs = 0.0;
  for (int i = 0; i < 1000; ++i) {
    auto x = random_point(3, -1.0, 1.0, rng);
    double a = mscale::forward(net, x);
    double b = mscale::forward(absorbed, x);
    scale = std::max({scale, std::abs(a), std::abs(b)});
    worst_abs = std::max(worst_abs, std::abs(a - b));
  }
  CHECK(scale > 0.0);
  CHECK(worst_abs <= 1e-13 * scale);
}

TEST_CASE("outside every first-layer slab the output is exactly the final bias") {
  // One hidden layer of bumps: sigma(K_j w_j . x + b_j) vanishes unless
  // 0 <= K_j w_j . x + b_j < 1, so far outside all slabs only b_L remains.
  NetworkSpec spec{{2, 3, 1}, Activation::Srelu, 3, {}, InitScheme::D1};
  Network net = mscale::make_network(spec, 1);
  double W0[6] = {1, 0, 0, 1, 1, 1};
  std::copy(W0, W0 + 6, net.W(0));
  net.b(0)[0] = net.b(0)[1] = net.b(0)[2] = 0.0;
  net.W(1)[0] = 4.0;
  net.W(1)[1] = 5.0;
  net.W(1)[2] = 6.0;
  net.b(1)[0] = 7.0;

  CHECK(mscale::forward(net, std::vector<double>{10.0, 10.0}) == 7.0);
  CHECK(mscale::forward(net, std::vector<double>{-5.0, 3.0}) == 7.0);
  CHECK(mscale::forward(net, std::vector<double>{0.25, -2.0}) != 7.0);
}

TEST_CASE("seeded parameter gradients match finite differences") {
  NetworkSpec spec{{2, 6, 5, 1}, Activation::Srelu3, 2, {}, InitScheme::D2};
  Network net = mscale::make_network(spec, 77);
  mscale::Pcg32 rng(78, 3);

  const int m = 3, d = 2;
  std::vector<double> X;
  for (int i = 0; i < m; ++i) {
    auto x = random_point(d, 0.05, 0.45, rng);
    X.insert(X.end(), x.begin(), x.end());
  }
  std::vector<double> wv(m), wg(m * d), wl(m);
  for (double& v : wv) v = rng.uniform(-1.0, 1.0);
  for (double& v : wg) v = rng.uniform(-1.0, 1.0);
  for (double& v : wl) v = rng.uniform(-1.0, 1.0);

  Workspace ws;
  std::vector<double> values(m), grads(m * d), laps(m);
  mscale::forward_batch(net, X.data(), m, EvalMode::GradLap, ws, values.data(),
                        grads.data(), laps.data());
  std::vector<double> grad(net.param_count(), 0.0);
  mscale::backward_batch(net, X.data(), m, EvalMode::GradLap, ws, wv.data(),
                         wg.data(), wl.data(), grad);

  auto objective = [&](Network& n) {
    Workspace w2;
    std::vector<double> v(m), g(m * d), l(m);
    mscale::forward_batch(n, X.data(), m, EvalMode::GradLap, w2, v.data(),
                          g.data(), l.data());
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += wv[i] * v[i] + wl[i] * l[i];
    for (int i = 0; i < m * d; ++i) s += wg[i] * g[i];
    return s;
  };

  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t p = 0; p < net.param_count(); ++p) {
    double keep = net.params[p];
    net.params[p] = keep + h;
    double up = objective(net);
    net.params[p] = keep - h;
    double dn = objective(net);
    net.params[p] = keep;
    double fd = (up - dn) / (2 * h);
    double scale = std::max({std::abs(fd), std::abs(grad[p]), 1e-6});
    worst = std::max(worst, std::abs(fd - grad[p]) / scale);
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("workspace survives shape and mode changes") {
  NetworkSpec spec{{2, 6, 1}, Activation::Srelu2, 2, {}, InitScheme::D2};
  Network net = mscale::make_network(spec, 13);
  mscale::Pcg32 rng(13, 13);

  std::vector<double> X5, X3;
  for (int i = 0; i < 5 * 2; ++i) X5.push_back(rng.uniform(0.0, 0.5));
  for (int i = 0; i < 3 * 2; ++i) X3.push_back(rng.uniform(0.0, 0.5));

  Workspace ws;
  std::vector<double> v1(5), g1(10), l1(5);
  mscale::forward_batch(net, X5.data(), 5, EvalMode::GradLap, ws, v1.data(),
                        g1.data(), l1.data());
  std::vector<double> v2(3);
  mscale::forward_batch(net, X3.data(), 3, EvalMode::Value, ws, v2.data(),
                        nullptr, nullptr);
  std::vector<double> v3(5), g3(10), l3(5);
  mscale::forward_batch(net, X5.data(), 5, EvalMode::GradLap, ws, v3.data(),
                        g3.data(), l3.data());
  CHECK(v1 == v3);
  CHECK(g1 == g3);
  CHECK(l1 == l3);
}

TEST_CASE("checkpoint round trip is exact") {
  NetworkSpec spec{{3, 7, 4, 1}, Activation::Srelu3, 3, {}, InitScheme::D1};
  Network net = mscale::make_network(spec, 2024);

  auto dir = std::filesystem::temp_directory_path() / "mscale_ckpt_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "net.txt").string();
  mscale::save_network(net, path);
  Network back = mscale::load_network(path);

  CHECK(back.widths == net.widths);
  CHECK(back.activation == net.activation);
  CHECK(back.scales == net.scales);
  CHECK(back.params == net.params);

  std::ofstream bad(dir / "bad.txt");
  bad << "mscale-net 9\n";
  bad.close();
  CHECK_THROWS_AS(mscale::load_network((dir / "bad.txt").string()),
                  mscale::ConfigError);
  CHECK_THROWS_AS(mscale::load_network((dir / "missing.txt").string()),
                  mscale::ConfigError);
  std::filesystem::remove_all(dir);
}
