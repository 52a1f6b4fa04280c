#include "mscale/network.hpp"

#include <cmath>
#include <cstring>

#include "mscale/errors.hpp"
#include "mscale/rng.hpp"

namespace mscale {

std::vector<double> build_scale_vector(int n1, int parts) {
  if (n1 < 1) throw ShapeError("scale vector needs at least one neuron");
  if (parts < 1 || parts > n1)
    throw ShapeError("scale parts must lie in [1, first hidden width]");
  std::vector<double> k(static_cast<std::size_t>(n1));
  int base = n1 / parts;
  int rem = n1 % parts;
  std::size_t at = 0;
  for (int p = 0; p < parts; ++p) {
    int len = base + (p < rem ? 1 : 0);
    for (int i = 0; i < len; ++i) k[at++] = static_cast<double>(p + 1);
  }
  return k;
}

std::size_t Network::weight_offset(int l) const {
  std::size_t off = 0;
  for (int k = 0; k < l; ++k)
    off += static_cast<std::size_t>(widths[k + 1]) * widths[k] + widths[k + 1];
  return off;
}

std::size_t Network::bias_offset(int l) const {
  return weight_offset(l) + static_cast<std::size_t>(widths[l + 1]) * widths[l];
}

std::size_t Network::param_count() const { return weight_offset(layer_count()); }

void check_network(const Network& net) {
  if (net.widths.size() < 3) throw ShapeError("network needs at least one hidden layer");
  for (int w : net.widths)
    if (w < 1) throw ShapeError("layer widths must be positive");
  if (net.widths.back() != 1) throw ShapeError("output width must be 1");
  if (net.scales.size() != static_cast<std::size_t>(net.widths[1]))
    throw ShapeError("scale vector length must equal the first hidden width");
  for (double s : net.scales)
    if (!(s > 0.0)) throw ShapeError("scales must be positive");
  if (net.params.size() != net.param_count())
    throw ShapeError("parameter vector length disagrees with widths");
}

Network make_network(const NetworkSpec& spec, std::uint64_t seed) {
  Network net;
  net.widths = spec.widths;
  net.activation = spec.activation;
  if (spec.widths.size() < 3) throw ShapeError("network needs at least one hidden layer");
  int n1 = spec.widths[1];
  if (!spec.scale_list.empty()) {
    if (spec.scale_list.size() != static_cast<std::size_t>(n1))
      throw ShapeError("explicit scale list length must equal the first hidden width");
    net.scales = spec.scale_list;
  } else {
    net.scales = build_scale_vector(n1, spec.scale_parts);
  }
  net.params.assign(net.param_count(), 0.0);
  check_network(net);

  Pcg32 rng = make_stream(seed, SubStream::Init);
  for (int l = 0; l < net.layer_count(); ++l) {
    double spread = 2.0 / (net.width_in(l) + net.width_out(l));
    double stddev = spec.init == InitScheme::D1 ? spread : std::sqrt(spread);
    double* w = net.W(l);
    std::size_t nw = static_cast<std::size_t>(net.width_out(l)) * net.width_in(l);
    for (std::size_t i = 0; i < nw; ++i) w[i] = rng.normal(0.0, stddev);
    double* bb = net.b(l);
    for (int i = 0; i < net.width_out(l); ++i) bb[i] = rng.normal(0.0, stddev);
  }
  return net;
}

namespace {

void ensure(Mat& mat, int r, int c) {
  if (mat.rows != r || mat.cols != c) mat = Mat(r, c);
}

bool needs_grad(EvalMode m) { return m != EvalMode::Value; }
bool needs_lap(EvalMode m) { return m == EvalMode::GradLap; }

}  // namespace

void Workspace::prepare(const Network& net, int batch, EvalMode mo) {
  m = batch;
  d = net.input_dim();
  mode = mo;
  int H = net.layer_count() - 1;
  A.resize(H);
  Z.resize(H);
  if (needs_grad(mo)) {
    G.resize(H);
    J.resize(H);
    R.resize(H);
  }
  if (needs_lap(mo)) {
    Lam.resize(H);
    Mu.resize(H);
  }
  for (int h = 0; h < H; ++h) {
    int n = net.widths[h + 1];
    ensure(A[h], m, n);
    ensure(Z[h], m, n);
    if (needs_grad(mo)) {
      ensure(G[h], m * d, n);
      ensure(J[h], m * d, n);
      ensure(R[h], m, n);
    }
    if (needs_lap(mo)) {
      ensure(Lam[h], m, n);
      ensure(Mu[h], m, n);
    }
  }
}

namespace {

// Z = act(A); J = act' ⊙ G; R = sum_k G_k^2; Mu = act'' R + act' Lam.
void activation_forward(const Network& net, Workspace& ws, int h) {
  Activation f = net.activation;
  int m = ws.m, d = ws.d;
  const Mat& A = ws.A[h];
  Mat& Z = ws.Z[h];
  int n = A.cols;
  for (int i = 0; i < m; ++i) {
    const double* a = A.row(i);
    double* z = Z.row(i);
    for (int j = 0; j < n; ++j) z[j] = act_value(f, a[j]);
  }
  if (!needs_grad(ws.mode)) return;
  Mat& G = ws.G[h];
  Mat& J = ws.J[h];
  Mat& R = ws.R[h];
  std::vector<double> s1(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    const double* a = A.row(i);
    double* r = R.row(i);
    for (int j = 0; j < n; ++j) {
      s1[j] = act_deriv1(f, a[j]);
      r[j] = 0.0;
    }
    for (int k = 0; k < d; ++k) {
      const double* g = G.row(i * d + k);
      double* jj = J.row(i * d + k);
      for (int j = 0; j < n; ++j) {
        double gv = g[j];
        jj[j] = s1[j] * gv;
        r[j] += gv * gv;
      }
    }
    if (needs_lap(ws.mode)) {
      const double* lam = ws.Lam[h].row(i);
      double* mu = ws.Mu[h].row(i);
      for (int j = 0; j < n; ++j)
        mu[j] = act_deriv2(f, a[j]) * r[j] + s1[j] * lam[j];
    }
  }
}

}  // namespace

void forward_batch(const Network& net, const double* X, int m, EvalMode mode,
                   Workspace& ws, double* values, double* grads,
                   double* laplacians) {
  check_network(net);
  if (m < 1) throw ShapeError("batch must contain at least one point");
  if (values == nullptr) throw ShapeError("values output is required");
  if (needs_grad(mode) && grads == nullptr)
    throw ShapeError("grads output is required in gradient mode");
  if (needs_lap(mode) && laplacians == nullptr)
    throw ShapeError("laplacians output is required in laplacian mode");
  ws.prepare(net, m, mode);

  int d = net.input_dim();
  int H = net.layer_count() - 1;
  int n1 = net.widths[1];
  const double* W0 = net.W(0);
  const double* b0 = net.b(0);
  const double* K = net.scales.data();

  gemm_nt(m, n1, d, X, W0, ws.A[0].a.data());
  for (int i = 0; i < m; ++i) {
    double* row = ws.A[0].row(i);
    for (int j = 0; j < n1; ++j) row[j] = K[j] * row[j] + b0[j];
  }
  if (needs_grad(mode)) {
    Mat& G0 = ws.G[0];
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < d; ++k) {
        double* row = G0.row(i * d + k);
        for (int j = 0; j < n1; ++j) row[j] = K[j] * W0[static_cast<std::size_t>(j) * d + k];
      }
  }
  if (needs_lap(mode)) ws.Lam[0].zero();

  for (int h = 0; h < H; ++h) {
    activation_forward(net, ws, h);
    int nin = net.widths[h + 1];
    if (h + 1 < H) {
      int nout = net.widths[h + 2];
      const double* Wl = net.W(h + 1);
      const double* bl = net.b(h + 1);
      gemm_nt(m, nout, nin, ws.Z[h].a.data(), Wl, ws.A[h + 1].a.data());
      for (int i = 0; i < m; ++i) {
        double* row = ws.A[h + 1].row(i);
        for (int j = 0; j < nout; ++j) row[j] += bl[j];
      }
      if (needs_grad(mode))
        gemm_nt(m * d, nout, nin, ws.J[h].a.data(), Wl, ws.G[h + 1].a.data());
      if (needs_lap(mode))
        gemm_nt(m, nout, nin, ws.Mu[h].a.data(), Wl, ws.Lam[h + 1].a.data());
    } else {
      const double* WL = net.W(H);
      double bL = net.b(H)[0];
      gemm_nt(m, 1, nin, ws.Z[h].a.data(), WL, values);
      for (int i = 0; i < m; ++i) values[i] += bL;
      if (needs_grad(mode)) gemm_nt(m * d, 1, nin, ws.J[h].a.data(), WL, grads);
      if (needs_lap(mode)) gemm_nt(m, 1, nin, ws.Mu[h].a.data(), WL, laplacians);
    }
  }
}

namespace {

// In place: (zbar, jbar, mubar) in (bA, bG, bL) become the bars of the
// pre-activation triple. Sequential over points; order never varies.
void activation_backward(const Network& net, Workspace& ws, int h) {
  Activation f = net.activation;
  int m = ws.m, d = ws.d;
  const Mat& A = ws.A[h];
  int n = A.cols;
  bool grad = needs_grad(ws.mode);
  bool lap = needs_lap(ws.mode);
  std::vector<double> s1(static_cast<std::size_t>(n)), s2, s3, dot;
  if (grad) {
    s2.resize(static_cast<std::size_t>(n));
    dot.resize(static_cast<std::size_t>(n));
  }
  if (lap) s3.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    const double* a = A.row(i);
    for (int j = 0; j < n; ++j) s1[j] = act_deriv1(f, a[j]);
    if (grad)
      for (int j = 0; j < n; ++j) s2[j] = act_deriv2(f, a[j]);
    if (lap)
      for (int j = 0; j < n; ++j) s3[j] = act_deriv3(f, a[j]);

    if (grad) {
      for (int j = 0; j < n; ++j) dot[j] = 0.0;
      for (int k = 0; k < d; ++k) {
        const double* jb = ws.bG[h].row(i * d + k);
        const double* g = ws.G[h].row(i * d + k);
        for (int j = 0; j < n; ++j) dot[j] += jb[j] * g[j];
      }
      const double* mub = lap ? ws.bL[h].row(i) : nullptr;
      for (int k = 0; k < d; ++k) {
        double* jb = ws.bG[h].row(i * d + k);
        const double* g = ws.G[h].row(i * d + k);
        if (lap) {
          for (int j = 0; j < n; ++j)
            jb[j] = jb[j] * s1[j] + 2.0 * mub[j] * s2[j] * g[j];
        } else {
          for (int j = 0; j < n; ++j) jb[j] *= s1[j];
        }
      }
    }

    double* zb = ws.bA[h].row(i);
    if (lap) {
      double* mub = ws.bL[h].row(i);
      const double* r = ws.R[h].row(i);
      const double* lam = ws.Lam[h].row(i);
      for (int j = 0; j < n; ++j) {
        double mu = mub[j];
        zb[j] = zb[j] * s1[j] + dot[j] * s2[j] + mu * (s3[j] * r[j] + s2[j] * lam[j]);
        mub[j] = mu * s1[j];
      }
    } else if (grad) {
      for (int j = 0; j < n; ++j) zb[j] = zb[j] * s1[j] + dot[j] * s2[j];
    } else {
      for (int j = 0; j < n; ++j) zb[j] *= s1[j];
    }
  }
}

// grad[off..] += column sums of bar (m x n), rows added in index order.
void add_column_sums(const Mat& bar, int m, int n, double* out) {
  for (int i = 0; i < m; ++i) {
    const double* row = bar.row(i);
    for (int j = 0; j < n; ++j) out[j] += row[j];
  }
}

}  // namespace

void backward_batch(const Network& net, const double* X, int m, EvalMode mode,
                    Workspace& ws, const double* wv, const double* wg,
                    const double* wl, std::vector<double>& grad) {
  check_network(net);
  if (ws.m != m || ws.mode != mode)
    throw ShapeError("workspace does not hold a matching forward state");
  if (grad.size() != net.param_count())
    throw ShapeError("gradient vector length disagrees with the network");
  if (wg != nullptr && !needs_grad(mode))
    throw ShapeError("gradient seed given but forward ran in value mode");
  if (wl != nullptr && !needs_lap(mode))
    throw ShapeError("laplacian seed given but forward did not track laplacians");

  int d = net.input_dim();
  int H = net.layer_count() - 1;
  bool want_g = needs_grad(mode);
  bool want_l = needs_lap(mode);

  ws.bA.resize(H);
  if (want_g) ws.bG.resize(H);
  if (want_l) ws.bL.resize(H);
  for (int h = 0; h < H; ++h) {
    int n = net.widths[h + 1];
    ensure(ws.bA[h], m, n);
    if (want_g) ensure(ws.bG[h], m * d, n);
    if (want_l) ensure(ws.bL[h], m, n);
  }

  // Output layer: bars of its pre-activation are the seeds themselves.
  {
    int nin = net.widths[H];
    double* Wg = grad.data() + net.weight_offset(H);
    if (wv) {
      gemm_tn_acc(1, nin, m, wv, ws.Z[H - 1].a.data(), Wg);
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += wv[i];
      grad[net.bias_offset(H)] += s;
    }
    if (wg && want_g) gemm_tn_acc(1, nin, m * d, wg, ws.J[H - 1].a.data(), Wg);
    if (wl && want_l) gemm_tn_acc(1, nin, m, wl, ws.Mu[H - 1].a.data(), Wg);

    const double* WL = net.W(H);
    if (wv) {
      gemm_nn(m, nin, 1, wv, WL, ws.bA[H - 1].a.data());
    } else {
      ws.bA[H - 1].zero();
    }
    if (want_g) {
      if (wg) {
        gemm_nn(m * d, nin, 1, wg, WL, ws.bG[H - 1].a.data());
      } else {
        ws.bG[H - 1].zero();
      }
    }
    if (want_l) {
      if (wl) {
        gemm_nn(m, nin, 1, wl, WL, ws.bL[H - 1].a.data());
      } else {
        ws.bL[H - 1].zero();
      }
    }
  }

  for (int h = H - 1; h >= 1; --h) {
    activation_backward(net, ws, h);
    // Linear layer h maps activation h-1 outputs to pre-activation h.
    int nout = net.widths[h + 1];
    int nin = net.widths[h];
    double* Wg = grad.data() + net.weight_offset(h);
    gemm_tn_acc(nout, nin, m, ws.bA[h].a.data(), ws.Z[h - 1].a.data(), Wg);
    if (want_g)
      gemm_tn_acc(nout, nin, m * d, ws.bG[h].a.data(), ws.J[h - 1].a.data(), Wg);
    if (want_l)
      gemm_tn_acc(nout, nin, m, ws.bL[h].a.data(), ws.Mu[h - 1].a.data(), Wg);
    add_column_sums(ws.bA[h], m, nout, grad.data() + net.bias_offset(h));

    const double* Wl = net.W(h);
    gemm_nn(m, nin, nout, ws.bA[h].a.data(), Wl, ws.bA[h - 1].a.data());
    if (want_g)
      gemm_nn(m * d, nin, nout, ws.bG[h].a.data(), Wl, ws.bG[h - 1].a.data());
    if (want_l)
      gemm_nn(m, nin, nout, ws.bL[h].a.data(), Wl, ws.bL[h - 1].a.data());
  }

  activation_backward(net, ws, 0);

  // Layer 0: pre-activation is K ⊙ (W_0 x) + b_0, so weight bars pick up K.
  {
    int n1 = net.widths[1];
    const double* K = net.scales.data();
    ensure(ws.scratch0, m, n1);
    for (int i = 0; i < m; ++i) {
      const double* src = ws.bA[0].row(i);
      double* dst = ws.scratch0.row(i);
      for (int j = 0; j < n1; ++j) dst[j] = src[j] * K[j];
    }
    double* Wg = grad.data() + net.weight_offset(0);
    gemm_tn_acc(n1, d, m, ws.scratch0.a.data(), X, Wg);
    if (want_g) {
      ensure(ws.tsum, d, n1);
      ws.tsum.zero();
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < d; ++k) {
          const double* src = ws.bG[0].row(i * d + k);
          double* dst = ws.tsum.row(k);
          for (int j = 0; j < n1; ++j) dst[j] += src[j];
        }
      for (int j = 0; j < n1; ++j)
        for (int k = 0; k < d; ++k)
          Wg[static_cast<std::size_t>(j) * d + k] += K[j] * ws.tsum.at(k, j);
    }
    add_column_sums(ws.bA[0], m, n1, grad.data() + net.bias_offset(0));
  }
}

double forward(const Network& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.input_dim())
    throw ShapeError("input length disagrees with the network input width");
  static thread_local Workspace ws;
  double v = 0.0;
  forward_batch(net, x.data(), 1, EvalMode::Value, ws, &v, nullptr, nullptr);
  return v;
}

DerivBundle forward_bundle(const Network& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.input_dim())
    throw ShapeError("input length disagrees with the network input width");
  static thread_local Workspace ws;
  DerivBundle out;
  out.grad.assign(x.size(), 0.0);
  forward_batch(net, x.data(), 1, EvalMode::GradLap, ws, &out.value,
                out.grad.data(), &out.laplacian);
  return out;
}

}  // namespace mscale
