#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mscale {

/// Dense row-major matrix.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double* row(int i) { return a.data() + static_cast<std::size_t>(i) * cols; }
  const double* row(int i) const { return a.data() + static_cast<std::size_t>(i) * cols; }
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  std::size_t size() const { return a.size(); }
  void zero() { a.assign(a.size(), 0.0); }
};

/// Number of workers used for batched products. Results are bit-identical
/// for every value; this only trades wall time.
int worker_count();
void set_worker_count(int n);

/// C (M x N) = A (M x K) * B (N x K)^T, += when accumulate is set.
void gemm_nt(int M, int N, int K, const double* A, const double* B, double* C,
             bool accumulate = false);

/// C (M x N) = A (M x K) * B (K x N), += when accumulate is set.
void gemm_nn(int M, int N, int K, const double* A, const double* B, double* C,
             bool accumulate = false);

/// C (P x Q) += A (M x P)^T * B (M x Q). The reduction over M runs in fixed
/// chunk order no matter how many workers execute, so accumulated gradients
/// are reproducible byte for byte.
void gemm_tn_acc(int P, int Q, int M, const double* A, const double* B, double* C);

/// Runs fn(lo, hi) over [0, n) in fixed-size chunks. Chunk boundaries do not
/// depend on the worker count.
void for_chunks(std::size_t n, std::size_t chunk, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace mscale
