#include "mscale/linalg.hpp"

#include <cblas.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

// Present in OpenBLAS; a weak reference keeps other BLAS backends linkable.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace mscale {

namespace {

// One row chunk per task. Fixed so that chunk boundaries, and with them the
// order of every floating-point reduction, never depend on the worker count.
constexpr std::size_t kRowChunk = 256;

std::atomic<int> g_workers{1};

void blas_single_thread_once() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    // The backend must not thread internally: worker-count independence is
    // handled here, at the chunk level.
    if (openblas_set_num_threads) openblas_set_num_threads(1);
  });
}

void run_chunked(std::size_t n, std::size_t chunk,
                 const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t nchunks = (n + chunk - 1) / chunk;
  int workers = g_workers.load(std::memory_order_relaxed);
  if (workers <= 1 || nchunks <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) {
      std::size_t lo = c * chunk;
      fn(lo, std::min(lo + chunk, n));
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= nchunks) return;
      std::size_t lo = c * chunk;
      fn(lo, std::min(lo + chunk, n));
    }
  };
  std::size_t nthreads = std::min<std::size_t>(workers, nchunks);
  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (std::size_t i = 1; i < nthreads; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace

int worker_count() { return g_workers.load(std::memory_order_relaxed); }

void set_worker_count(int n) { g_workers.store(n < 1 ? 1 : n, std::memory_order_relaxed); }

void for_chunks(std::size_t n, std::size_t chunk,
                const std::function<void(std::size_t, std::size_t)>& fn) {
  run_chunked(n, chunk, fn);
}

void gemm_nt(int M, int N, int K, const double* A, const double* B, double* C,
             bool accumulate) {
  blas_single_thread_once();
  run_chunked(static_cast<std::size_t>(M), kRowChunk,
              [&](std::size_t lo, std::size_t hi) {
                int m = static_cast<int>(hi - lo);
                cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, m, N, K, 1.0,
                            A + lo * K, K, B, K, accumulate ? 1.0 : 0.0,
                            C + lo * N, N);
              });
}

void gemm_nn(int M, int N, int K, const double* A, const double* B, double* C,
             bool accumulate) {
  blas_single_thread_once();
  run_chunked(static_cast<std::size_t>(M), kRowChunk,
              [&](std::size_t lo, std::size_t hi) {
                int m = static_cast<int>(hi - lo);
                cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, m, N, K, 1.0,
                            A + lo * K, K, B, N, accumulate ? 1.0 : 0.0,
                            C + lo * N, N);
              });
}

void gemm_tn_acc(int P, int Q, int M, const double* A, const double* B, double* C) {
  blas_single_thread_once();
  std::size_t n = static_cast<std::size_t>(M);
  std::size_t nchunks = (n + kRowChunk - 1) / kRowChunk;
  std::size_t block = static_cast<std::size_t>(P) * Q;
  // Each chunk lands in its own scratch block; the final sum walks the blocks
  // in index order, so the arithmetic is the same for any worker count.
  std::vector<double> partial(nchunks * block);
  run_chunked(n, kRowChunk, [&](std::size_t lo, std::size_t hi) {
    int m = static_cast<int>(hi - lo);
    cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, P, Q, m, 1.0, A + lo * P,
                P, B + lo * Q, Q, 0.0, partial.data() + (lo / kRowChunk) * block, Q);
  });
  for (std::size_t c = 0; c < nchunks; ++c) {
    const double* src = partial.data() + c * block;
    for (std::size_t i = 0; i < block; ++i) C[i] += src[i];
  }
}

}  // namespace mscale
