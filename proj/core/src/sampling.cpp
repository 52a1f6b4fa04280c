#include "mscale/sampling.hpp"

#include <cstring>
#include <numeric>

#include "mscale/errors.hpp"

namespace mscale {

std::vector<double> sample_interior(const Box& box, int n, Pcg32& rng) {
  if (box.dim < 1 || !(box.lo < box.hi))
    throw ConfigError("degenerate sampling box");
  if (n < 1) throw ConfigError("sample count must be positive");
  std::vector<double> out(static_cast<std::size_t>(n) * box.dim);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = rng.uniform(box.lo, box.hi);
  return out;
}

std::vector<double> sample_boundary(const Box& box, int n_tilde, Pcg32& rng) {
  if (box.dim < 1 || !(box.lo < box.hi))
    throw ConfigError("degenerate sampling box");
  if (n_tilde < 1) throw ConfigError("per-face sample count must be positive");
  int d = box.dim;
  std::vector<double> out(static_cast<std::size_t>(2) * d * n_tilde * d);
  std::size_t at = 0;
  for (int k = 0; k < d; ++k)
    for (int side = 0; side < 2; ++side)
      for (int t = 0; t < n_tilde; ++t)
        for (int j = 0; j < d; ++j)
          out[at++] = (j == k) ? (side == 0 ? box.lo : box.hi)
                               : rng.uniform(box.lo, box.hi);
  return out;
}

Dataset make_dataset(const FitTarget& target, int size, const Box& domain,
                     Pcg32& rng, std::string split) {
  validate_target(target);
  if (size < 1) throw ConfigError("dataset size must be positive");
  int di = target_intrinsic_dim(target);
  if (domain.dim != di)
    throw ShapeError("dataset domain dimension disagrees with the target");
  int dx = target_input_dim(target);
  Dataset ds;
  ds.dim = dx;
  ds.split = std::move(split);
  ds.inputs.resize(static_cast<std::size_t>(size) * dx);
  ds.labels.resize(static_cast<std::size_t>(size));
  std::vector<double> t(static_cast<std::size_t>(di));
  for (int s = 0; s < size; ++s) {
    for (int j = 0; j < di; ++j) t[j] = rng.uniform(domain.lo, domain.hi);
    ds.labels[s] = eval_target(target, t);
    double* x = ds.inputs.data() + static_cast<std::size_t>(s) * dx;
    switch (target.embedding) {
      case Embedding::None:
        std::memcpy(x, t.data(), sizeof(double) * di);
        break;
      case Embedding::Linear:
        embed_linear(t, dx, std::span<double>(x, dx));
        break;
      case Embedding::Nonlinear:
        embed_nonlinear(t, dx, std::span<double>(x, dx));
        break;
    }
  }
  return ds;
}

Batcher::Batcher(int count, int batch_size) : count_(count), batch_(batch_size) {
  if (count < 1) throw ConfigError("dataset must not be empty");
  if (batch_size < 1) throw ConfigError("batch size must be positive");
  if (batch_size > count)
    throw ConfigError("batch size exceeds the dataset size");
  order_.resize(static_cast<std::size_t>(count));
  std::iota(order_.begin(), order_.end(), 0);
}

void Batcher::start_epoch(Pcg32& shuffle_rng) {
  for (int i = count_ - 1; i >= 1; --i) {
    int j = static_cast<int>(shuffle_rng.next_double() * (i + 1));
    if (j > i) j = i;
    std::swap(order_[i], order_[j]);
  }
  pos_ = 0;
}

bool Batcher::next(const int** idx, int* n) {
  if (pos_ >= count_) return false;
  int take = count_ - pos_ < batch_ ? count_ - pos_ : batch_;
  *idx = order_.data() + pos_;
  *n = take;
  pos_ += take;
  return true;
}

int Batcher::batches_per_epoch() const { return (count_ + batch_ - 1) / batch_; }

void gather_rows(const double* src, int dim, const int* idx, int n, double* dst) {
  for (int r = 0; r < n; ++r)
    std::memcpy(dst + static_cast<std::size_t>(r) * dim,
                src + static_cast<std::size_t>(idx[r]) * dim, sizeof(double) * dim);
}

}  // namespace mscale
