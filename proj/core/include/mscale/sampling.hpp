#pragma once

#include <string>
#include <vector>

#include "mscale/fields.hpp"
#include "mscale/rng.hpp"
#include "mscale/targets.hpp"

namespace mscale {

/// n points i.i.d. uniform over the box, flat row-major (n * dim).
/// Coordinates of one point are drawn in axis order.
std::vector<double> sample_interior(const Box& box, int n, Pcg32& rng);

/// n_tilde points per face, 2 * dim * n_tilde points total. Face order: axis
/// 0 low side, axis 0 high side, axis 1 low, ... Free coordinates are drawn
/// in axis order.
std::vector<double> sample_boundary(const Box& box, int n_tilde, Pcg32& rng);

struct Dataset {
  int dim = 0;  // network input dimension
  std::vector<double> inputs;
  std::vector<double> labels;
  std::string split;  // "train" or "test"

  int count() const { return static_cast<int>(labels.size()); }
};

/// Samples the intrinsic variable uniformly over `domain`, evaluates the
/// target, and embeds the inputs when the target calls for it. One point
/// costs exactly intrinsic-dim uniform draws.
Dataset make_dataset(const FitTarget& target, int size, const Box& domain,
                     Pcg32& rng, std::string split);

/// Epoch batching: one shuffle per epoch, then contiguous slices of the
/// permutation. A trailing remainder forms a final smaller batch.
class Batcher {
 public:
  Batcher(int count, int batch_size);

  void start_epoch(Pcg32& shuffle_rng);
  /// Yields the next slice, false at epoch end. Valid until the next call.
  bool next(const int** idx, int* n);
  int batches_per_epoch() const;

 private:
  int count_;
  int batch_;
  int pos_ = 0;
  std::vector<int> order_;
};

/// dst[r] = src[idx[r]] for row vectors of width dim.
void gather_rows(const double* src, int dim, const int* idx, int n, double* dst);

}  // namespace mscale
