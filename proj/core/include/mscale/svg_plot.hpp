#pragma once

#include <string>
#include <vector>

#include "mscale/experiment.hpp"

namespace mscale {

/// Loss-versus-epoch chart: logarithmic ordinate, one polyline per series.
/// Each record contributes its train_loss (or mse_true) as a solid line and,
/// when present, its test_loss as a dashed line in the same color. Legend
/// entries carry the record names. Self-contained SVG, no external assets.
void emit_svg_plot(const std::vector<RunRecord>& records, const std::string& path);

}  // namespace mscale
