#pragma once

#include <span>

#include "mscale/fields.hpp"

namespace mscale {

/// Monte-Carlo energy functional plus Dirichlet penalty:
///   mean_interior( eps/2 |grad h|^2 + V h^2 - g h ) + beta * mean_boundary( (h - g_tilde)^2 )
/// Point sets are flat row-major (count * dim). The boundary mean divides by
/// the total boundary count. Requires gradient capability.
double ritz_loss(const ScalarField& h, const PoissonProblem& prob,
                 std::span<const double> interior, std::span<const double> boundary,
                 double beta);

/// Mean squared strong-form residual plus the same penalty:
///   mean_interior( (Lap h + g)^2 ) + beta * mean_boundary( (h - g_tilde)^2 )
/// Requires Laplacian capability.
double lse_loss(const ScalarField& h, const PoissonProblem& prob,
                std::span<const double> interior, std::span<const double> boundary,
                double beta);

/// mean over the batch of (h(x) - label)^2.
double fit_mse_loss(const ScalarField& h, std::span<const double> inputs,
                    std::span<const double> labels, int dim);

/// mean over the points of (h(x) - reference(x))^2.
double mse_vs_true(const ScalarField& h, const ScalarField& reference,
                   std::span<const double> points, int dim);

}  // namespace mscale
