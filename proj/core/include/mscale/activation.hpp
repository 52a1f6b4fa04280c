#pragma once

#include <string_view>

namespace mscale {

/// sReLU(x) = max(0, x) * max(0, 1 - x): a bump supported on [0, 1].
/// sReLU2 and sReLU3 are its square and cube, giving C1 and C2 smoothness.
enum class Activation { Relu, Srelu, Srelu2, Srelu3 };

/// At the kink points every derivative takes its right-sided limit,
/// e.g. relu'(0) = 1 and srelu'(0) = 1, srelu'(1) = 0.
double act_value(Activation f, double x);
double act_deriv1(Activation f, double x);
double act_deriv2(Activation f, double x);

/// Third derivative; the parameter-gradient of a Laplacian-based objective
/// reaches it even though no user-facing field does.
double act_deriv3(Activation f, double x);

Activation activation_from_name(std::string_view name);
const char* activation_name(Activation f);

}  // namespace mscale
