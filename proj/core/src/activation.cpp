#include "mscale/activation.hpp"

#include <string>

#include "mscale/errors.hpp"

namespace mscale {

// On [0, 1): s = x(1 - x), s' = 1 - 2x, s'' = -2. Outside, all zero.
// With the right-limit convention the support test is 0 <= x < 1.

double act_value(Activation f, double x) {
  switch (f) {
    case Activation::Relu:
      return x > 0.0 ? x : 0.0;
    case Activation::Srelu: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      return x * (1.0 - x);
    }
    case Activation::Srelu2: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      double s = x * (1.0 - x);
      return s * s;
    }
    case Activation::Srelu3: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      double s = x * (1.0 - x);
      return s * s * s;
    }
  }
  return 0.0;
}

double act_deriv1(Activation f, double x) {
  switch (f) {
    case Activation::Relu:
      return x >= 0.0 ? 1.0 : 0.0;
    case Activation::Srelu: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      return 1.0 - 2.0 * x;
    }
    case Activation::Srelu2: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      double s = x * (1.0 - x);
      return 2.0 * s * (1.0 - 2.0 * x);
    }
    case Activation::Srelu3: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      double s = x * (1.0 - x);
      return 3.0 * s * s * (1.0 - 2.0 * x);
    }
  }
  return 0.0;
}

double act_deriv2(Activation f, double x) {
  switch (f) {
    case Activation::Relu:
      return 0.0;
    case Activation::Srelu:
      return (x < 0.0 || x >= 1.0) ? 0.0 : -2.0;
    case Activation::Srelu2: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      double s = x * (1.0 - x);
      double d = 1.0 - 2.0 * x;
      return 2.0 * (d * d - 2.0 * s);
    }
    case Activation::Srelu3: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      double s = x * (1.0 - x);
      double d = 1.0 - 2.0 * x;
      return 6.0 * s * d * d - 6.0 * s * s;
    }
  }
  return 0.0;
}

double act_deriv3(Activation f, double x) {
  switch (f) {
    case Activation::Relu:
    case Activation::Srelu:
      return 0.0;
    case Activation::Srelu2: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      return -12.0 * (1.0 - 2.0 * x);
    }
    case Activation::Srelu3: {
      if (x < 0.0 || x >= 1.0) return 0.0;
      double s = x * (1.0 - x);
      double d = 1.0 - 2.0 * x;
      return 6.0 * d * d * d - 36.0 * s * d;
    }
  }
  return 0.0;
}

Activation activation_from_name(std::string_view name) {
  if (name == "relu") return Activation::Relu;
  if (name == "srelu") return Activation::Srelu;
  if (name == "srelu2") return Activation::Srelu2;
  if (name == "srelu3") return Activation::Srelu3;
  throw ConfigError("unknown activation '" + std::string(name) +
                    "' (expected relu, srelu, srelu2, or srelu3)");
}

const char* activation_name(Activation f) {
  switch (f) {
    case Activation::Relu: return "relu";
    case Activation::Srelu: return "srelu";
    case Activation::Srelu2: return "srelu2";
    case Activation::Srelu3: return "srelu3";
  }
  return "?";
}

}  // namespace mscale
