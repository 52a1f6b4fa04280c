#pragma once

#include <ostream>

namespace mscale {

/// Quick finite-difference and oracle checks (activation derivatives, bundle
/// versus central differences, loss gradients, optimizer step, PDE identity).
/// Prints one line per check; returns the number of failures.
int run_selfchecks(std::ostream& out);

}  // namespace mscale
