#pragma once

#include <string>

#include "mscale/network.hpp"

namespace mscale {

/// Text format, one value per line in hex float, exact round trip:
///   mscale-net 1
///   widths <n0> <n1> ...
///   activation <name>
///   scales <K values...>
///   params <count>
///   <count parameter lines in draw order>
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

}  // namespace mscale
