#include "mscale/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mscale/errors.hpp"

namespace mscale {

namespace {

std::string hexf(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_double(const std::string& tok, const char* what) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw ConfigError(std::string("checkpoint: bad ") + what + " value '" + tok + "'");
  return v;
}

}  // namespace

void save_network(const Network& net, const std::string& path) {
  check_network(net);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint '" + path + "'");
  out << "mscale-net 1\n";
  out << "widths";
  for (int w : net.widths) out << ' ' << w;
  out << "\nactivation " << activation_name(net.activation) << "\n";
  out << "scales";
  for (double s : net.scales) out << ' ' << hexf(s);
  out << "\nparams " << net.params.size() << "\n";
  for (double p : net.params) out << hexf(p) << "\n";
  if (!out) throw ConfigError("write failure on checkpoint '" + path + "'");
}

Network load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read checkpoint '" + path + "'");
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (!in || magic != "mscale-net" || version != 1)
    throw ConfigError("checkpoint '" + path + "' has an unknown format or version");

  Network net;
  std::string key;
  in >> key;
  if (key != "widths") throw ConfigError("checkpoint: expected widths");
  {
    std::string rest;
    std::getline(in, rest);
    std::istringstream row(rest);
    int w;
    while (row >> w) net.widths.push_back(w);
  }
  in >> key;
  if (key != "activation") throw ConfigError("checkpoint: expected activation");
  std::string act;
  in >> act;
  net.activation = activation_from_name(act);
  in >> key;
  if (key != "scales") throw ConfigError("checkpoint: expected scales");
  {
    std::string rest;
    std::getline(in, rest);
    std::istringstream row(rest);
    std::string tok;
    while (row >> tok) net.scales.push_back(parse_double(tok, "scale"));
  }
  in >> key;
  if (key != "params") throw ConfigError("checkpoint: expected params");
  std::size_t count = 0;
  in >> count;
  net.params.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string tok;
    if (!(in >> tok))
      throw ConfigError("checkpoint '" + path + "' is truncated");
    net.params.push_back(parse_double(tok, "parameter"));
  }
  check_network(net);
  return net;
}

}  // namespace mscale
