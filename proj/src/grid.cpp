#include "dhtlab/grid.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "dhtlab/errors.hpp"

namespace dht {

void GridSpec::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw InvalidParameter("grid.t", "requires finite t1 > t0");
  }
  if (!std::isfinite(x0) || !std::isfinite(x1) || !(x1 > x0)) {
    throw InvalidParameter("grid.x", "requires finite x1 > x0");
  }
  if (nt < 2) throw InvalidParameter("grid.nt", "requires nt >= 2");
  if (nx < 2) throw InvalidParameter("grid.nx", "requires nx >= 2");
}

GridSpec GridSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 6) {
    throw InvalidParameter("grid", "expected \"t0,t1,nt,x0,x1,nx\", got \"" + text + "\"");
  }
  GridSpec g;
  try {
    std::size_t pos = 0;
    auto num = [&](const std::string& s) {
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    };
    auto integer = [&](const std::string& s) {
      const int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    };
    g.t0 = num(parts[0]);
    g.t1 = num(parts[1]);
    g.nt = integer(parts[2]);
    g.x0 = num(parts[3]);
    g.x1 = num(parts[4]);
    g.nx = integer(parts[5]);
  } catch (const std::exception&) {
    throw InvalidParameter("grid", "could not parse \"" + text + "\"");
  }
  g.validate();
  return g;
}

std::string GridSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << t0 << ',' << t1 << ',' << nt << ',' << x0 << ',' << x1 << ',' << nx;
  return os.str();
}

}  // namespace dht
