#pragma once

#include <cstddef>
#include <string>

namespace dht {

/// Rectangular (t, x) lattice with inclusive endpoints.
struct GridSpec {
  double t0{0.0};
  double t1{1.0};
  int nt{2};
  double x0{0.0};
  double x1{1.0};
  int nx{2};

  /// Throws InvalidParameter unless t1 > t0, x1 > x0, nt >= 2, nx >= 2.
  void validate() const;

  double t(int i) const { return nt == 1 ? t0 : t0 + (t1 - t0) * i / (nt - 1); }
  double x(int j) const { return nx == 1 ? x0 : x0 + (x1 - x0) * j / (nx - 1); }
  double dt() const { return (t1 - t0) / (nt - 1); }
  double dx() const { return (x1 - x0) / (nx - 1); }
  std::size_t size() const { return static_cast<std::size_t>(nt) * static_cast<std::size_t>(nx); }

  /// Parses "t0,t1,nt,x0,x1,nx".
  static GridSpec parse(const std::string& text);
  std::string to_string() const;
};

}  // namespace dht
