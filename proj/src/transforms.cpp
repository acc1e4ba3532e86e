#include "dhtlab/transforms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "dhtlab/errors.hpp"

namespace dht {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

/// Copies provenance onto a freshly built solution and appends one chain entry.
ExactSolution rewrap(const ExactSolution& src, Domain domain, ExactSolution::Evaluator ev, SystemKind system,
                     const std::string& entry) {
  ExactSolution out(src.family(), src.params(), std::move(domain), std::move(ev), system);
  out.with_seed(src.seed());
  for (const auto& c : src.transform_chain()) out.add_transform(c);
  for (const auto& n : src.notes()) out.add_note(n);
  out.add_transform(entry);
  out.mark_approximate(src.approximate()).mark_unverified(src.unverified_as_printed());
  return out;
}

Domain mapped(const Domain& d, std::string suffix, std::function<std::pair<double, double>(double, double)> map) {
  if (!d.contains) return Domain::everywhere();
  auto inner = d.contains;
  return {d.description + " " + suffix, [inner, map](double t, double x) {
            const auto [tt, xx] = map(t, x);
            return inner(tt, xx);
          }};
}

}  // namespace

std::string describe(const TransformSpec& tr) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, TimeShift>) return "TimeShift(" + fmt(k.t0) + ")";
        else if constexpr (std::is_same_v<T, SpaceShift>) return "SpaceShift(" + fmt(k.x0) + ")";
        else if constexpr (std::is_same_v<T, Scale>) return "Scale(" + fmt(k.C) + ")";
        else if constexpr (std::is_same_v<T, Galilei>) return "Galilei(" + fmt(k.eps) + ")";
        else return std::string("GaugeExp(") + (k.direction == GaugeDirection::Forward ? "forward" : "inverse") + ")";
      },
      tr);
}

TransformSpec parse_transform(const std::string& text) {
  std::string s = lower(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  std::string name, arg;
  const auto open = s.find('(');
  const auto colon = s.find(':');
  if (open != std::string::npos && s.back() == ')') {
    name = s.substr(0, open);
    arg = s.substr(open + 1, s.size() - open - 2);
  } else if (colon != std::string::npos) {
    name = s.substr(0, colon);
    arg = s.substr(colon + 1);
  } else {
    throw InvalidParameter("transform", "expected Name(value), got \"" + text + "\"");
  }
  name.erase(std::remove(name.begin(), name.end(), '-'), name.end());
  name.erase(std::remove(name.begin(), name.end(), '_'), name.end());
  if (name == "gaugeexp") {
    if (arg == "forward") return GaugeExp{GaugeDirection::Forward};
    if (arg == "inverse") return GaugeExp{GaugeDirection::Inverse};
    throw InvalidParameter("transform", "GaugeExp direction must be forward or inverse");
  }
  double value = 0.0;
  try {
    std::size_t pos = 0;
    value = std::stod(arg, &pos);
    if (pos != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw InvalidParameter("transform", "could not parse the parameter of \"" + text + "\"");
  }
  if (name == "timeshift") return TimeShift{value};
  if (name == "spaceshift") return SpaceShift{value};
  if (name == "scale") return Scale{value};
  if (name == "galilei") return Galilei{value};
  throw InvalidParameter("transform", "unknown transform \"" + text + "\"");
}

void check_compatible(const TransformSpec& tr, const ExactSolution& sol) {
  const ModelParams& p = sol.params();
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Scale>) {
          if (p.A != 0.0) throw ConstraintError("Scale requires A = 0");
          if (k.C == 0.0 || !std::isfinite(k.C)) throw InvalidParameter("C", "Scale factor must be finite and nonzero");
        } else if constexpr (std::is_same_v<T, Galilei>) {
          if (p.d != 1.0) throw ConstraintError("Galilei requires d = 1");
          if (p.A != 0.0) throw ConstraintError("Galilei requires A = 0");
        } else if constexpr (std::is_same_v<T, GaugeExp>) {
          if (p.A != 0.0 || p.S != 1.0) throw ConstraintError("GaugeExp requires A = 0 and S = 1");
          const SystemKind want =
              k.direction == GaugeDirection::Forward ? SystemKind::GaugeReduced : SystemKind::Dht;
          if (sol.system() != want) {
            throw ConstraintError(std::string("GaugeExp(") +
                                  (k.direction == GaugeDirection::Forward ? "forward" : "inverse") +
                                  ") requires a solution of the " + to_string(want) + " system");
          }
        }
      },
      tr);
}

ExactSolution apply(const TransformSpec& tr, const ExactSolution& sol) {
  check_compatible(tr, sol);
  const std::string entry = describe(tr);
  return std::visit(
      [&](const auto& k) -> ExactSolution {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, TimeShift>) {
          const double t0 = k.t0;
          return rewrap(sol, mapped(sol.domain(), "after t -> t + " + fmt(t0), [t0](double t, double x) {
                          return std::pair{t + t0, x};
                        }),
                        [sol, t0](double t, double x) { return sol.evaluate_raw(t + t0, x); }, sol.system(), entry);
        } else if constexpr (std::is_same_v<T, SpaceShift>) {
          const double x0 = k.x0;
          return rewrap(sol, mapped(sol.domain(), "after x -> x + " + fmt(x0), [x0](double t, double x) {
                          return std::pair{t, x + x0};
                        }),
                        [sol, x0](double t, double x) { return sol.evaluate_raw(t, x + x0); }, sol.system(), entry);
        } else if constexpr (std::is_same_v<T, Scale>) {
          const double C = k.C;
          return rewrap(sol, sol.domain(),
                        [sol, C](double t, double x) {
                          const FieldSample s = sol.evaluate_raw(t, x);
                          return FieldSample{C * s.u, C * s.v};
                        },
                        sol.system(), entry);
        } else if constexpr (std::is_same_v<T, Galilei>) {
          const double e = k.eps;
          return rewrap(sol, mapped(sol.domain(), "after x -> x + eps t", [e](double t, double x) {
                          return std::pair{t, x + e * t};
                        }),
                        [sol, e](double t, double x) {
                          const FieldSample s = sol.evaluate_raw(t, x + e * t);
                          const double f = std::exp(0.5 * e * (x + 0.5 * e * t));
                          return FieldSample{f * s.u, f * s.v};
                        },
                        sol.system(), entry);
        } else {
          const bool forward = k.direction == GaugeDirection::Forward;
          const double sign = forward ? 1.0 : -1.0;
          return rewrap(sol, sol.domain(),
                        [sol, sign](double t, double x) {
                          const FieldSample s = sol.evaluate_raw(t, x);
                          const double f = std::exp(sign * t);
                          return FieldSample{f * s.u, f * s.v};
                        },
                        forward ? SystemKind::Dht : SystemKind::GaugeReduced, entry);
        }
      },
      tr);
}

ExactSolution apply(const TransformChain& chain, const ExactSolution& sol) {
  ExactSolution out = sol;
  for (const auto& tr : chain) out = dht::apply(tr, out);
  return out;
}

TransformChain compose(const TransformChain& first, const TransformChain& second) {
  TransformChain out = first;
  out.insert(out.end(), second.begin(), second.end());
  return out;
}

TransformChain compose(const std::vector<TransformChain>& chains) {
  TransformChain out;
  for (const auto& c : chains) out = compose(out, c);
  return out;
}

}  // namespace dht
