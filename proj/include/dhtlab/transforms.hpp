#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dhtlab/solutions.hpp"

namespace dht {

/// (u, v)(t + t0, x)
struct TimeShift {
  double t0{0.0};
};

/// (u, v)(t, x + x0)
struct SpaceShift {
  double x0{0.0};
};

/// (C u, C v); needs A = 0.
struct Scale {
  double C{1.0};
};

/// (u, v)(t, x + eps t) exp(eps/2 (x + eps t / 2)); needs d = 1 and A = 0.
struct Galilei {
  double eps{0.0};
};

enum class GaugeDirection { Forward, Inverse };

/**
 * Forward: a solution of the gauge-reduced system (u_t = u_xx - R v, v_t = d v_xx - v^2/u)
 * becomes (e^t u, e^t v), a solution of the full system with A = 0, S = 1. Inverse undoes it.
 */
struct GaugeExp {
  GaugeDirection direction{GaugeDirection::Forward};
};

using TransformSpec = std::variant<TimeShift, SpaceShift, Scale, Galilei, GaugeExp>;
using TransformChain = std::vector<TransformSpec>;

/// "TimeShift(0.1)", "Galilei(0.5)", "GaugeExp(forward)", ...
std::string describe(const TransformSpec& tr);

/// Parses the describe() format, case-insensitively, also accepting "timeshift:0.1".
TransformSpec parse_transform(const std::string& text);

/// Throws ConstraintError if the transform cannot act on this solution's system.
void check_compatible(const TransformSpec& tr, const ExactSolution& sol);

ExactSolution apply(const TransformSpec& tr, const ExactSolution& sol);

/// Applies the chain left to right.
ExactSolution apply(const TransformChain& chain, const ExactSolution& sol);

/// Order-preserving concatenation: applying the result equals applying `first`, then `second`.
TransformChain compose(const TransformChain& first, const TransformChain& second);
TransformChain compose(const std::vector<TransformChain>& chains);

}  // namespace dht
