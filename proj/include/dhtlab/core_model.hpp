#pragma once

#include <string>
#include <utility>

namespace dht {

/// Threshold below which |u| (or |u + A|) is treated as a singular denominator.
inline constexpr double kDefaultSingularTol = 1e-12;

/**
 * Coefficients of the dimensional prey-predator model
 *
 *   u_t = d1 u_xx + r u - q u v / (u + A0)
 *   v_t = d2 v_xx + s v (1 - v / (h u))
 *
 * All strictly positive except A0 >= 0.
 */
struct DimensionalParams {
  double d1{1.0};
  double d2{1.0};
  double r{1.0};
  double q{1.0};
  double A0{0.0};
  double s{1.0};
  double h{1.0};

  /// Throws InvalidParameter naming the first offending field.
  void validate() const;
};

/**
 * Nondimensional coefficients of the diffusive Holling-Tanner system
 *
 *   u_t = u_xx + u (1 - R v / (u + A))
 *   v_t = d v_xx + S v (1 - v / u)
 */
struct ModelParams {
  double A{0.0};
  double R{1.0};
  double S{1.0};
  double d{1.0};

  void validate() const;
};

/// Which PDE system a field is meant to solve.
enum class SystemKind {
  Dht,           ///< the system above
  GaugeReduced,  ///< u_t = u_xx - R v, v_t = d v_xx - v^2/u (A = 0, S = 1, after u,v -> e^t u, e^t v)
};

std::string to_string(SystemKind kind);

struct FieldSample {
  double u{0.0};
  double v{0.0};
};

/// Field values and the partial derivatives the residual operators need at one point.
struct Jet {
  double u{0.0}, v{0.0};
  double ut{0.0}, vt{0.0};
  double ux{0.0}, vx{0.0};
  double uxx{0.0}, vxx{0.0};
};

/// Multipliers taking nondimensional (t, x, u, v) back to dimensional units.
struct ScalingFactors {
  double t_scale{1.0};
  double x_scale{1.0};
  double u_scale{1.0};
  double v_scale{1.0};
};

struct Nondimensionalized {
  ModelParams params;
  ScalingFactors scales;
};

/// t -> t/r, x -> sqrt(d1/r) x, u -> u, v -> h v; R = hq/r, S = s/r, d = d2/d1, A = A0.
Nondimensionalized nondimensionalize(const DimensionalParams& p);

struct ResidualPair {
  double s1{0.0};
  double s2{0.0};
};

/// S1 = u_xx - u_t + u(1 - Rv/(u+A)),  S2 = d v_xx - v_t + S v (1 - v/u).
ResidualPair residual(const ModelParams& params, const Jet& jet,
                      double singular_tol = kDefaultSingularTol);

/// Residual of the gauge-reduced system (A = 0, S = 1 after the exponential gauge).
ResidualPair gauge_reduced_residual(const ModelParams& params, const Jet& jet,
                                    double singular_tol = kDefaultSingularTol);

ResidualPair residual(SystemKind system, const ModelParams& params, const Jet& jet,
                      double singular_tol = kDefaultSingularTol);

struct Reaction {
  double f{0.0};
  double g{0.0};
};

/// Reaction part of the nondimensional system: f = u(1 - Rv/(u+A)), g = S v (1 - v/u).
Reaction reaction_rhs(const ModelParams& params, double u, double v,
                      double singular_tol = kDefaultSingularTol);

/// Constant coexistence state u = v = A/(R-1); requires A > 0 and R > 1.
FieldSample steady_state_value(const ModelParams& params);

}  // namespace dht
