#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <string>

#include "dhtlab/conditional.hpp"
#include "dhtlab/core_model.hpp"
#include "dhtlab/ode.hpp"
#include "dhtlab/riccati.hpp"
#include "dhtlab/solutions.hpp"

namespace dht {

/**
 * ODE systems obtained by substituting an ansatz into the system with A = 0.
 *
 * State layouts (w is the reduced independent variable):
 *   T2C1         u = phi(w) e^{beta t}, w = x - alpha t        (phi, phi', psi, psi')
 *   T2C1_scalar  the same, psi eliminated, fourth order         (phi, phi', phi'', phi''')
 *   T2C2         u = phi(t) e^{beta x}                          (phi, psi)
 *   T2C3         u = phi(y) exp(2t^3/(3a^2) - t x/a), y = t^2 - a x  (phi, phi', psi, psi')
 *   T2C4         u = phi(t) e^{-x^2/(4t)}                       (phi, psi)
 *   CSI          Case-I conditional ansatz, f(t) supplied       (phi, psi)
 *   CSII         Case-II conditional ansatz, g(t), h(t) supplied (phi, psi)
 */
enum class ReductionTag { T2C1, T2C1_scalar, T2C2, T2C3, T2C4, CSI, CSII };

std::string to_string(ReductionTag tag);
/// Case-insensitive; accepts the names printed by to_string.
ReductionTag parse_reduction_tag(const std::string& text);
std::size_t state_dimension(ReductionTag tag);

struct ReductionCase {
  ReductionTag tag{ReductionTag::T2C2};
  double alpha{0.0};  ///< T2C1, T2C1_scalar, T2C3
  double beta{0.0};   ///< T2C1, T2C1_scalar, T2C2
  std::function<CaseOneF(double)> f;    ///< CSI
  std::function<CaseTwoGH(double)> gh;  ///< CSII
};

/// Throws ConstraintError when the parameters do not admit the reduction.
void validate_case(const ReductionCase& rc, const ModelParams& params);

/// First-order right-hand side; throws SingularDenominator when phi = 0 (or g = 0 for CSII).
State reduced_rhs(const ReductionCase& rc, const ModelParams& params, double w, const State& state);

/// Adaptive integration of the reduced system with rtol = reltol and atol = reltol * 1e-3.
OdeTrajectory integrate(const ReductionCase& rc, const ModelParams& params, const State& y0, double w0, double w1,
                        double reltol = 1e-9);

/**
 * Left-hand side of the fourth-order equation for phi obtained from T2C1 by eliminating
 * psi = (phi'' + alpha phi' + (1 - beta) phi) / R. Arguments are phi and its derivatives 1..4.
 */
double fourth_order_lhs(const ModelParams& params, double alpha, double beta, double p0, double p1, double p2,
                        double p3, double p4);

/**
 * Largest |fourth_order_lhs| / scale along a T2C1 trajectory, with phi''' and phi'''' obtained
 * by differentiating the system itself. scale = max(1, |phi|, ..., |phi''''|) at each sample.
 */
double fourth_order_consistency(const ReductionCase& rc, const ModelParams& params, const OdeTrajectory& traj);

/// Integrates the Riccati equation of a chi branch family from chi(t0) = chi0.
OdeTrajectory integrate_chi(const ChiBranch& branch, const ModelParams& params, double chi0, double t0, double t1,
                            double reltol = 1e-9);

/**
 * Lifts a closed-form chi to a solution: phi = phi0 exp(Lambda(t)), psi from the recovery formula
 * (psi = (1 + beta^2 - chi) phi / R, or (1 - 1/(2t) - chi) phi / R for the Case-4 branches),
 * then u = phi e^{beta x} or phi e^{-x^2/(4t)}, v likewise.
 */
ExactSolution chi_to_solution(const ChiBranch& branch, const ModelParams& params, double phi0 = 1.0);

/// f' = (d-1)/3 f^3 + (S-1) f + C1, the first integral of f'' + (1-d) f^2 f' + (1-S) f' = 0.
double f_first_integral_rhs(const ModelParams& params, double C1, double f);

/// Integrates the first-integral form from f(t0) = f0. Blow-up raises IntegrationFailure at its location.
OdeTrajectory f_solve(const ModelParams& params, double C1, double f0, double t0, double t1, double reltol = 1e-9);

/// max |f'' + (1-d) f^2 f' + (1-S) f'| on n interior points, f'' by central differences of the dense f'.
double f_equation_residual(const ModelParams& params, const OdeTrajectory& traj, std::size_t n = 101,
                           double h = 1e-4);

/**
 * Numeric Case-I family: integrates f, chi' = -K1 chi - K0 and Lambda' = chi jointly on [t0, t1],
 * then phi = phi0 e^Lambda, psi = (1 + f^2 - chi) phi / S, u = phi e^{x f}, v = (psi - x f' phi / S) e^{x f}.
 * The returned solution is defined for t in [t0, t1] and keeps the trajectory alive.
 */
ExactSolution caseI_pipeline(const ModelParams& params, double C1, double f0, double chi0, double t0, double t1,
                             double phi0 = 1.0, double reltol = 1e-11);

/// (g, g', h, h') for h g'' + g (h'' + (1-S) h') = 0, g g'' = C e^{(S-1)t}; g = 0 raises an error.
OdeTrajectory gh_solve(double S, double C, double g0, double gp0, double h0, double hp0, double t0, double t1,
                       double reltol = 1e-10);

struct GhResidual {
  double e1{0.0};  ///< max |h g'' + g (h'' + (1-S) h')|
  double e2{0.0};  ///< max |g g'' - C e^{(S-1)t}|
  double max() const { return std::max(e1, e2); }
};

/// FD residual of the (g, h) system on n interior points, second derivatives from the dense g', h'.
GhResidual gh_residual(double S, double C, const OdeTrajectory& traj, std::size_t n = 101, double h = 1e-4);

/// The same residual for closed-form (g, h), with second derivatives by central differences of g, h.
GhResidual gh_residual(double S, double C, const std::function<CaseTwoGH(double)>& gh, double t0, double t1,
                       std::size_t n = 101, double h = 1e-3);

/// Outcome of comparing an integrated reduction with its closed form on a sampled span.
struct OracleReport {
  std::string name;
  double t0{0.0};
  double t1{0.0};
  double max_rel_error{0.0};
  std::size_t samples{0};
  std::string norm{"relative"};
};

/// chi integrated from its closed-form value at t0 against the closed form, |diff| / max(1, |chi|).
OracleReport chi_oracle(const ChiBranch& branch, const ModelParams& params, double t0, double t1,
                        double reltol = 1e-11);

/// The first-order f equation with C1 = 0 against the explicit f of the given sign.
OracleReport f_oracle(const ModelParams& params, int sign, double t0, double t1);

/// The Case-I (phi, psi) system driven by the explicit f against the closed-form phi, psi.
OracleReport caseI_oracle(const ModelParams& params, double C, double t0, double t1);

/// The Case-II (phi, psi) system driven by the particular (g, h) against the closed-form phi, psi.
OracleReport caseII_oracle(double S, double C, double C2, double C3, double t0, double t1);

/// caseI_pipeline with C1 = 0 and matching initial data against the explicit Case-I family on x in [-1, 1].
OracleReport caseI_pipeline_oracle(const ModelParams& params, double C, double t0, double t1);

}  // namespace dht
