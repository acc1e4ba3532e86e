#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dhtlab/conditional.hpp"
#include "dhtlab/core_model.hpp"
#include "dhtlab/grid.hpp"
#include "dhtlab/solutions.hpp"
#include "json.hpp"

namespace dht {

/// Library version string, "0.1.0-g<describe>" when built from a git checkout.
const char* version();

/// Default differentiation step before point scaling.
inline constexpr double kDefaultFdStep = 1e-3;

/// Step used at (t, x): h * max(1, |t|, |x|).
double scaled_step(double h, double t, double x);

/**
 * Fourth-order central differences of u, v at (t, x) with step h (not rescaled).
 * With richardson = true the result at h and h/2 is combined as (16 J(h/2) - J(h)) / 15.
 * Throws DomainError naming the stencil point if any lies outside the solution's domain.
 */
Jet fd_jet(const ExactSolution& sol, double t, double x, double h = kDefaultFdStep, bool richardson = false);

struct ResidualOptions {
  bool richardson{false};
  /// Move grid edges inward by the stencil width where the stencil would leave the domain.
  bool auto_margin{true};
  /// Smallest |u| accepted in v^2/u. Gaussian tails reach e^-90, so only underflow is rejected.
  double singular_tol{std::numeric_limits<double>::min()};
};

/// Residual norms over a grid. The l2 norms are root-mean-square over the nodes.
struct ResidualReport {
  double linf_s1{0.0}, linf_s2{0.0};
  double l2_s1{0.0}, l2_s2{0.0};
  double argmax_t{0.0}, argmax_x{0.0};
  double fd_step{kDefaultFdStep};
  GridSpec grid;
  double margin{0.0};  ///< inward shift applied to the requested window
  std::string provenance;
  bool approximate{false};
  bool unverified_as_printed{false};

  double linf() const { return std::max(linf_s1, linf_s2); }
  nlohmann::json to_json() const;
};

/// Pointwise residual of the system `params` (kind from sol.system()) at every node via fd_jet.
ResidualReport residual_report(const ExactSolution& sol, const ModelParams& params, const GridSpec& grid,
                               double h = kDefaultFdStep, const ResidualOptions& options = {});
ResidualReport residual_report(const ExactSolution& sol, const GridSpec& grid, double h = kDefaultFdStep,
                               const ResidualOptions& options = {});

/// Solution with u multiplied by (1 + factor); keeps v. Used as a negative control.
ExactSolution perturb_u(const ExactSolution& sol, double factor);

struct SurfaceDeviation {
  double e1{0.0};
  double e2{0.0};
  double max() const { return std::max(e1, e2); }
};

/// max |u_x - f u| and max |v_x - f v + (f'/S) u| over the grid.
SurfaceDeviation invariant_surface_check(const ExactSolution& sol, const std::function<CaseOneF(double)>& f,
                                         const GridSpec& grid, double h = kDefaultFdStep);

/// max |2g u_x - (2h - g'x) u| and max |2g v_x - (2h - g'x) v + (2h' - g''x) u / S| over the grid.
SurfaceDeviation invariant_surface_check_caseII(const ExactSolution& sol,
                                                const std::function<CaseTwoGH(double)>& gh,
                                                const GridSpec& grid, double h = kDefaultFdStep);

using GeneratorCoefficient = std::function<double(double t, double x, double u, double v)>;

/// xi0 d_t + xi1 d_x + eta1 d_u + eta2 d_v.
struct GeneratorSpec {
  std::string tag;
  GeneratorCoefficient xi0, xi1, eta1, eta2;
};

/**
 * One of P_t, P_x, I, D, G, Q, Y, Pi for the given parameters. With enforce = true the
 * parameter restrictions under which the operator is a Lie symmetry are checked.
 */
GeneratorSpec table1_generator(const std::string& tag, const ModelParams& params, bool enforce = true);

struct SymmetryCheckResult {
  std::string tag;
  std::vector<double> epsilons;
  std::vector<double> residuals;
  double floor{0.0};       ///< residual of the unperturbed field
  double slope{0.0};       ///< NaN when fewer than two points clear the floor
  std::size_t fitted{0};   ///< number of epsilons used in the fit
  bool floor_reached{false};
  std::string note;
};

/**
 * Residual linf of u + eps (eta1 - xi0 u_t - xi1 u_x), v + eps (eta2 - xi0 v_t - xi1 v_x)
 * for each eps, and the least-squares log-log slope over the points above 10 x floor.
 */
SymmetryCheckResult infinitesimal_symmetry_check(const ExactSolution& sol, const GeneratorSpec& gen,
                                                 const ModelParams& params, const std::vector<double>& epsilons,
                                                 const GridSpec& grid, double h = kDefaultFdStep);

}  // namespace dht
