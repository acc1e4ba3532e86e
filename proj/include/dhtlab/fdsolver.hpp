#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "dhtlab/core_model.hpp"
#include "dhtlab/grid.hpp"
#include "dhtlab/solutions.hpp"

namespace dht {

/**
 * Sampled (u, v) fields on a GridSpec, row-major with one row per time level.
 *
 * Also used for exact solutions sampled onto a grid, in which case the scheme is "exact".
 */
struct FieldGrid {
  GridSpec grid;
  std::vector<double> u;
  std::vector<double> v;
  std::string scheme{"exact"};
  double dt{0.0};  ///< internal time step, 0 for sampled fields
  std::string bc_left;
  std::string bc_right;
  std::string provenance;
  bool approximate{false};
  bool failed{false};

  double& u_at(int i, int j) { return u[index(i, j)]; }
  double& v_at(int i, int j) { return v[index(i, j)]; }
  double u_at(int i, int j) const { return u[index(i, j)]; }
  double v_at(int i, int j) const { return v[index(i, j)]; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.nx) + static_cast<std::size_t>(j);
  }

  /// Row i of u (or v) as a vector.
  std::vector<double> row_u(int i) const;
  std::vector<double> row_v(int i) const;

  /// Header "t,x,u,v", one line per node with t outer and x inner, 17 significant digits.
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

/// Samples an exact solution on every node; throws DomainError if a node is outside its domain.
FieldGrid sample(const ExactSolution& sol, const GridSpec& grid);

enum class BoundaryKind { DirichletFromExact, NeumannZero };

/// Condition at one edge of the interval.
struct BoundaryCondition {
  BoundaryKind kind{BoundaryKind::NeumannZero};
  std::shared_ptr<const ExactSolution> exact;  ///< DirichletFromExact only

  static BoundaryCondition neumann_zero();
  static BoundaryCondition dirichlet_from(const ExactSolution& sol);
  std::string describe() const;
};

struct EdgeConditions {
  BoundaryCondition left;
  BoundaryCondition right;

  static EdgeConditions both(const BoundaryCondition& bc) { return {bc, bc}; }
};

struct SolverConfig {
  double cfl{0.4};
  double u_floor{1e-12};
  std::size_t max_steps{50'000'000};
  /// Test hook: drop the reaction terms and solve the pure diffusion system.
  bool zero_reaction{false};

  void validate() const;
};

/**
 * Method-of-lines solution of the system on [grid.x0, grid.x1] for t in [grid.t0, grid.t1].
 *
 * Central second-order Laplacian, classical RK4 with dt = cfl dx^2 / max(1, d) (shortened so
 * that every output interval holds a whole number of steps). Output rows are the grid's time levels.
 * Throws SolverFailure if u drops below cfg.u_floor at an evolved node.
 */
FieldGrid simulate(const ModelParams& params, const ExactSolution& init, const EdgeConditions& bc,
                   const GridSpec& grid, const SolverConfig& cfg = {});

/// Same, starting from explicit node values at grid.t0.
FieldGrid simulate(const ModelParams& params, const std::vector<double>& u0, const std::vector<double>& v0,
                   const EdgeConditions& bc, const GridSpec& grid, const SolverConfig& cfg = {});

struct LevelError {
  double t{0.0};
  double linf_u{0.0};
  double linf_v{0.0};
  double l2_u{0.0};  ///< root mean square over the nodes of the level
  double l2_v{0.0};

  double linf() const { return linf_u > linf_v ? linf_u : linf_v; }
};

struct Comparison {
  std::vector<LevelError> levels;

  const LevelError& final_level() const { return levels.back(); }
  double max_linf() const;
};

/// Discrete error norms of numeric - exact per time level.
Comparison compare(const FieldGrid& numeric, const ExactSolution& exact);

struct ConvergenceStudy {
  std::vector<int> nx;
  std::vector<double> dx;
  std::vector<double> errors;  ///< final-time linf over both components
  std::vector<double> orders;  ///< log2 of successive error ratios
  bool floor_reached{false};
  double seconds{0.0};

  /// Order from the two finest levels; NaN when the floor is reached.
  double observed_order() const;
  std::string summary() const;
};

/**
 * Runs simulate on nested refinements (nx - 1 doubled per level) and compares with sol at the final time.
 *
 * If every error is below floor_tol times the field scale, floor_reached is set and no order is fitted.
 */
ConvergenceStudy convergence_study(const ModelParams& params, const ExactSolution& sol, const EdgeConditions& bc,
                                   const GridSpec& base, int levels, const SolverConfig& cfg = {},
                                   double floor_tol = 1e-11);

/// Trapezoid-rule integral of one row.
double trapezoid(const std::vector<double>& values, double dx);

}  // namespace dht
