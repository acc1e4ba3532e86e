#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dhtlab/grid.hpp"
#include "dhtlab/solutions.hpp"
#include "dhtlab/verify.hpp"

namespace dht {

/// One shifted copy u(t + t_shift, x + x_shift) of the Case-II special solution.
struct PeakShift {
  double t_shift{0.0};
  double x_shift{0.0};
};

/**
 * Sum of shifted copies of the Case-II special solution (R = S, d = 1, A = 0).
 *
 * The sum is not an exact solution; it is close to one when the peaks are far apart
 * because every copy decays like exp(-(S-1) x^2 / 8).
 */
struct SuperpositionSpec {
  double S{2.0};
  double C{-0.35};
  std::vector<PeakShift> shifts;

  /// Throws InvalidParameter unless S > 1 and shifts is nonempty.
  void validate() const;
  /// Positivity regime of every copy on t >= 0: C <= -(1/8) e^{(1-S) min t_shift}.
  bool in_positivity_regime() const;
  /// Copies with the default x shifts {-30, 0, 30} and t shifts {-1, 0, 1}, paired in order.
  static SuperpositionSpec figure_configuration(double spacing = 30.0);
};

/// The approximate solution; flagged approximate, family Superposition.
ExactSolution build(const SuperpositionSpec& spec);

struct SpacingResidualCurve {
  std::vector<std::pair<double, double>> points;  ///< (spacing, residual linf)

  /// True if residuals decrease with spacing, allowing increases up to noise_floor.
  bool monotone_decreasing(double noise_floor) const;
};

/// Residual report of an approximate solution with Richardson-extrapolated differences, so that
/// truncation error of the stencil far from the origin stays below the superposition error.
ResidualReport superposition_residual(const ExactSolution& sol, const GridSpec& grid);

/// Two peaks at x shifts -s/2 and +s/2 (t shift 0) for every spacing s, residual linf on grid.
SpacingResidualCurve spacing_residual_curve(double S, double C, const std::vector<double>& spacings,
                                            const GridSpec& grid);

/// Number of strict interior local maxima of u along x in row t.
int count_peaks(const ExactSolution& sol, double t, const GridSpec& grid);

}  // namespace dht
