#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace dht {

using State = std::vector<double>;

/// dy/dw = rhs(w, y); writes into dydw (same size as y).
using OdeRhs = std::function<void(double w, const State& y, State& dydw)>;

struct IntegratorOptions {
  double rtol{1e-9};
  double atol{1e-12};
  double h_max{std::numeric_limits<double>::infinity()};
  double h_init{0.0};  ///< 0 selects an initial step automatically
  std::size_t max_steps{2'000'000};
  double blowup{1e150};  ///< any |y_i| above this counts as finite-time blow-up
};

/**
 * Accepted steps of an adaptive integration, with cubic Hermite dense output.
 *
 * Samples are stored in integration order, so w is monotone (increasing or decreasing).
 */
class OdeTrajectory {
 public:
  std::vector<double> w;
  std::vector<State> y;
  std::vector<State> dy;
  double achieved_tolerance{0.0};  ///< largest accepted scaled error estimate times rtol
  std::size_t rejected_steps{0};

  double front() const { return w.front(); }
  double back() const { return w.back(); }
  std::size_t dimension() const { return y.empty() ? 0 : y.front().size(); }

  /// Dense output at any w inside the integrated span; throws DomainError outside.
  State at(double wq) const;
  double at(double wq, std::size_t component) const;
  /// Derivative of the dense output.
  State derivative_at(double wq) const;

 private:
  std::size_t locate(double wq) const;
};

/**
 * Dormand-Prince 5(4) with elementary step-size control.
 *
 * Throws IntegrationFailure (with the last reached w) on step underflow, on blow-up,
 * when the step budget runs out, or when the right-hand side keeps failing near a
 * singularity. Errors thrown by rhs during trial stages cause a step rejection.
 */
OdeTrajectory integrate_ode(const OdeRhs& rhs, const State& y0, double w0, double w1,
                            const IntegratorOptions& options = {});

}  // namespace dht
