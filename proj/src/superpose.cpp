#include "dhtlab/superpose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dhtlab/errors.hpp"

namespace dht {

void SuperpositionSpec::validate() const {
  if (!(S > 1.0) || !std::isfinite(S)) throw InvalidParameter("S", "superposition needs S > 1");
  if (!std::isfinite(C)) throw InvalidParameter("C", "must be finite");
  if (shifts.empty()) throw InvalidParameter("shifts", "at least one shift is required");
  for (const PeakShift& s : shifts) {
    if (!std::isfinite(s.t_shift) || !std::isfinite(s.x_shift)) throw InvalidParameter("shifts", "must be finite");
  }
}

bool SuperpositionSpec::in_positivity_regime() const {
  double tmin = shifts.empty() ? 0.0 : shifts.front().t_shift;
  for (const PeakShift& s : shifts) tmin = std::min(tmin, s.t_shift);
  return S > 1.0 && C <= -0.125 * std::exp((1.0 - S) * tmin);
}

SuperpositionSpec SuperpositionSpec::figure_configuration(double spacing) {
  SuperpositionSpec spec;
  spec.S = 2.0;
  spec.C = -0.35;
  spec.shifts = {{-1.0, -spacing}, {0.0, 0.0}, {1.0, spacing}};
  return spec;
}

ExactSolution build(const SuperpositionSpec& spec) {
  spec.validate();
  const ModelParams p{0.0, spec.S, spec.S, 1.0};
  std::vector<ExactSolution> copies;
  std::ostringstream shifts;
  shifts.precision(10);
  for (const PeakShift& s : spec.shifts) {
    CaseIIParams cp;
    cp.form = CaseIIForm::Shifted;
    cp.C = spec.C;
    cp.t0 = s.t_shift;
    cp.x0 = s.x_shift;
    copies.push_back(instantiate({cp, p}));
    shifts << (shifts.tellp() > 0 ? " " : "") << "(" << s.t_shift << "," << s.x_shift << ")";
  }
  ExactSolution sol(Family::Superposition, p, Domain::everywhere(), [copies](double t, double x) {
    FieldSample sum;
    for (const ExactSolution& c : copies) {
      const FieldSample s = c.evaluate_raw(t, x);
      sum.u += s.u;
      sum.v += s.v;
    }
    return sum;
  });
  sol.mark_approximate().with_seed("superposition S=" + std::to_string(spec.S) + " C=" + std::to_string(spec.C));
  sol.add_note("shifts " + shifts.str());
  if (!spec.in_positivity_regime()) {
    sol.add_note("warning: C > -(1/8) e^{(1-S) min t_shift}; some copy may change sign for t >= 0");
  }
  return sol;
}

bool SpacingResidualCurve::monotone_decreasing(double noise_floor) const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].first <= points[i - 1].first) return false;
    if (points[i].second > points[i - 1].second + noise_floor) return false;
  }
  return true;
}

ResidualReport superposition_residual(const ExactSolution& sol, const GridSpec& grid) {
  ResidualOptions opt;
  opt.richardson = true;
  return residual_report(sol, grid, kDefaultFdStep, opt);
}

SpacingResidualCurve spacing_residual_curve(double S, double C, const std::vector<double>& spacings,
                                            const GridSpec& grid) {
  SpacingResidualCurve curve;
  for (double s : spacings) {
    if (!(s >= 0.0)) throw InvalidParameter("spacing", "spacings must be nonnegative");
    SuperpositionSpec spec;
    spec.S = S;
    spec.C = C;
    spec.shifts = {{0.0, -0.5 * s}, {0.0, 0.5 * s}};
    curve.points.emplace_back(s, superposition_residual(build(spec), grid).linf());
  }
  return curve;
}

int count_peaks(const ExactSolution& sol, double t, const GridSpec& grid) {
  int peaks = 0;
  double prev = sol.evaluate(t, grid.x(0)).u;
  double cur = sol.evaluate(t, grid.x(1)).u;
  for (int j = 1; j + 1 < grid.nx; ++j) {
    const double next = sol.evaluate(t, grid.x(j + 1)).u;
    if (cur > prev && cur > next) ++peaks;
    prev = cur;
    cur = next;
  }
  return peaks;
}

}  // namespace dht
