#include "dhtlab/core_model.hpp"

#include <cmath>

#include "dhtlab/errors.hpp"

namespace dht {

namespace {

void require_positive(const char* field, double value) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw InvalidParameter(field, "must be finite and > 0 (got " + std::to_string(value) + ")");
  }
}

void require_nonnegative(const char* field, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InvalidParameter(field, "must be finite and >= 0 (got " + std::to_string(value) + ")");
  }
}

void check_denominator(double value, const char* what, double tol) {
  if (!std::isfinite(value) || std::abs(value) < tol) {
    throw SingularDenominator(std::string("singular denominator: ") + what + " = " +
                              std::to_string(value));
  }
}

}  // namespace

void DimensionalParams::validate() const {
  require_positive("d1", d1);
  require_positive("d2", d2);
  require_positive("r", r);
  require_positive("q", q);
  require_nonnegative("A0", A0);
  require_positive("s", s);
  require_positive("h", h);
}

void ModelParams::validate() const {
  require_nonnegative("A", A);
  require_positive("R", R);
  require_positive("S", S);
  require_positive("d", d);
}

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::Dht: return "dht";
    case SystemKind::GaugeReduced: return "gauge-reduced";
  }
  return "unknown";
}

Nondimensionalized nondimensionalize(const DimensionalParams& p) {
  p.validate();
  Nondimensionalized out;
  out.params.A = p.A0;
  out.params.R = p.h * p.q / p.r;
  out.params.S = p.s / p.r;
  out.params.d = p.d2 / p.d1;
  out.scales.t_scale = 1.0 / p.r;
  out.scales.x_scale = std::sqrt(p.d1 / p.r);
  out.scales.u_scale = 1.0;
  out.scales.v_scale = p.h;
  return out;
}

Reaction reaction_rhs(const ModelParams& params, double u, double v, double singular_tol) {
  check_denominator(u, "u", singular_tol);
  check_denominator(u + params.A, "u + A", singular_tol);
  return {u * (1.0 - params.R * v / (u + params.A)), params.S * v * (1.0 - v / u)};
}

ResidualPair residual(const ModelParams& params, const Jet& jet, double singular_tol) {
  const Reaction r = reaction_rhs(params, jet.u, jet.v, singular_tol);
  return {jet.uxx - jet.ut + r.f, params.d * jet.vxx - jet.vt + r.g};
}

ResidualPair gauge_reduced_residual(const ModelParams& params, const Jet& jet,
                                    double singular_tol) {
  check_denominator(jet.u, "u", singular_tol);
  return {jet.uxx - jet.ut - params.R * jet.v,
          params.d * jet.vxx - jet.vt - jet.v * jet.v / jet.u};
}

ResidualPair residual(SystemKind system, const ModelParams& params, const Jet& jet,
                      double singular_tol) {
  return system == SystemKind::Dht ? residual(params, jet, singular_tol)
                                   : gauge_reduced_residual(params, jet, singular_tol);
}

FieldSample steady_state_value(const ModelParams& params) {
  if (!(params.A > 0.0) || !(params.R > 1.0)) {
    throw ConstraintError("steady state u = v = A/(R-1) requires A > 0 and R > 1");
  }
  const double w = params.A / (params.R - 1.0);
  return {w, w};
}

}  // namespace dht
