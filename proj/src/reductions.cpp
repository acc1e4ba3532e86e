#include "dhtlab/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "dhtlab/errors.hpp"

namespace dht {

namespace {

bool eq(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double nonzero_phi(double phi, const char* name = "phi") {
  if (phi == 0.0 || !std::isfinite(phi)) throw SingularDenominator(std::string(name) + " = 0 in the reduced system");
  return phi;
}

IntegratorOptions options_for(double reltol) {
  if (!(reltol > 0.0)) throw InvalidParameter("reltol", "must be positive");
  IntegratorOptions opt;
  opt.rtol = reltol;
  opt.atol = reltol * 1e-3;
  return opt;
}

void check_span(double w0, double w1) {
  if (!std::isfinite(w0) || !std::isfinite(w1) || w0 == w1) {
    throw InvalidParameter("span", "must be finite and nondegenerate");
  }
}

void check_finite(const State& y0) {
  for (double v : y0) {
    if (!std::isfinite(v)) throw InvalidParameter("y0", "initial data must be finite");
  }
}

/// Derivative of component i of the dense output at t by a central difference.
double dense_slope(const OdeTrajectory& traj, std::size_t i, double t, double h) {
  return (traj.at(t + h, i) - traj.at(t - h, i)) / (2.0 * h);
}

}  // namespace

std::string to_string(ReductionTag tag) {
  switch (tag) {
    case ReductionTag::T2C1: return "T2C1";
    case ReductionTag::T2C1_scalar: return "T2C1_scalar";
    case ReductionTag::T2C2: return "T2C2";
    case ReductionTag::T2C3: return "T2C3";
    case ReductionTag::T2C4: return "T2C4";
    case ReductionTag::CSI: return "CSI";
    case ReductionTag::CSII: return "CSII";
  }
  return "?";
}

ReductionTag parse_reduction_tag(const std::string& text) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  for (ReductionTag t : {ReductionTag::T2C1, ReductionTag::T2C1_scalar, ReductionTag::T2C2, ReductionTag::T2C3,
                         ReductionTag::T2C4, ReductionTag::CSI, ReductionTag::CSII}) {
    std::string name = to_string(t);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    if (name == s) return t;
  }
  throw InvalidParameter("case", "unknown reduction \"" + text + "\"");
}

std::size_t state_dimension(ReductionTag tag) {
  switch (tag) {
    case ReductionTag::T2C1:
    case ReductionTag::T2C1_scalar:
    case ReductionTag::T2C3: return 4;
    default: return 2;
  }
}

void validate_case(const ReductionCase& rc, const ModelParams& p) {
  p.validate();
  const std::string tag = to_string(rc.tag);
  if (p.A != 0.0) throw ConstraintError(tag + " requires A = 0");
  switch (rc.tag) {
    case ReductionTag::T2C1:
    case ReductionTag::T2C1_scalar:
    case ReductionTag::T2C2: break;
    case ReductionTag::T2C3:
      if (!eq(p.d, 1.0)) throw ConstraintError(tag + " requires d = 1");
      if (rc.alpha == 0.0) throw ConstraintError(tag + " requires alpha != 0");
      break;
    case ReductionTag::T2C4:
      if (!eq(p.d, 1.0)) throw ConstraintError(tag + " requires d = 1");
      break;
    case ReductionTag::CSI:
      if (!eq(p.R, p.S)) throw ConstraintError(tag + " requires R = S");
      if (eq(p.d, 1.0)) throw ConstraintError(tag + " requires d != 1");
      if (!rc.f) throw InvalidParameter("f", "CSI needs the function f(t)");
      break;
    case ReductionTag::CSII:
      if (!eq(p.R, p.S)) throw ConstraintError(tag + " requires R = S");
      if (!eq(p.d, 1.0)) throw ConstraintError(tag + " requires d = 1");
      if (!rc.gh) throw InvalidParameter("gh", "CSII needs the functions g(t), h(t)");
      break;
  }
}

State reduced_rhs(const ReductionCase& rc, const ModelParams& p, double w, const State& y) {
  if (y.size() != state_dimension(rc.tag)) {
    throw InvalidParameter("state", to_string(rc.tag) + " expects " + std::to_string(state_dimension(rc.tag)) +
                                        " components");
  }
  const double R = p.R, S = p.S, d = p.d, a = rc.alpha, b = rc.beta;
  switch (rc.tag) {
    case ReductionTag::T2C1: {
      const double phi = nonzero_phi(y[0]);
      const double psi = y[2];
      const double phi2 = -a * y[1] - (1.0 - b) * phi + R * psi;
      const double psi2 = (-a * y[3] - (S - b) * psi + S * psi * psi / phi) / d;
      return {y[1], phi2, y[3], psi2};
    }
    case ReductionTag::T2C1_scalar: {
      const double phi = nonzero_phi(y[0]);
      const double p1 = y[1], p2 = y[2], p3 = y[3];
      // fourth_order_lhs is linear in phi'''' with coefficient d R.
      const double rest = fourth_order_lhs(p, a, b, phi, p1, p2, p3, 0.0);
      return {p1, p2, p3, -rest / (d * R)};
    }
    case ReductionTag::T2C2: {
      const double phi = nonzero_phi(y[0]);
      const double psi = y[1];
      return {(1.0 + b * b) * phi - R * psi, (S + d * b * b) * psi - S * psi * psi / phi};
    }
    case ReductionTag::T2C3: {
      const double phi = nonzero_phi(y[0]);
      const double psi = y[2];
      const double a2 = a * a, a4 = a2 * a2;
      const double phi2 = ((w - a2) * phi + R * a2 * psi) / a4;
      const double psi2 = ((w - S * a2) * psi + S * a2 * psi * psi / phi) / a4;
      return {y[1], phi2, y[3], psi2};
    }
    case ReductionTag::T2C4: {
      if (w <= 0.0) throw DomainError("T2C4 requires t > 0");
      const double phi = nonzero_phi(y[0]);
      const double psi = y[1];
      const double k = 1.0 / (2.0 * w);
      return {(1.0 - k) * phi - R * psi, (S - k) * psi - S * psi * psi / phi};
    }
    case ReductionTag::CSI: {
      const double phi = nonzero_phi(y[0]);
      const double psi = y[1];
      const CaseOneF f = rc.f(w);
      const double f2 = f.f * f.f;
      return {(1.0 + f2) * phi - S * psi,
              (S + d * f2) * psi - S * psi * psi / phi - 2.0 * d * f.f * f.fp / S * phi};
    }
    case ReductionTag::CSII: {
      const double phi = nonzero_phi(y[0]);
      const double psi = y[1];
      const CaseTwoGH q = rc.gh(w);
      const double g = nonzero_phi(q.g, "g");
      const double common = q.h * q.h / (g * g) - q.gp / (2.0 * g);
      return {(1.0 + common) * phi - S * psi,
              (S + common) * psi - S * psi * psi / phi + (g * q.gpp - 4.0 * q.h * q.hp) / (2.0 * S * g * g) * phi};
    }
  }
  return {};
}

OdeTrajectory integrate(const ReductionCase& rc, const ModelParams& params, const State& y0, double w0, double w1,
                        double reltol) {
  validate_case(rc, params);
  check_span(w0, w1);
  check_finite(y0);
  if (y0.size() != state_dimension(rc.tag)) {
    throw InvalidParameter("y0", to_string(rc.tag) + " expects " + std::to_string(state_dimension(rc.tag)) +
                                     " components");
  }
  const OdeRhs rhs = [&rc, &params](double w, const State& y, State& dy) { dy = reduced_rhs(rc, params, w, y); };
  return integrate_ode(rhs, y0, w0, w1, options_for(reltol));
}

double fourth_order_lhs(const ModelParams& p, double a, double b, double p0, double p1, double p2, double p3,
                        double p4) {
  const double R = p.R, S = p.S, d = p.d;
  nonzero_phi(p0);
  return d * R * p4 + a * (1.0 + d) * R * p3 - S * p2 * p2 / p0 - 2.0 * a * S * p1 * p2 / p0 -
         a * a * S * p1 * p1 / p0 + (2.0 * S * (b - 1.0) + R * (a * a + d + S - b - d * b)) * p2 +
         a * (2.0 * S * (b - 1.0) + R * (1.0 + S - 2.0 * b)) * p1 +
         (1.0 - b) * (S * (b - 1.0) + R * (S - b)) * p0;
}

double fourth_order_consistency(const ReductionCase& rc, const ModelParams& p, const OdeTrajectory& traj) {
  if (rc.tag != ReductionTag::T2C1) throw InvalidParameter("case", "fourth-order consistency needs a T2C1 trajectory");
  const double a = rc.alpha, b = rc.beta, R = p.R;
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.w.size(); ++k) {
    const State& y = traj.y[k];
    const State dy = reduced_rhs(rc, p, traj.w[k], y);
    const double p0 = y[0], p1 = y[1], p2 = dy[1];
    const double psi1 = y[3], psi2 = dy[3];
    const double p3 = -a * p2 - (1.0 - b) * p1 + R * psi1;
    const double p4 = -a * p3 - (1.0 - b) * p2 + R * psi2;
    const double scale = std::max({1.0, std::abs(p0), std::abs(p1), std::abs(p2), std::abs(p3), std::abs(p4)});
    worst = std::max(worst, std::abs(fourth_order_lhs(p, a, b, p0, p1, p2, p3, p4)) / scale);
  }
  return worst;
}

OdeTrajectory integrate_chi(const ChiBranch& branch, const ModelParams& params, double chi0, double t0, double t1,
                            double reltol) {
  validate_branch(branch, params);
  check_span(t0, t1);
  if (!std::isfinite(chi0)) throw InvalidParameter("chi0", "must be finite");
  const bool case4 = is_case4(branch.tag);
  if (case4 && (t0 <= 0.0 || t1 <= 0.0)) throw DomainError(to_string(branch.tag) + " requires t > 0");
  const OdeRhs rhs = [&](double t, const State& y, State& dy) {
    dy.assign(1, chi_riccati_rhs(case4, params, branch.beta, t, y[0]));
  };
  try {
    return integrate_ode(rhs, {chi0}, t0, t1, options_for(reltol));
  } catch (const IntegrationFailure& e) {
    throw IntegrationFailure("chi has a pole near t = " + num(e.last_reached()) + " (" + e.what() + ")",
                             e.last_reached());
  }
}

ExactSolution chi_to_solution(const ChiBranch& branch, const ModelParams& params, double phi0) {
  validate_branch(branch, params);
  if (!(phi0 > 0.0) || !std::isfinite(phi0)) throw InvalidParameter("phi0", "must be positive and finite");
  const bool case4 = is_case4(branch.tag);
  const double log_phi0 = std::log(phi0);
  const double R = params.R;
  const double b2 = 1.0 + branch.beta * branch.beta;
  const double beta = branch.beta;
  Domain dom{case4 ? "t > 0, away from the poles of chi" : "away from the poles of chi",
             [branch, params](double t, double) { return chi_regular(branch, params, t); }};
  ExactSolution::Evaluator ev = [=](double t, double x) {
    const double chi = chi_closed_form(branch, params, t);
    const double lam = chi_log_integral(branch, params, t);
    if (case4) {
      const double u = std::exp(log_phi0 + lam - x * x / (4.0 * t));
      return FieldSample{u, (1.0 - 1.0 / (2.0 * t) - chi) / R * u};
    }
    const double u = std::exp(log_phi0 + lam + beta * x);
    return FieldSample{u, (b2 - chi) / R * u};
  };
  ExactSolution sol(Family::Lifted, params, std::move(dom), std::move(ev));
  sol.with_seed("chi:" + to_string(branch.tag));
  std::ostringstream note;
  note << (case4 ? "Gaussian-source ansatz" : "exponential-separable ansatz") << ", C = " << branch.C;
  if (!case4) note << ", beta = " << beta;
  note << ", phi0 = " << phi0;
  sol.add_note(note.str());
  return sol;
}

double f_first_integral_rhs(const ModelParams& p, double C1, double f) {
  return (p.d - 1.0) / 3.0 * f * f * f + (p.S - 1.0) * f + C1;
}

OdeTrajectory f_solve(const ModelParams& params, double C1, double f0, double t0, double t1, double reltol) {
  params.validate();
  if (eq(params.d, 1.0)) throw ConstraintError("the f equation requires d != 1");
  check_span(t0, t1);
  if (!std::isfinite(f0) || !std::isfinite(C1)) throw InvalidParameter("f0", "f0 and C1 must be finite");
  const OdeRhs rhs = [&](double, const State& y, State& dy) { dy.assign(1, f_first_integral_rhs(params, C1, y[0])); };
  IntegratorOptions opt = options_for(reltol);
  opt.blowup = 1e100;
  try {
    return integrate_ode(rhs, {f0}, t0, t1, opt);
  } catch (const IntegrationFailure& e) {
    throw IntegrationFailure("f blows up near t = " + num(e.last_reached()), e.last_reached());
  }
}

double f_equation_residual(const ModelParams& p, const OdeTrajectory& traj, std::size_t n, double h) {
  const double lo = std::min(traj.front(), traj.back()) + 2.0 * h;
  const double hi = std::max(traj.front(), traj.back()) - 2.0 * h;
  if (!(hi > lo) || n < 2) throw InvalidParameter("span", "trajectory too short for the residual check");
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    const double f = traj.at(t, 0);
    const double fp = traj.derivative_at(t)[0];
    const double fpp = (traj.derivative_at(t + h)[0] - traj.derivative_at(t - h)[0]) / (2.0 * h);
    worst = std::max(worst, std::abs(fpp + (1.0 - p.d) * f * f * fp + (1.0 - p.S) * fp));
  }
  return worst;
}

ExactSolution caseI_pipeline(const ModelParams& params, double C1, double f0, double chi0, double t0, double t1,
                             double phi0, double reltol) {
  params.validate();
  if (params.A != 0.0) throw ConstraintError("the Case-I pipeline requires A = 0");
  if (!eq(params.R, params.S)) throw ConstraintError("the Case-I pipeline requires R = S");
  if (eq(params.d, 1.0)) throw ConstraintError("the Case-I pipeline requires d != 1");
  if (!(t1 > t0)) throw InvalidParameter("span", "requires t1 > t0");
  if (!(phi0 > 0.0)) throw InvalidParameter("phi0", "must be positive");
  if (!std::isfinite(f0) || !std::isfinite(chi0)) throw InvalidParameter("f0", "initial data must be finite");
  const ModelParams p = params;
  const OdeRhs rhs = [p, C1](double, const State& y, State& dy) {
    const double f = y[0];
    const double fp = f_first_integral_rhs(p, C1, f);
    const KCoefficients K = case_one_K(p, f, fp);
    dy.resize(3);
    dy[0] = fp;
    dy[1] = -K.K1 * y[1] - K.K0;
    dy[2] = y[1];
  };
  IntegratorOptions opt = options_for(reltol);
  opt.h_max = (t1 - t0) / 400.0;
  opt.blowup = 1e100;
  auto traj = std::make_shared<const OdeTrajectory>(integrate_ode(rhs, {f0, chi0, 0.0}, t0, t1, opt));
  const double S = p.S;
  const double log_phi0 = std::log(phi0);
  Domain dom{"t in [" + num(t0) + ", " + num(t1) + "]", [t0, t1](double t, double) { return t >= t0 && t <= t1; }};
  ExactSolution::Evaluator ev = [traj, p, C1, S, log_phi0](double t, double x) {
    const State y = traj->at(t);
    const double f = y[0], chi = y[1], lam = y[2];
    const double fp = f_first_integral_rhs(p, C1, f);
    const double u = std::exp(log_phi0 + lam + x * f);
    return FieldSample{u, ((1.0 + f * f - chi) / S - x * fp / S) * u};
  };
  ExactSolution sol(Family::Lifted, p, std::move(dom), std::move(ev));
  sol.with_seed("caseI_pipeline");
  std::ostringstream note;
  note << "numeric coefficients, C1 = " << C1 << ", f(t0) = " << f0 << ", chi(t0) = " << chi0;
  sol.add_note(note.str());
  return sol;
}

OdeTrajectory gh_solve(double S, double C, double g0, double gp0, double h0, double hp0, double t0, double t1,
                       double reltol) {
  check_span(t0, t1);
  check_finite({S, C, g0, gp0, h0, hp0});
  if (g0 == 0.0) throw SingularDenominator("g(t0) = 0 in the (g, h) system");
  const OdeRhs rhs = [S, C](double t, const State& y, State& dy) {
    const double g = y[0];
    if (std::abs(g) < 1e-12) throw SingularDenominator("g = 0 in the (g, h) system");
    const double gpp = C * std::exp((S - 1.0) * t) / g;
    dy.resize(4);
    dy[0] = y[1];
    dy[1] = gpp;
    dy[2] = y[3];
    dy[3] = -y[2] * gpp / g - (1.0 - S) * y[3];
  };
  try {
    return integrate_ode(rhs, {g0, gp0, h0, hp0}, t0, t1, options_for(reltol));
  } catch (const IntegrationFailure& e) {
    throw SingularDenominator("g approaches 0 near t = " + num(e.last_reached()) + " (" + e.what() + ")");
  }
}

GhResidual gh_residual(double S, double C, const OdeTrajectory& traj, std::size_t n, double h) {
  const double lo = std::min(traj.front(), traj.back()) + 2.0 * h;
  const double hi = std::max(traj.front(), traj.back()) - 2.0 * h;
  if (!(hi > lo) || n < 2) throw InvalidParameter("span", "trajectory too short for the residual check");
  GhResidual r;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    const State y = traj.at(t);
    const double gpp = dense_slope(traj, 1, t, h);
    const double hpp = dense_slope(traj, 3, t, h);
    r.e1 = std::max(r.e1, std::abs(y[2] * gpp + y[0] * (hpp + (1.0 - S) * y[3])));
    r.e2 = std::max(r.e2, std::abs(y[0] * gpp - C * std::exp((S - 1.0) * t)));
  }
  return r;
}

GhResidual gh_residual(double S, double C, const std::function<CaseTwoGH(double)>& gh, double t0, double t1,
                       std::size_t n, double h) {
  if (!(t1 > t0) || n < 2) throw InvalidParameter("span", "requires t1 > t0 and n >= 2");
  auto second = [h](double m2, double m1, double c, double p1, double p2) {
    return (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
  };
  auto first = [h](double m2, double m1, double p1, double p2) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  };
  GhResidual r;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n - 1);
    const CaseTwoGH m2 = gh(t - 2.0 * h), m1 = gh(t - h), c = gh(t), p1 = gh(t + h), p2 = gh(t + 2.0 * h);
    const double gpp = second(m2.g, m1.g, c.g, p1.g, p2.g);
    const double hpp = second(m2.h, m1.h, c.h, p1.h, p2.h);
    const double hp = first(m2.h, m1.h, p1.h, p2.h);
    r.e1 = std::max(r.e1, std::abs(c.h * gpp + c.g * (hpp + (1.0 - S) * hp)));
    r.e2 = std::max(r.e2, std::abs(c.g * gpp - C * std::exp((S - 1.0) * t)));
  }
  return r;
}

// ---------------------------------------------------------------------------
namespace {

constexpr int kOracleSamples = 201;

template <class F>
double sampled_max(double t0, double t1, F err) {
  double worst = 0.0;
  for (int k = 0; k < kOracleSamples; ++k) worst = std::max(worst, err(t0 + (t1 - t0) * k / (kOracleSamples - 1)));
  return worst;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

OracleReport chi_oracle(const ChiBranch& branch, const ModelParams& params, double t0, double t1, double reltol) {
  const OdeTrajectory tr = integrate_chi(branch, params, chi_closed_form(branch, params, t0), t0, t1, reltol);
  OracleReport r{"chi:" + to_string(branch.tag), t0, t1, 0.0, kOracleSamples, "mixed"};
  r.max_rel_error = sampled_max(t0, t1, [&](double t) {
    const double c = chi_closed_form(branch, params, t);
    return std::abs(tr.at(t, 0) - c) / std::max(1.0, std::abs(c));
  });
  return r;
}

OracleReport f_oracle(const ModelParams& params, int sign, double t0, double t1) {
  const OdeTrajectory tr = f_solve(params, 0.0, case_one_f(params, sign, t0).f, t0, t1, 1e-12);
  OracleReport r{sign > 0 ? "f:+" : "f:-", t0, t1, 0.0, kOracleSamples};
  r.max_rel_error = sampled_max(t0, t1, [&](double t) { return rel_diff(tr.at(t, 0), case_one_f(params, sign, t).f); });
  return r;
}

OracleReport caseI_oracle(const ModelParams& params, double C, double t0, double t1) {
  ReductionCase rc{ReductionTag::CSI};
  rc.f = [params](double t) { return case_one_f(params, 1, t); };
  const PhiPsi s0 = case_one_phi_psi(params, C, t0);
  const OdeTrajectory tr = integrate(rc, params, {s0.phi, s0.psi}, t0, t1);
  OracleReport r{"CSI", t0, t1, 0.0, kOracleSamples};
  r.max_rel_error = sampled_max(t0, t1, [&](double t) {
    const PhiPsi e = case_one_phi_psi(params, C, t);
    return std::max(rel_diff(tr.at(t, 0), e.phi), rel_diff(tr.at(t, 1), e.psi));
  });
  return r;
}

OracleReport caseII_oracle(double S, double C, double C2, double C3, double t0, double t1) {
  const ModelParams p{0.0, S, S, 1.0};
  ReductionCase rc{ReductionTag::CSII};
  rc.gh = [=](double t) { return case_two_family_gh(S, C2, C3, t); };
  const PhiPsi s0 = case_two_phi_psi(S, C, C2, C3, t0);
  const OdeTrajectory tr = integrate(rc, p, {s0.phi, s0.psi}, t0, t1);
  OracleReport r{"CSII", t0, t1, 0.0, kOracleSamples};
  r.max_rel_error = sampled_max(t0, t1, [&](double t) {
    const PhiPsi e = case_two_phi_psi(S, C, C2, C3, t);
    return std::max(rel_diff(tr.at(t, 0), e.phi), rel_diff(tr.at(t, 1), e.psi));
  });
  return r;
}

OracleReport caseI_pipeline_oracle(const ModelParams& params, double C, double t0, double t1) {
  const CaseOneF f0 = case_one_f(params, 1, t0);
  const double chi0 =
      1.0 + f0.f * f0.f + 3.0 * (params.S - 1.0) * case_one_G(params, C, t0) / case_one_D(params, t0);
  const ExactSolution pipe = caseI_pipeline(params, 0.0, f0.f, chi0, t0, t1, case_one_phi_psi(params, C, t0).phi);
  const ExactSolution f7 = instantiate({CaseIParams{C, 1, false}, params});
  OracleReport r{"caseI_pipeline", t0, t1, 0.0, 0, "relative u, mixed v"};
  for (int i = 0; i < 21; ++i) {
    const double t = t0 + (t1 - t0) * i / 20;
    for (int j = 0; j < 21; ++j) {
      const double x = -1.0 + 2.0 * j / 20;
      const FieldSample a = pipe.evaluate(t, x), b = f7.evaluate(t, x);
      r.max_rel_error = std::max(
          {r.max_rel_error, rel_diff(a.u, b.u), std::abs(a.v - b.v) / std::max(1.0, std::abs(b.v))});
      ++r.samples;
    }
  }
  return r;
}

}  // namespace dht

