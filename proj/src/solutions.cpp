#include "dhtlab/solutions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "dhtlab/conditional.hpp"
#include "dhtlab/errors.hpp"
#include "dhtlab/riccati.hpp"
#include "dhtlab/special_fn.hpp"

namespace dht {

namespace {

constexpr double kEqTol = 1e-12;

bool eq(double a, double b) {
  return std::abs(a - b) <= kEqTol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void require(bool cond, const std::string& tag, const std::string& what) {
  if (!cond) throw ConstraintError(tag + " requires " + what);
}

/// ln cosh(y) without overflow.
double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

/// ln(C + e^{a t}) for C + e^{a t} > 0.
double log_c_plus_exp(double C, double a, double t) {
  const double at = a * t;
  if (at <= 0.0) return std::log(C + std::exp(at));
  return at + std::log1p(C * std::exp(-at));
}

Domain half_line_x() {
  return {"x > 0", [](double, double x) { return x > 0.0; }};
}

// ---------------------------------------------------------------------------
ExactSolution make_power_law(const PowerLawParams& fp, const ModelParams& p) {
  const std::string tag = "F1";
  require(p.A == 0.0, tag, "A = 0");
  require(!eq(p.d, 1.0), tag, "d != 1");
  require(eq(p.S, p.d * p.R), tag, "S = dR");
  if (fp.exponent != 1.0 && fp.exponent != 1.5) {
    throw InvalidParameter("exponent", "F1 exponent must be 1 or 3/2");
  }
  const double R = p.R, d = p.d;
  const double beta = d * (R - 1.0) / (1.0 - d);
  ExactSolution::Evaluator ev;
  if (fp.exponent == 1.5) {
    const double c1 = 3.0 / (4.0 * R);
    const double c2 = (1.0 - d * R) / ((1.0 - d) * R);
    ev = [=](double t, double x) {
      const double e = std::exp(beta * t);
      const double sx = std::sqrt(x);
      return FieldSample{x * sx * e, (c1 / sx + c2 * x * sx) * e};
    };
  } else {
    const double k = (1.0 - beta) / R;
    ev = [=](double t, double x) {
      const double e = std::exp(beta * t);
      return FieldSample{x * e, k * x * e};
    };
  }
  return ExactSolution(Family::F1_PowerLaw, p, half_line_x(), std::move(ev));
}

// ---------------------------------------------------------------------------
struct BranchCheck {
  double delta;
  double scale;
};

void check_branch(ProfileBranch b, const BranchCheck& c, const std::string& tag, const std::string& cond) {
  const double tol = kEqTol * c.scale;
  switch (b) {
    case ProfileBranch::TwoExponential:
      require(c.delta > tol, tag + " two-exponential branch", cond + " > 0");
      break;
    case ProfileBranch::Sine:
      require(c.delta < -tol, tag + " sine branch", cond + " < 0");
      break;
    case ProfileBranch::Linear:
      require(std::abs(c.delta) <= tol, tag + " linear branch", cond + " = 0");
      break;
  }
}

ExactSolution make_travelling(const TravellingParams& fp, const ModelParams& p) {
  const std::string tag = "F2";
  require(p.A == 0.0, tag, "A = 0");
  require(eq(p.d, 1.0), tag, "d = 1");
  require(!eq(p.R, p.S), tag, "R != S");
  const double R = p.R, S = p.S, al = fp.alpha, be = fp.beta;
  const double m = (R - 1.0) * S / (R - S);
  const double delta = be + al * al / 4.0 - m;
  check_branch(fp.branch, {delta, std::max({1.0, std::abs(m), std::abs(be), al * al})}, tag,
               "beta + alpha^2/4 - (R-1)S/(R-S)");
  const double kappa = std::sqrt(std::abs(delta));
  const double ratio = (1.0 - S) / (R - S);
  const double C0 = fp.C0, C1 = fp.C1, C2 = fp.C2;
  ExactSolution::Evaluator ev;
  switch (fp.branch) {
    case ProfileBranch::TwoExponential:
      if (fp.as_printed) {
        ev = [=](double t, double x) {
          const double u = C1 * std::exp(-(kappa + al / 2) * x + (2 * be + al * al + 2 * al * kappa) / 2 * t) +
                           C2 * std::exp(-(kappa - al / 2) * x + (2 * be - al * al + 2 * al * kappa) / 2 * t);
          return FieldSample{u, ratio * u};
        };
      } else {
        ev = [=](double t, double x) {
          const double u = C1 * std::exp(-(kappa + al / 2) * x + (be + al * al / 2 + al * kappa) * t) +
                           C2 * std::exp((kappa - al / 2) * x + (be + al * al / 2 - al * kappa) * t);
          return FieldSample{u, ratio * u};
        };
      }
      break;
    case ProfileBranch::Sine:
      ev = [=](double t, double x) {
        const double u = C1 * std::sin(kappa * (x - al * t) + C0) * std::exp(-al * x / 2 + (be + al * al / 2) * t);
        return FieldSample{u, ratio * u};
      };
      break;
    case ProfileBranch::Linear:
      ev = [=](double t, double x) {
        const double u = (C1 + C2 * (x - al * t)) * std::exp(-al * x / 2 + (al * al / 4 + m) * t);
        return FieldSample{u, ratio * u};
      };
      break;
  }
  ExactSolution sol(Family::F2_EqualDiffusionTravelling, p, Domain::everywhere(), std::move(ev));
  if (fp.as_printed && fp.branch == ProfileBranch::TwoExponential) {
    sol.mark_unverified().add_note("printed second exponential; fails the residual gate");
  }
  return sol;
}

// ---------------------------------------------------------------------------
ExactSolution make_stationary(const StationaryLiftParams& fp, const ModelParams& p) {
  const std::string tag = "F3";
  require(p.A == 0.0, tag, "A = 0");
  require(!eq(p.d, 1.0), tag, "d != 1");
  require(!eq(p.d * p.R, p.S), tag, "dR != S");
  const double R = p.R, S = p.S, d = p.d, be = fp.beta;
  const double q = ((R - S) * be + (1.0 - R) * S) / (d * R - S);
  check_branch(fp.branch, {q, std::max({1.0, std::abs(be), std::abs(R), std::abs(S)})}, tag,
               "((R-S) beta + (1-R) S)/(dR - S)");
  const double kappa = std::sqrt(std::abs(q));
  const double ratio = (d - S + (1.0 - d) * be) / (d * R - S);
  const double C0 = fp.C0, C1 = fp.C1, C2 = fp.C2;
  ExactSolution::Evaluator ev;
  Domain dom = Domain::everywhere();
  switch (fp.branch) {
    case ProfileBranch::TwoExponential:
      ev = [=](double t, double x) {
        const double u = (C1 * std::exp(-kappa * x) + C2 * std::exp(kappa * x)) * std::exp(be * t);
        return FieldSample{u, ratio * u};
      };
      break;
    case ProfileBranch::Sine:
      ev = [=](double t, double x) {
        const double u = C1 * std::sin(kappa * x + C0) * std::exp(be * t);
        return FieldSample{u, ratio * u};
      };
      if (fp.positive_lobes_only) {
        dom = {"C1 sin(kappa x + C0) > 0",
               [=](double, double x) { return C1 * std::sin(kappa * x + C0) > 0.0; }};
      }
      break;
    case ProfileBranch::Linear:
      ev = [=](double t, double x) {
        const double u = (C1 + C2 * x) * std::exp(be * t);
        return FieldSample{u, ratio * u};
      };
      break;
  }
  return ExactSolution(Family::F3_StationaryProfileLift, p, std::move(dom), std::move(ev));
}

// ---------------------------------------------------------------------------
ExactSolution make_exp_separable(const ExpSeparableParams& fp, const ModelParams& p) {
  const std::string tag = "F4";
  require(p.A == 0.0, tag, "A = 0");
  const double R = p.R, S = p.S, be = fp.beta, C = fp.C;
  const double gamma = chi_gamma(p, be);
  const bool gamma_zero = std::abs(gamma) <= kEqTol;
  ExpBranch branch = fp.branch;
  if (branch == ExpBranch::Auto) {
    branch = gamma_zero ? ExpBranch::GammaZero : (eq(R, S) ? ExpBranch::EqualRS : ExpBranch::Primary);
  }
  if (branch == ExpBranch::Primary) {
    require(!gamma_zero, tag + " primary branch", "gamma = 1 - S + (1-d) beta^2 != 0");
    require(!eq(R, S), tag + " primary branch", "R != S");
    const double pu = R / (R - S), pv = S / (R - S);
    const double b2 = 1.0 + be * be, sd = S + p.d * be * be, k = gamma / (R - S);
    Domain dom{"C + e^{-gamma t} > 0", [=](double t, double) { return C + std::exp(-gamma * t) > 0.0; }};
    ExactSolution::Evaluator ev = [=](double t, double x) {
      const double lb = log_c_plus_exp(C, -gamma, t);
      return FieldSample{std::exp(pu * lb + b2 * t + be * x), k * std::exp(pv * lb + sd * t + be * x)};
    };
    ExactSolution sol(Family::F4_ExpSeparable, p, std::move(dom), std::move(ev));
    sol.add_note("branch Primary");
    return sol;
  }
  ChiBranch cb;
  cb.beta = be;
  cb.C = C;
  if (branch == ExpBranch::EqualRS) {
    require(eq(R, S), tag + " EqualRS branch", "R = S");
    require(!gamma_zero, tag + " EqualRS branch", "gamma != 0");
    cb.tag = ChiBranchTag::EqualRS;
  } else {
    require(gamma_zero, tag + " GammaZero branch", "gamma = 1 - S + (1-d) beta^2 = 0");
    cb.tag = ChiBranchTag::GammaZero;
  }
  validate_branch(cb, p);
  const double b2 = 1.0 + be * be;
  Domain dom = Domain::everywhere();
  if (cb.tag == ChiBranchTag::GammaZero) {
    dom = {"C + m t != 0", [=](double t, double) { return chi_regular(cb, p, t); }};
  }
  ExactSolution::Evaluator ev = [=](double t, double x) {
    const double u = std::exp(chi_log_integral(cb, p, t) + be * x);
    return FieldSample{u, (b2 - chi_closed_form(cb, p, t)) / R * u};
  };
  ExactSolution sol(Family::F4_ExpSeparable, p, std::move(dom), std::move(ev));
  sol.add_note("branch " + to_string(cb.tag));
  return sol;
}

// ---------------------------------------------------------------------------
ExactSolution make_airy(const AiryParams& fp, const ModelParams& p) {
  const std::string tag = "F5";
  require(p.A == 0.0, tag, "A = 0");
  require(eq(p.d, 1.0), tag, "d = 1");
  require(fp.alpha != 0.0, tag, "alpha != 0");
  require(!eq(p.R, p.S), tag, "R != S");
  const double R = p.R, S = p.S, al = fp.alpha, C1 = fp.C1, C2 = fp.C2;
  const double a = 1.0 / std::cbrt(al * al * al * al);  // alpha^{-4/3}
  const double c = std::cbrt(al * al) * (1.0 - R) * S / (R - S);
  const double ratio = (S - 1.0) / (S - R);
  ExactSolution::Evaluator ev = [=](double t, double x) {
    const double z = a * (t * t - al * x) + c;
    const AiryPair w = airy(z);
    double u = C1 * w.ai;
    if (C2 != 0.0) u += C2 * w.bi;
    u *= std::exp(2.0 * t * t * t / (3.0 * al * al) - t * x / al);
    return FieldSample{u, ratio * u};
  };
  return ExactSolution(Family::F5_Airy, p, Domain::everywhere(), std::move(ev));
}

// ---------------------------------------------------------------------------
ExactSolution make_gaussian(const GaussianSourceParams& fp, const ModelParams& p) {
  const std::string tag = "F6";
  require(p.A == 0.0, tag, "A = 0");
  require(eq(p.d, 1.0), tag, "d = 1");
  require(!eq(p.R, p.S), tag, "R != S");
  require(!eq(p.S, 1.0), tag, "S != 1");
  const double R = p.R, S = p.S;
  if (fp.form == GaussianForm::General) {
    const double C = fp.C;
    const double pu = R / (R - S), pv = S / (R - S), ratio = (S - 1.0) / (S - R);
    Domain dom{"t > 0 and C + e^{(S-1)t} > 0",
               [=](double t, double) { return t > 0.0 && C + std::exp((S - 1.0) * t) > 0.0; }};
    ExactSolution::Evaluator ev = [=](double t, double x) {
      const double lb = log_c_plus_exp(C, S - 1.0, t);
      const double g = -x * x / (4.0 * t) - 0.5 * std::log(t);
      return FieldSample{std::exp(t + g + pu * lb), ratio * std::exp(S * t + g + pv * lb)};
    };
    ExactSolution sol(Family::F6_GaussianSource, p, std::move(dom), std::move(ev));
    sol.add_note("general form");
    return sol;
  }
  if (!(fp.t0 > 0.0)) throw InvalidParameter("t0", "F6 shifted form requires t0 > 0");
  const double t0 = fp.t0;
  const double pu = R / (R - S);
  const double k = (2.0 * S - R - R * S) / (2.0 * (S - R));
  const double c = (S - 1.0) / (2.0 * (S - R));
  Domain dom{"t > -t0", [=](double t, double) { return t > -t0; }};
  ExactSolution::Evaluator ev = [=](double t, double x) {
    const double T = t + t0;
    const double y = 0.5 * (S - 1.0) * T;
    const double u = std::exp(-0.5 * std::log(T) + pu * log_cosh(y) + k * t - x * x / (4.0 * T));
    return FieldSample{u, c * (1.0 + std::tanh(y)) * u};
  };
  ExactSolution sol(Family::F6_GaussianSource, p, std::move(dom), std::move(ev));
  sol.add_note("shifted form");
  return sol;
}

// ---------------------------------------------------------------------------
ExactSolution make_case_one(const CaseIParams& fp, const ModelParams& p) {
  const std::string tag = "F7";
  require(p.A == 0.0, tag, "A = 0");
  require(!eq(p.d, 1.0), tag, "d != 1");
  require(eq(p.R, p.S), tag, "R = S");
  require(!eq(p.S, 1.0), tag, "S != 1");
  require(p.S > 1.0, tag, "S > 1 (f is real only for S > 1)");
  if (fp.sign != 1 && fp.sign != -1) throw InvalidParameter("sign", "F7 sign must be +1 or -1");
  const double S = p.S, C = fp.C;
  const int sign = fp.sign;
  Domain dom = Domain::everywhere();
  if (p.d > 1.0) {
    dom = {"(d-1) e^{2(S-1)t} < 3", [=](double t, double) { return case_one_defined(p, t); }};
  }
  ExactSolution::Evaluator ev;
  if (fp.as_printed) {
    ev = [=](double t, double x) {
      const CaseOneF f = case_one_f(p, sign, t);
      const double G = case_one_G(p, C, t);
      const double D = case_one_D(p, t);
      const double E = std::exp((S - 1.0) * t);
      const double u = std::exp(case_one_log_phi(p, C, t) + x * f.f);
      const double bracket = 3.0 * (1.0 - S) / S * G / D - sign * std::cbrt(3.0 * (S - 1.0) / D) * E * x;
      return FieldSample{u, bracket * u};
    };
  } else {
    ev = [=](double t, double x) {
      const CaseOneF f = case_one_f(p, sign, t);
      const double G = case_one_G(p, C, t);
      const double D = case_one_D(p, t);
      const double u = std::exp(case_one_log_phi(p, C, t) + x * f.f);
      return FieldSample{u, (3.0 * (1.0 - S) * G / (S * D) - x * f.fp / S) * u};
    };
  }
  ExactSolution sol(Family::F7_ConditionalCaseI, p, std::move(dom), std::move(ev));
  if (fp.as_printed) sol.mark_unverified().add_note("printed cube-root v-component; fails the residual gate");
  return sol;
}

// ---------------------------------------------------------------------------
ExactSolution make_case_two(const CaseIIParams& fp, const ModelParams& p) {
  const std::string tag = "F8";
  require(p.A == 0.0, tag, "A = 0");
  require(eq(p.d, 1.0), tag, "d = 1");
  require(eq(p.R, p.S), tag, "R = S");
  const double S = p.S, C = fp.C, C2 = fp.C2, C3 = fp.C3;
  const double a = S - 1.0;
  ExactSolution::Evaluator ev;
  double regime_t0 = 0.0;
  bool regime_applies = false;
  switch (fp.form) {
    case CaseIIForm::ThreeParameter:
      ev = [=](double t, double x) {
        const double w = 4.0 * C3 * t - x;
        const double ce = C * std::exp(a * t);
        const double u = std::exp(((9.0 - S) / 8.0 - 4.0 * C3 * C3) * t + (2.0 * C3 - C2) * w - a * w * w / 8.0 + ce);
        const double q = 4.0 * C2 + a * w;
        return FieldSample{u, (q * q - 2.0 * a * (1.0 + 8.0 * ce)) / (16.0 * S) * u};
      };
      break;
    case CaseIIForm::Simplified:
      ev = [=](double t, double x) {
        const double ce = C * std::exp(a * t);
        const double u = std::exp((9.0 - S) / 8.0 * t + C2 * x - a * x * x / 8.0 + ce);
        const double q = 4.0 * C2 - a * x;
        return FieldSample{u, (q * q - 2.0 * a * (1.0 + 8.0 * ce)) / (16.0 * S) * u};
      };
      break;
    case CaseIIForm::Special:
    case CaseIIForm::Shifted: {
      const double t0 = fp.form == CaseIIForm::Shifted ? fp.t0 : 0.0;
      const double x0 = fp.form == CaseIIForm::Shifted ? fp.x0 : 0.0;
      ev = [=](double t, double x) {
        const double T = t + t0, X = x + x0;
        const double ce = C * std::exp(a * T);
        const double u = std::exp((9.0 - S) / 8.0 * T + ce - a * X * X / 8.0);
        return FieldSample{u, a / (16.0 * S) * (-2.0 - 16.0 * ce + a * X * X) * u};
      };
      regime_t0 = t0;
      regime_applies = true;
      break;
    }
  }
  ExactSolution sol(Family::F8_ConditionalCaseII, p, Domain::everywhere(), std::move(ev));
  sol.add_note("form " + to_string(fp.form));
  if (regime_applies) {
    const bool in_regime = S > 1.0 && C <= -0.125 * std::exp((1.0 - S) * regime_t0);
    sol.add_note(in_regime ? "positivity regime: C <= -(1/8) e^{(1-S) t0}, S > 1 holds"
                           : "outside the positivity regime C <= -(1/8) e^{(1-S) t0}, S > 1");
  }
  return sol;
}

ExactSolution make_steady(const ModelParams& p) {
  const FieldSample s = steady_state_value(p);
  return ExactSolution(Family::SteadyState, p, Domain::everywhere(), [s](double, double) { return s; });
}

}  // namespace

// ---------------------------------------------------------------------------
std::string family_tag(Family f) {
  switch (f) {
    case Family::F1_PowerLaw: return "F1";
    case Family::F2_EqualDiffusionTravelling: return "F2";
    case Family::F3_StationaryProfileLift: return "F3";
    case Family::F4_ExpSeparable: return "F4";
    case Family::F5_Airy: return "F5";
    case Family::F6_GaussianSource: return "F6";
    case Family::F7_ConditionalCaseI: return "F7";
    case Family::F8_ConditionalCaseII: return "F8";
    case Family::SteadyState: return "steady";
    case Family::Lifted: return "lifted";
    case Family::Superposition: return "superposition";
    case Family::Custom: return "custom";
  }
  return "?";
}

std::string family_name(Family f) {
  switch (f) {
    case Family::F1_PowerLaw: return "F1_PowerLaw";
    case Family::F2_EqualDiffusionTravelling: return "F2_EqualDiffusionTravelling";
    case Family::F3_StationaryProfileLift: return "F3_StationaryProfileLift";
    case Family::F4_ExpSeparable: return "F4_ExpSeparable";
    case Family::F5_Airy: return "F5_Airy";
    case Family::F6_GaussianSource: return "F6_GaussianSource";
    case Family::F7_ConditionalCaseI: return "F7_ConditionalCaseI";
    case Family::F8_ConditionalCaseII: return "F8_ConditionalCaseII";
    case Family::SteadyState: return "SteadyState";
    case Family::Lifted: return "Lifted";
    case Family::Superposition: return "Superposition";
    case Family::Custom: return "Custom";
  }
  return "?";
}

Family parse_family(const std::string& text) {
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  const std::string key = lower(text);
  for (int i = 0; i <= static_cast<int>(Family::Custom); ++i) {
    const auto f = static_cast<Family>(i);
    if (key == lower(family_tag(f)) || key == lower(family_name(f))) return f;
  }
  throw InvalidParameter("family", "unknown family \"" + text + "\"");
}

std::string to_string(ProfileBranch b) {
  switch (b) {
    case ProfileBranch::TwoExponential: return "two-exponential";
    case ProfileBranch::Sine: return "sine";
    case ProfileBranch::Linear: return "linear";
  }
  return "?";
}

std::string to_string(ExpBranch b) {
  switch (b) {
    case ExpBranch::Auto: return "auto";
    case ExpBranch::Primary: return "primary";
    case ExpBranch::EqualRS: return "equal-rs";
    case ExpBranch::GammaZero: return "gamma-zero";
  }
  return "?";
}

std::string to_string(CaseIIForm f) {
  switch (f) {
    case CaseIIForm::ThreeParameter: return "three-parameter";
    case CaseIIForm::Special: return "special";
    case CaseIIForm::Shifted: return "shifted";
    case CaseIIForm::Simplified: return "simplified";
  }
  return "?";
}

Family SolutionSpec::tag() const {
  switch (family.index()) {
    case 0: return Family::F1_PowerLaw;
    case 1: return Family::F2_EqualDiffusionTravelling;
    case 2: return Family::F3_StationaryProfileLift;
    case 3: return Family::F4_ExpSeparable;
    case 4: return Family::F5_Airy;
    case 5: return Family::F6_GaussianSource;
    case 6: return Family::F7_ConditionalCaseI;
    case 7: return Family::F8_ConditionalCaseII;
    default: return Family::SteadyState;
  }
}

Domain Domain::everywhere() { return {"all (t,x)", nullptr}; }

Domain Domain::intersect(const Domain& other) const {
  if (!contains) return other;
  if (!other.contains) return *this;
  auto a = contains;
  auto b = other.contains;
  return {description + " and " + other.description, [a, b](double t, double x) { return a(t, x) && b(t, x); }};
}

ExactSolution::ExactSolution(Family family, ModelParams params, Domain domain, Evaluator eval, SystemKind system)
    : family_(family),
      params_(params),
      domain_(std::move(domain)),
      eval_(std::make_shared<const Evaluator>(std::move(eval))),
      system_(system),
      seed_(family_tag(family)) {}

FieldSample ExactSolution::evaluate(double t, double x) const {
  if (!std::isfinite(t) || !std::isfinite(x)) {
    throw DomainError("evaluation point must be finite");
  }
  if (!domain_(t, x)) {
    throw DomainError("(t, x) = (" + num(t) + ", " + num(x) + ") violates the domain " + domain_.description +
                      " of " + provenance());
  }
  const FieldSample s = (*eval_)(t, x);
  if (!std::isfinite(s.u) || !std::isfinite(s.v)) {
    throw DomainError("non-finite value at (t, x) = (" + num(t) + ", " + num(x) + ") for " + provenance());
  }
  return s;
}

std::string ExactSolution::provenance() const {
  std::string out = seed_;
  for (const auto& c : chain_) out += " | " + c;
  return out;
}

ExactSolution& ExactSolution::with_spec(SolutionSpec spec) {
  spec_ = std::move(spec);
  return *this;
}
ExactSolution& ExactSolution::with_seed(std::string seed) {
  seed_ = std::move(seed);
  return *this;
}
ExactSolution& ExactSolution::mark_approximate(bool on) {
  approximate_ = approximate_ || on;
  return *this;
}
ExactSolution& ExactSolution::mark_unverified(bool on) {
  unverified_ = unverified_ || on;
  return *this;
}
ExactSolution& ExactSolution::add_transform(std::string description) {
  chain_.push_back(std::move(description));
  return *this;
}
ExactSolution& ExactSolution::add_note(std::string note) {
  notes_.push_back(std::move(note));
  return *this;
}

ExactSolution instantiate(const SolutionSpec& spec) {
  spec.params.validate();
  ExactSolution sol = std::visit(
      [&](const auto& fp) -> ExactSolution {
        using T = std::decay_t<decltype(fp)>;
        if constexpr (std::is_same_v<T, PowerLawParams>) return make_power_law(fp, spec.params);
        else if constexpr (std::is_same_v<T, TravellingParams>) return make_travelling(fp, spec.params);
        else if constexpr (std::is_same_v<T, StationaryLiftParams>) return make_stationary(fp, spec.params);
        else if constexpr (std::is_same_v<T, ExpSeparableParams>) return make_exp_separable(fp, spec.params);
        else if constexpr (std::is_same_v<T, AiryParams>) return make_airy(fp, spec.params);
        else if constexpr (std::is_same_v<T, GaussianSourceParams>) return make_gaussian(fp, spec.params);
        else if constexpr (std::is_same_v<T, CaseIParams>) return make_case_one(fp, spec.params);
        else if constexpr (std::is_same_v<T, CaseIIParams>) return make_case_two(fp, spec.params);
        else return make_steady(spec.params);
      },
      spec.family);
  sol.with_spec(spec);
  return sol;
}

PositivityResult positivity_scan(const ExactSolution& sol, const GridSpec& grid) {
  grid.validate();
  PositivityResult out;
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nx; ++j) {
      const double t = grid.t(i), x = grid.x(j);
      const FieldSample s = sol.evaluate(t, x);
      if (s.u < 0.0) {
        out.ok = false;
        out.first_violation = PositivityViolation{t, x, 'u', s.u};
        return out;
      }
      if (s.v < 0.0) {
        out.ok = false;
        out.first_violation = PositivityViolation{t, x, 'v', s.v};
        return out;
      }
    }
  }
  return out;
}

const std::vector<CatalogueEntry>& catalogue() {
  static const std::vector<CatalogueEntry> rows = {
      {"F1", "F1_PowerLaw", "d≠1, S=dR, p∈{1,3/2}",
       "u = x^p e^{βt}, β = d(R-1)/(1-d); v = (3/(4R) x^{-1/2} + (1-dR)/((1-d)R) x^{3/2}) e^{βt} for p=3/2, "
       "v = (1-β)/R x e^{βt} for p=1",
       "x > 0"},
      {"F2", "F2_EqualDiffusionTravelling", "d=1, R≠S, branch sign of β+α²/4-(R-1)S/(R-S)",
       "u = φ(x-αt) e^{βt} with exponential, sine or linear φ; v = (1-S)/(R-S) u", "all (t,x)"},
      {"F3", "F3_StationaryProfileLift", "d≠1, dR≠S, branch sign of ((R-S)β+(1-R)S)/(dR-S)",
       "u = φ(x) e^{βt} with exponential, sine or linear φ; v = (d-S+(1-d)β)/(dR-S) u",
       "all (t,x); sine lobes with u>0 on request"},
      {"F4", "F4_ExpSeparable", "γ=1-S+(1-d)β²; primary: γ≠0, R≠S; sub-branches R=S or γ=0",
       "u = (C+e^{-γt})^{R/(R-S)} e^{(1+β²)t+βx}, v = γ/(R-S) (C+e^{-γt})^{S/(R-S)} e^{(S+dβ²)t+βx}",
       "C + e^{-γt} > 0"},
      {"F5", "F5_Airy", "d=1, α≠0, R≠S",
       "u = (C1 Ai(z) + C2 Bi(z)) exp(2t³/(3α²) - tx/α), z = α^{-4/3}(t²-αx) + α^{2/3}(1-R)S/(R-S); "
       "v = (S-1)/(S-R) u",
       "all (t,x)"},
      {"F6", "F6_GaussianSource", "d=1, R≠S, S≠1, t₀>0",
       "u = (t+t₀)^{-1/2} cosh((S-1)(t+t₀)/2)^{R/(R-S)} exp((2S-R-RS)t/(2(S-R)) - x²/(4(t+t₀))), "
       "v = (S-1)/(2(S-R)) (1 + tanh((S-1)(t+t₀)/2)) u; general form with C on t > 0",
       "t > -t₀"},
      {"F7", "F7_ConditionalCaseI", "R=S, d≠1, S>1, sign ±1",
       "u = φ(t) e^{x f(t)}, v = (ψ(t)/φ(t) - x f'(t)/S) u, f = ±sqrt(3(S-1)/D) e^{(S-1)t}, "
       "D = 3 + (1-d) e^{2(S-1)t}",
       "all (t,x) for d<1; (d-1) e^{2(S-1)t} < 3 for d>1"},
      {"F8", "F8_ConditionalCaseII", "R=S, d=1; positive for C ≤ -(1/8)e^{(1-S)t₀}, S>1",
       "u = exp((9-S)t/8 + C e^{(S-1)t} - (S-1)x²/8), v = (S-1)/(16S) (-2 - 16C e^{(S-1)t} + (S-1)x²) u; "
       "three-parameter, shifted and simplified forms",
       "all (t,x)"},
  };
  return rows;
}

SolutionSpec representative_spec(Family f) {
  switch (f) {
    case Family::F1_PowerLaw: return {PowerLawParams{1.5}, {0.0, 3.0, 1.5, 0.5}};
    case Family::F2_EqualDiffusionTravelling: {
      TravellingParams tp;
      tp.alpha = 1.0;
      tp.beta = -1.0;
      tp.C1 = 1.0;
      tp.C2 = 1.0;
      return {tp, {0.0, 2.0, 3.0, 1.0}};
    }
    case Family::F3_StationaryProfileLift: {
      StationaryLiftParams sp;
      sp.beta = 1.0;
      sp.C1 = 1.0;
      sp.C2 = 1.0;
      return {sp, {0.0, 2.0, 0.5, 0.5}};
    }
    case Family::F4_ExpSeparable: return {ExpSeparableParams{0.3, 1.0, ExpBranch::Auto}, {0.0, 2.0, 0.5, 1.5}};
    case Family::F5_Airy: return {AiryParams{1.0, 1.0, 0.0}, {0.0, 2.0, 3.0, 1.0}};
    case Family::F6_GaussianSource:
      return {GaussianSourceParams{GaussianForm::Shifted, 1.0, 0.1}, {0.0, 1.5, 3.0, 1.0}};
    case Family::F7_ConditionalCaseI: return {CaseIParams{0.5, 1, false}, {0.0, 1.5, 1.5, 0.5}};
    case Family::F8_ConditionalCaseII: {
      CaseIIParams cp;
      cp.form = CaseIIForm::Special;
      cp.C = -0.25;
      return {cp, {0.0, 2.0, 2.0, 1.0}};
    }
    case Family::SteadyState: return {SteadyStateParams{}, {1.0, 2.0, 1.0, 1.0}};
    default: break;
  }
  throw InvalidParameter("family", family_tag(f) + " has no representative parameter point");
}

GridSpec representative_window(Family f) {
  switch (f) {
    case Family::F1_PowerLaw: return {0.0, 1.0, 41, 0.5, 2.0, 41};
    case Family::F5_Airy: return {0.0, 1.0, 41, -2.0, 2.0, 41};
    case Family::F6_GaussianSource: return {0.0, 3.0, 41, -6.0, 6.0, 41};
    case Family::F8_ConditionalCaseII: return {0.0, 3.0, 41, -10.0, 10.0, 41};
    default: return {0.0, 1.0, 41, -1.0, 1.0, 41};
  }
}

}  // namespace dht
