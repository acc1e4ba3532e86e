#include "dhtlab/riccati.hpp"

#include <cmath>
#include <sstream>

#include "dhtlab/errors.hpp"

namespace dht {

namespace {

constexpr double kEqTol = 1e-12;
constexpr double kPoleTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) <= kEqTol * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

std::string pole_message(const ChiBranch& b, double t) {
  std::ostringstream os;
  os << to_string(b.tag) << " branch has a pole at t = " << t;
  return os.str();
}

/// ln|C + e^{a t}| without overflowing the exponential.
double log_abs_c_plus_exp(double C, double a, double t) {
  const double at = a * t;
  if (at <= 0.0) return std::log(std::abs(C + std::exp(at)));
  return at + std::log(std::abs(1.0 + C * std::exp(-at)));
}

}  // namespace

std::string to_string(ChiBranchTag tag) {
  switch (tag) {
    case ChiBranchTag::Primary: return "Primary";
    case ChiBranchTag::EqualRS: return "EqualRS";
    case ChiBranchTag::GammaZero: return "GammaZero";
    case ChiBranchTag::Case4General: return "Case4General";
    case ChiBranchTag::Case4EqualRS: return "Case4EqualRS";
  }
  return "?";
}

bool is_case4(ChiBranchTag tag) {
  return tag == ChiBranchTag::Case4General || tag == ChiBranchTag::Case4EqualRS;
}

double chi_gamma(const ModelParams& p, double beta) { return 1.0 - p.S + (1.0 - p.d) * beta * beta; }

double chi_gamma_zero_slope(const ModelParams& p, double beta) {
  return p.R - 1.0 + (p.d - 1.0) * beta * beta;
}

void validate_branch(const ChiBranch& b, const ModelParams& p) {
  p.validate();
  if (p.A != 0.0) throw ConstraintError(to_string(b.tag) + " branch requires A = 0");
  const double gamma = chi_gamma(p, b.beta);
  const bool equal_rs = near(p.R, p.S);
  const bool gamma_zero = std::abs(gamma) <= kEqTol;
  switch (b.tag) {
    case ChiBranchTag::Primary:
      if (gamma_zero) throw ConstraintError("Primary branch requires gamma = 1 - S + (1-d) beta^2 != 0");
      if (equal_rs) throw ConstraintError("Primary branch requires R != S");
      break;
    case ChiBranchTag::EqualRS:
      if (!equal_rs) throw ConstraintError("EqualRS branch requires R = S");
      if (gamma_zero) throw ConstraintError("EqualRS branch requires gamma != 0");
      break;
    case ChiBranchTag::GammaZero:
      if (!gamma_zero) throw ConstraintError("GammaZero branch requires gamma = 1 - S + (1-d) beta^2 = 0");
      if (std::abs(chi_gamma_zero_slope(p, b.beta)) <= kEqTol && b.C == 0.0) {
        throw ConstraintError("GammaZero branch with m = 0 requires C != 0");
      }
      break;
    case ChiBranchTag::Case4General:
      if (p.d != 1.0) throw ConstraintError("Case4General branch requires d = 1");
      if (equal_rs) throw ConstraintError("Case4General branch requires R != S");
      break;
    case ChiBranchTag::Case4EqualRS:
      if (p.d != 1.0) throw ConstraintError("Case4EqualRS branch requires d = 1");
      if (!equal_rs) throw ConstraintError("Case4EqualRS branch requires R = S");
      break;
  }
}

bool chi_regular(const ChiBranch& b, const ModelParams& p, double t) {
  if (!std::isfinite(t)) return false;
  switch (b.tag) {
    case ChiBranchTag::Primary:
      return std::abs(1.0 + b.C * std::exp(chi_gamma(p, b.beta) * t)) > kPoleTol;
    case ChiBranchTag::EqualRS:
      return true;
    case ChiBranchTag::GammaZero: {
      const double m = chi_gamma_zero_slope(p, b.beta);
      return std::abs(b.C + m * t) > kPoleTol;
    }
    case ChiBranchTag::Case4General:
      return t > 0.0 && std::abs(b.C + std::exp((p.S - 1.0) * t)) > kPoleTol;
    case ChiBranchTag::Case4EqualRS:
      return t > 0.0;
  }
  return false;
}

double chi_closed_form(const ChiBranch& b, const ModelParams& p, double t) {
  validate_branch(b, p);
  if (is_case4(b.tag) && !(t > 0.0)) {
    throw DomainError(to_string(b.tag) + " branch requires t > 0");
  }
  if (!chi_regular(b, p, t)) throw PoleError(pole_message(b, t), t);
  const double b2 = 1.0 + b.beta * b.beta;
  const double R = p.R, S = p.S;
  switch (b.tag) {
    case ChiBranchTag::Primary: {
      const double gamma = chi_gamma(p, b.beta);
      return b2 - gamma * R / ((R - S) * (1.0 + b.C * std::exp(gamma * t)));
    }
    case ChiBranchTag::EqualRS:
      return b2 + b.C * std::exp(-chi_gamma(p, b.beta) * t);
    case ChiBranchTag::GammaZero:
      return b2 + R / (b.C + chi_gamma_zero_slope(p, b.beta) * t);
    case ChiBranchTag::Case4General:
      return 1.0 - 1.0 / (2.0 * t) + R * (S - 1.0) / (R - S) / (1.0 + b.C * std::exp((1.0 - S) * t));
    case ChiBranchTag::Case4EqualRS:
      return 1.0 - 1.0 / (2.0 * t) + b.C * std::exp((S - 1.0) * t);
  }
  return 0.0;
}

double chi_log_integral(const ChiBranch& b, const ModelParams& p, double t) {
  validate_branch(b, p);
  if (is_case4(b.tag) && !(t > 0.0)) {
    throw DomainError(to_string(b.tag) + " branch requires t > 0");
  }
  if (!chi_regular(b, p, t)) throw PoleError(pole_message(b, t), t);
  const double b2 = 1.0 + b.beta * b.beta;
  const double R = p.R, S = p.S;
  switch (b.tag) {
    case ChiBranchTag::Primary: {
      const double gamma = chi_gamma(p, b.beta);
      return b2 * t + R / (R - S) * log_abs_c_plus_exp(b.C, -gamma, t);
    }
    case ChiBranchTag::EqualRS: {
      const double gamma = chi_gamma(p, b.beta);
      return b2 * t - b.C / gamma * std::exp(-gamma * t);
    }
    case ChiBranchTag::GammaZero: {
      const double m = chi_gamma_zero_slope(p, b.beta);
      if (std::abs(m) <= kEqTol) return (b2 + R / b.C) * t;
      return b2 * t + R / m * std::log(std::abs(b.C + m * t));
    }
    case ChiBranchTag::Case4General:
      return t - 0.5 * std::log(t) + R / (R - S) * log_abs_c_plus_exp(b.C, S - 1.0, t);
    case ChiBranchTag::Case4EqualRS:
      if (S == 1.0) return (1.0 + b.C) * t - 0.5 * std::log(t);
      return t - 0.5 * std::log(t) + b.C / (S - 1.0) * std::exp((S - 1.0) * t);
  }
  return 0.0;
}

double chi_riccati_rhs(bool case4, const ModelParams& p, double beta, double t, double chi) {
  const double R = p.R, S = p.S, d = p.d;
  if (!case4) {
    const double b2 = 1.0 + beta * beta;
    const double B = 2.0 * S * b2 - R * (1.0 + S + (1.0 + d) * beta * beta);
    const double E = b2 * (R * (S + d * beta * beta) - S * b2);
    return ((S - R) * chi * chi - B * chi - E) / R;
  }
  return ((S - R) * chi * chi + ((S - R) / t + R + R * S - 2.0 * S) * chi +
          (R + S) / (4.0 * t * t) + (R + R * S - 2.0 * S) / (2.0 * t) + S * (1.0 - R)) /
         R;
}

}  // namespace dht
