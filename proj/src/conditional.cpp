#include "dhtlab/conditional.hpp"

#include <cmath>

#include "dhtlab/errors.hpp"

namespace dht {

namespace {

void require_case_one(const ModelParams& p) {
  if (p.d == 1.0) throw ConstraintError("Case I closed forms require d != 1");
  if (!(p.S > 1.0)) throw ConstraintError("Case I closed forms require S > 1 for a real f");
}

void require_defined(const ModelParams& p, double t) {
  if (!case_one_defined(p, t)) {
    throw DomainError("Case I closed form requires (d-1) e^{2(S-1)t} < 3 at t = " + std::to_string(t));
  }
}

}  // namespace

double case_one_D(const ModelParams& p, double t) {
  return 3.0 + (1.0 - p.d) * std::exp(2.0 * (p.S - 1.0) * t);
}

bool case_one_defined(const ModelParams& p, double t) {
  if (!std::isfinite(t)) return false;
  if (p.d < 1.0) return true;
  return (p.d - 1.0) * std::exp(2.0 * (p.S - 1.0) * t) < 3.0;
}

CaseOneF case_one_f(const ModelParams& p, int sign, double t) {
  require_case_one(p);
  if (sign != 1 && sign != -1) throw InvalidParameter("sign", "must be +1 or -1");
  require_defined(p, t);
  const double a = p.S - 1.0;
  const double E = std::exp(a * t);
  const double D = case_one_D(p, t);
  const double root = std::sqrt(3.0 * a);
  CaseOneF out;
  out.f = sign * root * E / std::sqrt(D);
  out.fp = sign * 3.0 * a * root * E / (D * std::sqrt(D));
  return out;
}

double case_one_G(const ModelParams& p, double C, double t) {
  require_case_one(p);
  require_defined(p, t);
  const double E = std::exp((p.S - 1.0) * t);
  const double D = case_one_D(p, t);
  const double k = std::sqrt(std::abs(1.0 - p.d));
  const double z = k / std::sqrt(3.0) * E;
  double bracket = C;
  if (p.d < 1.0) {
    bracket += 6.0 * p.d / k * std::log(z + std::sqrt(z * z + 1.0));
  } else {
    bracket += 6.0 * p.d / k * std::asin(z);
  }
  return E / std::sqrt(D) * bracket;
}

double case_one_log_phi(const ModelParams& p, double C, double t) {
  const double G = case_one_G(p, C, t);
  const double D = case_one_D(p, t);
  return G + t + 3.0 * (2.0 * p.d - 1.0) / (2.0 * (p.d - 1.0)) * std::log(D);
}

PhiPsi case_one_phi_psi(const ModelParams& p, double C, double t) {
  const double G = case_one_G(p, C, t);
  const double D = case_one_D(p, t);
  PhiPsi out;
  out.phi = std::exp(case_one_log_phi(p, C, t));
  out.psi = 3.0 * (1.0 - p.S) * G / (p.S * D) * out.phi;
  return out;
}

KCoefficients case_one_K(const ModelParams& p, double f, double fp) {
  const double d = p.d, S = p.S;
  const double f2 = f * f;
  KCoefficients k;
  k.K1 = 1.0 - S + (1.0 - d) * f2;
  k.K0 = S - 1.0 + (d + S - 2.0) * f2 + (d - 1.0) * f2 * f2 - 2.0 * (d + 1.0) * f * fp;
  return k;
}

KCoefficients case_one_K_explicit(const ModelParams& p, double t) {
  const double d = p.d, S = p.S;
  const double E2 = std::exp(2.0 * (S - 1.0) * t);
  const double D = 3.0 + (1.0 - d) * E2;
  const double b1 = 3.0 * (3.0 * S + 6.0 * d * S - 7.0 * d - 2.0);
  const double b2 = 2.0 * (d - 1.0) * (2.0 + d - 3.0 * S);
  KCoefficients k;
  k.K1 = (1.0 - S) * (3.0 + 2.0 * (d - 1.0) * E2) / D;
  k.K0 = (1.0 - S) / (D * D) * (b2 * E2 * E2 + b1 * E2 - 9.0);
  return k;
}

CaseTwoGH case_two_particular(double S, double C1, double C2, double C3, double t) {
  if (S == 1.0) throw ConstraintError("the particular (g, h) pair requires S != 1");
  const double a = 0.5 * (S - 1.0);
  const double e = std::exp(a * t);
  const double lin = C2 + C3 * t;
  CaseTwoGH out;
  out.g = C1 * e;
  out.gp = a * C1 * e;
  out.gpp = a * a * C1 * e;
  out.h = lin * e;
  out.hp = (C3 + a * lin) * e;
  out.hpp = (2.0 * a * C3 + a * a * lin) * e;
  return out;
}

CaseTwoGH case_two_family_gh(double S, double C2, double C3, double t) {
  return case_two_particular(S, 1.0, C2 - 2.0 * C3, (S - 1.0) * C3, t);
}

PhiPsi case_two_phi_psi(double S, double C, double C2, double C3, double t) {
  const double ce = C * std::exp((S - 1.0) * t);
  const double lin = C2 + C3 * (S - 1.0) * t;
  PhiPsi out;
  out.phi = std::exp((9.0 - S) / 8.0 * t - 4.0 * C3 * (C2 - C3) * t +
                     2.0 * C3 * C3 * (1.0 - S) * t * t + ce);
  out.psi = ((1.0 - S) / 8.0 + lin * lin + (1.0 - S) * ce) / S * out.phi;
  return out;
}

}  // namespace dht
