#pragma once

#include "dhtlab/core_model.hpp"

namespace dht {

/**
 * Closed forms attached to the two Q-conditional symmetries of the system
 *
 *   u_t = u_xx + u - S v,   v_t = d v_xx + S v (1 - v/u).
 *
 * Case I (d != 1) uses f(t) with f'' + (1-d) f^2 f' + (1-S) f' = 0.
 * Case II (d = 1) uses g(t), h(t) with h g'' + g (h'' + (1-S) h') = 0, g g'' = C e^{(S-1)t}.
 */

struct CaseOneF {
  double f{0.0};
  double fp{0.0};
};

/// D(t) = 3 + (1-d) e^{2(S-1)t}.
double case_one_D(const ModelParams& params, double t);

/// True where f, G and phi are real and finite: D > 0, and (d-1) e^{2(S-1)t} < 3 when d > 1.
bool case_one_defined(const ModelParams& params, double t);

/// f = sign sqrt(3(S-1)/D) e^{(S-1)t} and its derivative; requires S > 1, d != 1, sign = +-1.
CaseOneF case_one_f(const ModelParams& params, int sign, double t);

/// G(t) = e^{(S-1)t} / sqrt(D) [C + 6d/sqrt(|1-d|) asinh or asin(sqrt(|1-d|/3) e^{(S-1)t})].
double case_one_G(const ModelParams& params, double C, double t);

struct PhiPsi {
  double phi{0.0};
  double psi{0.0};
};

/// phi = exp(G + t) D^{3(2d-1)/(2(d-1))},  psi = 3(1-S) G / (S D) phi.
PhiPsi case_one_phi_psi(const ModelParams& params, double C, double t);

/// ln phi for the same closed form, for use when phi itself would overflow.
double case_one_log_phi(const ModelParams& params, double C, double t);

struct KCoefficients {
  double K0{0.0};
  double K1{0.0};
};

/// K1 = 1 - S + (1-d) f^2,  K0 = S - 1 + (d+S-2) f^2 + (d-1) f^4 - 2(d+1) f f'.
KCoefficients case_one_K(const ModelParams& params, double f, double fp);

/// The same coefficients rewritten for the C1 = 0 choice of f, in terms of e^{2(S-1)t}.
KCoefficients case_one_K_explicit(const ModelParams& params, double t);

/// g, h and their first two derivatives.
struct CaseTwoGH {
  double g{0.0}, gp{0.0}, gpp{0.0};
  double h{0.0}, hp{0.0}, hpp{0.0};
};

/// g = C1 e^{(S-1)t/2}, h = (C2 + C3 t) e^{(S-1)t/2}; solves the (g, h) system with C = C1^2 (S-1)^2 / 4.
CaseTwoGH case_two_particular(double S, double C1, double C2, double C3, double t);

/// The (g, h) pair that generates the three-parameter family (C, C2, C3) with unit C1.
CaseTwoGH case_two_family_gh(double S, double C2, double C3, double t);

/// phi, psi of the reduced Case-II system for the three-parameter family.
PhiPsi case_two_phi_psi(double S, double C, double C2, double C3, double t);

}  // namespace dht
