#pragma once

#include <string>

#include "dhtlab/core_model.hpp"

namespace dht {

/**
 * Closed-form solutions chi(t) = phi'/phi of the Riccati equations obtained from the
 * exponential-separable ansatz (u = phi e^{beta x}, v = psi e^{beta x}) and the
 * Gaussian-source ansatz (u = phi e^{-x^2/(4t)}, v = psi e^{-x^2/(4t)}) with A = 0.
 */
enum class ChiBranchTag {
  Primary,       ///< 1 + b^2 - gamma R / ((R-S)(1 + C e^{gamma t})); gamma != 0, R != S
  EqualRS,       ///< 1 + b^2 + C e^{-gamma t}; R = S, gamma != 0
  GammaZero,     ///< 1 + b^2 + R / (C + m t), m = R - 1 + (d-1) b^2; gamma = 0
  Case4General,  ///< 1 - 1/(2t) + R(S-1)/(R-S) / (1 + C e^{(1-S)t}); R != S, t > 0
  Case4EqualRS,  ///< 1 - 1/(2t) + C e^{(S-1)t}; R = S, t > 0
};

std::string to_string(ChiBranchTag tag);

struct ChiBranch {
  ChiBranchTag tag{ChiBranchTag::Primary};
  double C{0.0};
  double beta{0.0};  ///< ignored by the Case-4 branches
};

/// True for the branches built on the Gaussian-source ansatz.
bool is_case4(ChiBranchTag tag);

/// gamma = 1 - S + (1 - d) beta^2.
double chi_gamma(const ModelParams& params, double beta);

/// m = R - 1 + (d - 1) beta^2, the slope of the GammaZero denominator.
double chi_gamma_zero_slope(const ModelParams& params, double beta);

/// Throws ConstraintError if the branch constraints do not hold for these parameters.
void validate_branch(const ChiBranch& branch, const ModelParams& params);

/// The closed form at t; throws PoleError at a pole and DomainError for t <= 0 on Case-4 branches.
double chi_closed_form(const ChiBranch& branch, const ModelParams& params, double t);

/**
 * An antiderivative Lambda(t) of chi, so that phi = phi0 exp(Lambda(t) - Lambda(t_ref)).
 * Logarithms are taken of the absolute value of the pole factor.
 */
double chi_log_integral(const ChiBranch& branch, const ModelParams& params, double t);

/// True when t is strictly on the regular side of every pole of the branch.
bool chi_regular(const ChiBranch& branch, const ModelParams& params, double t);

/**
 * Right-hand side of the Riccati equation solved by the branch family:
 *   Case 2:  R chi' = (S-R) chi^2 - B chi - E
 *   Case 4:  R chi' = (S-R) chi^2 + ((S-R)/t + R + RS - 2S) chi
 *                     + (R+S)/(4t^2) + (R+RS-2S)/(2t) + S(1-R)
 */
double chi_riccati_rhs(bool case4, const ModelParams& params, double beta, double t, double chi);

}  // namespace dht
