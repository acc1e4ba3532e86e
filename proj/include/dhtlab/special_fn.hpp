#pragma once

namespace dht {

/// Ai, Bi and their derivatives at one real argument.
struct AiryPair {
  double ai{0.0};
  double bi{0.0};
  double ai_prime{0.0};
  double bi_prime{0.0};
  /// Set when Bi (and Bi') exceed the double range and were returned as +infinity.
  bool saturated{false};
};

/**
 * Switch points between the Maclaurin series and the asymptotic expansions.
 *
 * Ai on the positive axis carries cancellation in the series, so it switches
 * early (z_switch). Bi on the positive axis has an all-positive series and stays
 * on it longer. On the negative axis both switch at -negative_switch, where the
 * oscillatory expansions are accurate to ~1e-15.
 */
struct AiryOptions {
  double z_switch{6.0};
  double bi_positive_switch{8.0};
  double negative_switch{8.0};
};

/**
 * Airy functions of the first and second kind for real z.
 *
 * Accuracy on z in [-12, 8]: absolute error <= 1e-10 where |value| <= 1,
 * relative error <= 1e-9 otherwise. Throws InvalidParameter for non-finite z.
 */
AiryPair airy(double z, const AiryOptions& options = {});

namespace airy_constants {
/// Gamma(2/3) and Gamma(1/3), 40 significant digits from a multiprecision evaluation.
inline constexpr long double kGammaTwoThirds = 1.354117939426400416945288028154513785519L;
inline constexpr long double kGammaOneThird = 2.678938534707747633655692940974677644129L;
}  // namespace airy_constants

}  // namespace dht
