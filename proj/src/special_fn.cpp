#include "dhtlab/special_fn.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dhtlab/errors.hpp"

namespace dht {

namespace {

using ld = long double;

// Ai(0) = 1 / (3^{2/3} Gamma(2/3)),  -Ai'(0) = 1 / (3^{1/3} Gamma(1/3)).
ld ai_zero() {
  return 1.0L / (std::pow(3.0L, 2.0L / 3.0L) * airy_constants::kGammaTwoThirds);
}
ld ai_prime_zero_neg() {
  return 1.0L / (std::pow(3.0L, 1.0L / 3.0L) * airy_constants::kGammaOneThird);
}

/// Maclaurin series, accumulated in extended precision.
AiryPair maclaurin(double zd) {
  const ld z = zd;
  const ld z3 = z * z * z;
  ld f = 1.0L, g = z, fp = 0.0L, gp = 1.0L;
  ld tf = 1.0L, tg = z, tfp = z * z / 2.0L, tgp = 1.0L;
  fp = tfp;
  constexpr ld kTiny = 1e-22L;
  for (int k = 1; k < 400; ++k) {
    const ld kk = k;
    tf *= z3 / ((3 * kk - 1) * (3 * kk));
    tg *= z3 / ((3 * kk) * (3 * kk + 1));
    if (k >= 2) tfp *= z3 / ((3 * kk - 3) * (3 * kk - 1));
    tgp *= z3 / ((3 * kk) * (3 * kk - 2));
    f += tf;
    g += tg;
    if (k >= 2) fp += tfp;
    gp += tgp;
    if (std::abs(tf) <= kTiny * std::abs(f) && std::abs(tg) <= kTiny * std::abs(g) &&
        std::abs(tfp) <= kTiny * std::abs(fp) && std::abs(tgp) <= kTiny * std::abs(gp)) {
      break;
    }
  }
  const ld c1 = ai_zero();
  const ld c2 = ai_prime_zero_neg();
  const ld sqrt3 = std::sqrt(3.0L);
  AiryPair out;
  out.ai = static_cast<double>(c1 * f - c2 * g);
  out.bi = static_cast<double>(sqrt3 * (c1 * f + c2 * g));
  out.ai_prime = static_cast<double>(c1 * fp - c2 * gp);
  out.bi_prime = static_cast<double>(sqrt3 * (c1 * fp + c2 * gp));
  return out;
}

/// Partial sums of the u_k / v_k expansions in 1/zeta.
struct AsymptoticSums {
  ld u_even{0}, u_odd{0};  // alternating in k within each parity
  ld v_even{0}, v_odd{0};
  ld u_alt{0}, u_all{0};   // sum (-1)^k u_k zeta^-k and sum u_k zeta^-k
  ld v_alt{0}, v_all{0};
};

AsymptoticSums asymptotic_sums(ld zeta) {
  AsymptoticSums s;
  ld u = 1.0L;
  ld power = 1.0L;
  ld last = std::numeric_limits<ld>::infinity();
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      const ld kk = k;
      u *= (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / (216.0L * kk * (2 * kk - 1));
      power /= zeta;
    }
    const ld v = -(6.0L * k + 1) / (6.0L * k - 1) * u;
    const ld tu = u * power;
    const ld tv = v * power;
    const ld mag = std::max(std::abs(tu), std::abs(tv));
    // Optimal truncation: stop once terms start growing.
    if (mag > last) break;
    last = mag;
    const ld sign = (k % 2 == 0) ? 1.0L : -1.0L;
    const ld pair_sign = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
    s.u_alt += sign * tu;
    s.u_all += tu;
    s.v_alt += sign * tv;
    s.v_all += tv;
    if (k % 2 == 0) {
      s.u_even += pair_sign * tu;
      s.v_even += pair_sign * tv;
    } else {
      s.u_odd += pair_sign * tu;
      s.v_odd += pair_sign * tv;
    }
    if (mag < 1e-21L) break;
  }
  return s;
}

const ld kSqrtPi = std::sqrt(std::numbers::pi_v<ld>);

void asymptotic_ai_positive(double zd, AiryPair& out) {
  const ld z = zd;
  const ld zeta = 2.0L / 3.0L * z * std::sqrt(z);
  const ld q = std::pow(z, 0.25L);
  const AsymptoticSums s = asymptotic_sums(zeta);
  const ld e = std::exp(-zeta);
  out.ai = static_cast<double>(e / (2.0L * kSqrtPi * q) * s.u_alt);
  out.ai_prime = static_cast<double>(-q * e / (2.0L * kSqrtPi) * s.v_alt);
}

void asymptotic_bi_positive(double zd, AiryPair& out) {
  const ld z = zd;
  const ld zeta = 2.0L / 3.0L * z * std::sqrt(z);
  const ld q = std::pow(z, 0.25L);
  const AsymptoticSums s = asymptotic_sums(zeta);
  // exp in long double has more headroom than double; saturate on the double range.
  const ld e = std::exp(zeta);
  const ld bi = e / (kSqrtPi * q) * s.u_all;
  const ld bip = q * e / kSqrtPi * s.v_all;
  constexpr ld kMax = std::numeric_limits<double>::max();
  if (!std::isfinite(bip) || bip > kMax || !std::isfinite(bi) || bi > kMax) {
    out.saturated = true;
    out.bi = std::numeric_limits<double>::infinity();
    out.bi_prime = std::numeric_limits<double>::infinity();
    if (std::isfinite(bi) && bi <= kMax) out.bi = static_cast<double>(bi);
    return;
  }
  out.bi = static_cast<double>(bi);
  out.bi_prime = static_cast<double>(bip);
}

AiryPair asymptotic_negative(double zd) {
  const ld x = -static_cast<ld>(zd);
  const ld zeta = 2.0L / 3.0L * x * std::sqrt(x);
  const ld q = std::pow(x, 0.25L);
  const AsymptoticSums s = asymptotic_sums(zeta);
  const ld phase = zeta - std::numbers::pi_v<ld> / 4.0L;
  const ld c = std::cos(phase);
  const ld sn = std::sin(phase);
  AiryPair out;
  out.ai = static_cast<double>((c * s.u_even + sn * s.u_odd) / (kSqrtPi * q));
  out.bi = static_cast<double>((-sn * s.u_even + c * s.u_odd) / (kSqrtPi * q));
  out.ai_prime = static_cast<double>(q / kSqrtPi * (sn * s.v_even - c * s.v_odd));
  out.bi_prime = static_cast<double>(q / kSqrtPi * (c * s.v_even + sn * s.v_odd));
  return out;
}

}  // namespace

AiryPair airy(double z, const AiryOptions& options) {
  if (!std::isfinite(z)) {
    throw InvalidParameter("z", "Airy argument must be finite");
  }
  if (z < -options.negative_switch) {
    return asymptotic_negative(z);
  }
  if (z <= options.z_switch) {
    return maclaurin(z);
  }
  AiryPair out;
  asymptotic_ai_positive(z, out);
  if (z <= options.bi_positive_switch) {
    const AiryPair series = maclaurin(z);
    out.bi = series.bi;
    out.bi_prime = series.bi_prime;
  } else {
    asymptotic_bi_positive(z, out);
  }
  return out;
}

}  // namespace dht
