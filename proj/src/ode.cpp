#include "dhtlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dhtlab/errors.hpp"

namespace dht {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous-extension coefficients; the cubic Hermite interpolant differs from the
// fourth-order extension by theta^2 (1-theta)^2 h (d1 k1 + d3 k3 + ... + d7 k7).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

std::string at_message(const std::string& what, double w) {
  std::ostringstream os;
  os.precision(10);
  os << what << " near w = " << w;
  return os.str();
}

double rms_norm(const State& v, const State& scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = v[i] / scale[i];
    s += r * r;
  }
  return v.empty() ? 0.0 : std::sqrt(s / v.size());
}

bool all_finite(const State& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::size_t OdeTrajectory::locate(double wq) const {
  if (w.empty()) throw DomainError("empty trajectory");
  const double lo = std::min(w.front(), w.back());
  const double hi = std::max(w.front(), w.back());
  const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
  if (!(wq >= lo - slack && wq <= hi + slack)) {
    std::ostringstream os;
    os << "w = " << wq << " outside the integrated span [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
  if (w.size() == 1) return 0;
  const bool forward = w.back() >= w.front();
  std::size_t i;
  if (forward) {
    i = static_cast<std::size_t>(std::upper_bound(w.begin(), w.end(), wq) - w.begin());
  } else {
    i = static_cast<std::size_t>(
        std::upper_bound(w.begin(), w.end(), wq, [](double a, double b) { return a > b; }) - w.begin());
  }
  if (i == 0) i = 1;
  if (i >= w.size()) i = w.size() - 1;
  return i - 1;
}

State OdeTrajectory::at(double wq) const {
  const std::size_t i = locate(wq);
  if (w.size() == 1) return y[0];
  const double h = w[i + 1] - w[i];
  const double s = (wq - w[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  State out(y[i].size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = h00 * y[i][k] + h10 * h * dy[i][k] + h01 * y[i + 1][k] + h11 * h * dy[i + 1][k];
  }
  return out;
}

double OdeTrajectory::at(double wq, std::size_t component) const { return at(wq).at(component); }

State OdeTrajectory::derivative_at(double wq) const {
  const std::size_t i = locate(wq);
  if (w.size() == 1) return dy[0];
  const double h = w[i + 1] - w[i];
  const double s = (wq - w[i]) / h;
  const double d00 = 6 * s * s - 6 * s;
  const double d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -6 * s * s + 6 * s;
  const double d11 = 3 * s * s - 2 * s;
  State out(y[i].size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (d00 * y[i][k] + d01 * y[i + 1][k]) / h + d10 * dy[i][k] + d11 * dy[i + 1][k];
  }
  return out;
}

OdeTrajectory integrate_ode(const OdeRhs& rhs, const State& y0, double w0, double w1,
                            const IntegratorOptions& opt) {
  if (!std::isfinite(w0) || !std::isfinite(w1) || w0 == w1) {
    throw InvalidParameter("span", "integration span must be finite and nondegenerate");
  }
  if (!all_finite(y0)) throw InvalidParameter("y0", "initial state must be finite");
  if (!(opt.rtol > 0) || !(opt.atol > 0)) throw InvalidParameter("tolerance", "rtol and atol must be positive");

  const std::size_t n = y0.size();
  const double dir = w1 > w0 ? 1.0 : -1.0;
  OdeTrajectory traj;

  State y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n), scale(n);
  try {
    rhs(w0, y, k1);
  } catch (const Error& e) {
    throw IntegrationFailure(at_message(std::string("right-hand side failed at the initial point: ") + e.what(), w0), w0);
  }
  if (!all_finite(k1)) throw IntegrationFailure(at_message("non-finite derivative at the initial point", w0), w0);
  traj.w.push_back(w0);
  traj.y.push_back(y);
  traj.dy.push_back(k1);

  const double span = std::abs(w1 - w0);
  double h = opt.h_init;
  if (!(h > 0)) {
    for (std::size_t i = 0; i < n; ++i) scale[i] = opt.atol + opt.rtol * std::abs(y[i]);
    const double d0 = rms_norm(y, scale);
    const double d1 = rms_norm(k1, scale);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * std::max(1.0, span) : 0.01 * d0 / d1;
  }
  h = std::min({h, span, opt.h_max});

  double w = w0;
  double max_err = 0.0;
  bool last_rejected = false;
  std::size_t steps = 0;

  while (dir * (w1 - w) > 0.0) {
    if (++steps > opt.max_steps) throw IntegrationFailure(at_message("step budget exhausted", w), w);
    const double remaining = std::abs(w1 - w);
    bool final_step = false;
    if (h >= remaining) {
      h = remaining;
      final_step = true;
    }
    const double hmin = 1e-14 * std::max(1.0, std::abs(w));
    if (h < hmin && !final_step) {
      throw IntegrationFailure(at_message("step size underflow (singularity estimated)", w), w);
    }
    const double hs = dir * h;

    bool ok = true;
    try {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
      rhs(w + c2 * hs, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
      rhs(w + c3 * hs, tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(w + c4 * hs, tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs(w + c5 * hs, tmp, k5);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      rhs(w + hs, tmp, k6);
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      rhs(final_step ? w1 : w + hs, ynew, k7);
    } catch (const Error&) {
      ok = false;
    }

    double en = std::numeric_limits<double>::infinity();
    if (ok && all_finite(ynew) && all_finite(k7)) {
      for (std::size_t i = 0; i < n; ++i) {
        err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        scale[i] = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      }
      en = rms_norm(err, scale);
      // Midpoint deviation of the stored cubic Hermite interpolant, so dense output meets the tolerance.
      for (std::size_t i = 0; i < n; ++i) {
        err[i] = hs / 16.0 * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      en = std::max(en, rms_norm(err, scale));
    }

    if (en <= 1.0) {
      w = final_step ? w1 : w + hs;
      y.swap(ynew);
      k1.swap(k7);
      traj.w.push_back(w);
      traj.y.push_back(y);
      traj.dy.push_back(k1);
      max_err = std::max(max_err, en);
      for (double v : y) {
        if (std::abs(v) > opt.blowup) throw IntegrationFailure(at_message("solution blow-up", w), w);
      }
      double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h = std::min(h * fac, opt.h_max);
      last_rejected = false;
    } else {
      ++traj.rejected_steps;
      const double fac = std::isfinite(en) ? std::clamp(0.9 * std::pow(en, -0.2), 0.2, 0.9) : 0.25;
      h *= fac;
      last_rejected = true;
    }
  }
  traj.achieved_tolerance = max_err * opt.rtol;
  return traj;
}

}  // namespace dht
