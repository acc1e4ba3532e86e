#include "dhtlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dhtlab/errors.hpp"

#ifndef DHTLAB_VERSION
#define DHTLAB_VERSION "0.1.0"
#endif

namespace dht {

namespace {

std::string point(double t, double x) {
  std::ostringstream os;
  os.precision(10);
  os << "(t, x) = (" << t << ", " << x << ")";
  return os.str();
}

FieldSample sample(const ExactSolution& sol, double t, double x) {
  if (!sol.in_domain(t, x)) {
    throw DomainError("finite-difference stencil point " + point(t, x) + " lies outside the domain " +
                      sol.domain().description);
  }
  return sol.evaluate(t, x);
}

Jet fd_jet_plain(const ExactSolution& sol, double t, double x, double h) {
  const FieldSample c = sample(sol, t, x);
  const FieldSample tp1 = sample(sol, t + h, x), tm1 = sample(sol, t - h, x);
  const FieldSample tp2 = sample(sol, t + 2 * h, x), tm2 = sample(sol, t - 2 * h, x);
  const FieldSample xp1 = sample(sol, t, x + h), xm1 = sample(sol, t, x - h);
  const FieldSample xp2 = sample(sol, t, x + 2 * h), xm2 = sample(sol, t, x - 2 * h);
  auto d1 = [h](double p2, double p1, double m1, double m2) { return (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h); };
  auto d2 = [h](double p2, double p1, double c0, double m1, double m2) {
    return (-p2 + 16 * p1 - 30 * c0 + 16 * m1 - m2) / (12 * h * h);
  };
  Jet j;
  j.u = c.u;
  j.v = c.v;
  j.ut = d1(tp2.u, tp1.u, tm1.u, tm2.u);
  j.vt = d1(tp2.v, tp1.v, tm1.v, tm2.v);
  j.ux = d1(xp2.u, xp1.u, xm1.u, xm2.u);
  j.vx = d1(xp2.v, xp1.v, xm1.v, xm2.v);
  j.uxx = d2(xp2.u, xp1.u, c.u, xm1.u, xm2.u);
  j.vxx = d2(xp2.v, xp1.v, c.v, xm1.v, xm2.v);
  return j;
}

bool stencil_inside(const ExactSolution& sol, double t, double x, double h) {
  for (int k = -2; k <= 2; ++k) {
    if (!sol.in_domain(t + k * h, x) || !sol.in_domain(t, x + k * h)) return false;
  }
  return true;
}

}  // namespace

const char* version() { return DHTLAB_VERSION; }

double scaled_step(double h, double t, double x) {
  return h * std::max({1.0, std::abs(t), std::abs(x)});
}

Jet fd_jet(const ExactSolution& sol, double t, double x, double h, bool richardson) {
  if (!(h > 0)) throw InvalidParameter("h", "differentiation step must be positive");
  const Jet a = fd_jet_plain(sol, t, x, h);
  if (!richardson) return a;
  const Jet b = fd_jet_plain(sol, t, x, h / 2);
  auto mix = [](double coarse, double fine) { return (16 * fine - coarse) / 15; };
  Jet j = b;
  j.ut = mix(a.ut, b.ut);
  j.vt = mix(a.vt, b.vt);
  j.ux = mix(a.ux, b.ux);
  j.vx = mix(a.vx, b.vx);
  j.uxx = mix(a.uxx, b.uxx);
  j.vxx = mix(a.vxx, b.vxx);
  return j;
}

nlohmann::json ResidualReport::to_json() const {
  nlohmann::json j;
  j["linf_s1"] = linf_s1;
  j["linf_s2"] = linf_s2;
  j["l2_s1"] = l2_s1;
  j["l2_s2"] = l2_s2;
  j["linf"] = linf();
  j["argmax"] = {{"t", argmax_t}, {"x", argmax_x}};
  j["fd_step"] = fd_step;
  j["grid"] = {{"t0", grid.t0}, {"t1", grid.t1}, {"nt", grid.nt},
               {"x0", grid.x0}, {"x1", grid.x1}, {"nx", grid.nx}};
  j["margin"] = margin;
  j["provenance"] = provenance;
  j["approximate"] = approximate;
  j["unverified_as_printed"] = unverified_as_printed;
  j["version"] = version();
  return j;
}

ResidualReport residual_report(const ExactSolution& sol, const ModelParams& params, const GridSpec& grid_in,
                               double h, const ResidualOptions& opt) {
  grid_in.validate();
  if (!(h > 0)) throw InvalidParameter("h", "differentiation step must be positive");
  GridSpec grid = grid_in;
  double margin = 0.0;
  if (opt.auto_margin) {
    // Shift each edge inward by one stencil width if the edge row or column leaves the domain.
    const double ht = scaled_step(h, std::max(std::abs(grid.t0), std::abs(grid.t1)),
                                  std::max(std::abs(grid.x0), std::abs(grid.x1)));
    const double w = 2.0 * ht;
    auto row_ok = [&](double t) {
      for (int j = 0; j < grid.nx; ++j) {
        if (!stencil_inside(sol, t, grid.x(j), scaled_step(h, t, grid.x(j)))) return false;
      }
      return true;
    };
    auto col_ok = [&](double x) {
      for (int i = 0; i < grid.nt; ++i) {
        if (!stencil_inside(sol, grid.t(i), x, scaled_step(h, grid.t(i), x))) return false;
      }
      return true;
    };
    if (!row_ok(grid.t0)) { grid.t0 += w; margin = w; }
    if (!row_ok(grid.t1)) { grid.t1 -= w; margin = w; }
    if (!col_ok(grid.x0)) { grid.x0 += w; margin = w; }
    if (!col_ok(grid.x1)) { grid.x1 -= w; margin = w; }
    grid.validate();
  }

  ResidualReport rep;
  rep.grid = grid;
  rep.fd_step = h;
  rep.margin = margin;
  rep.provenance = sol.provenance();
  rep.approximate = sol.approximate();
  rep.unverified_as_printed = sol.unverified_as_printed();
  double sum1 = 0.0, sum2 = 0.0, worst = -1.0;
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nx; ++j) {
      const double t = grid.t(i), x = grid.x(j);
      const Jet jet = fd_jet(sol, t, x, scaled_step(h, t, x), opt.richardson);
      ResidualPair r;
      try {
        r = residual(sol.system(), params, jet, opt.singular_tol);
      } catch (const SingularDenominator& e) {
        throw SingularDenominator(std::string(e.what()) + " at " + point(t, x));
      }
      const double a1 = std::abs(r.s1), a2 = std::abs(r.s2);
      if (!std::isfinite(a1) || !std::isfinite(a2)) {
        throw DomainError("non-finite residual at " + point(t, x));
      }
      rep.linf_s1 = std::max(rep.linf_s1, a1);
      rep.linf_s2 = std::max(rep.linf_s2, a2);
      sum1 += a1 * a1;
      sum2 += a2 * a2;
      if (std::max(a1, a2) > worst) {
        worst = std::max(a1, a2);
        rep.argmax_t = t;
        rep.argmax_x = x;
      }
    }
  }
  const double n = static_cast<double>(grid.size());
  rep.l2_s1 = std::sqrt(sum1 / n);
  rep.l2_s2 = std::sqrt(sum2 / n);
  return rep;
}

ResidualReport residual_report(const ExactSolution& sol, const GridSpec& grid, double h,
                               const ResidualOptions& options) {
  return residual_report(sol, sol.params(), grid, h, options);
}

ExactSolution perturb_u(const ExactSolution& sol, double factor) {
  ExactSolution out(sol.family(), sol.params(), sol.domain(),
                    [sol, factor](double t, double x) {
                      FieldSample s = sol.evaluate_raw(t, x);
                      s.u *= 1.0 + factor;
                      return s;
                    },
                    sol.system());
  out.with_seed(sol.seed());
  for (const auto& c : sol.transform_chain()) out.add_transform(c);
  std::ostringstream os;
  os << "PerturbU(" << factor << ")";
  out.add_transform(os.str());
  out.mark_approximate(sol.approximate()).mark_unverified(sol.unverified_as_printed());
  return out;
}

SurfaceDeviation invariant_surface_check(const ExactSolution& sol, const std::function<CaseOneF(double)>& f,
                                         const GridSpec& grid, double h) {
  grid.validate();
  const double S = sol.params().S;
  SurfaceDeviation dev;
  for (int i = 0; i < grid.nt; ++i) {
    const double t = grid.t(i);
    const CaseOneF ff = f(t);
    for (int j = 0; j < grid.nx; ++j) {
      const double x = grid.x(j);
      const Jet jet = fd_jet(sol, t, x, scaled_step(h, t, x));
      dev.e1 = std::max(dev.e1, std::abs(jet.ux - ff.f * jet.u));
      dev.e2 = std::max(dev.e2, std::abs(jet.vx - ff.f * jet.v + ff.fp / S * jet.u));
    }
  }
  return dev;
}

SurfaceDeviation invariant_surface_check_caseII(const ExactSolution& sol,
                                                const std::function<CaseTwoGH(double)>& gh,
                                                const GridSpec& grid, double h) {
  grid.validate();
  const double S = sol.params().S;
  SurfaceDeviation dev;
  for (int i = 0; i < grid.nt; ++i) {
    const double t = grid.t(i);
    const CaseTwoGH c = gh(t);
    for (int j = 0; j < grid.nx; ++j) {
      const double x = grid.x(j);
      const Jet jet = fd_jet(sol, t, x, scaled_step(h, t, x));
      const double m = 2 * c.h - c.gp * x;
      dev.e1 = std::max(dev.e1, std::abs(2 * c.g * jet.ux - m * jet.u));
      dev.e2 = std::max(dev.e2, std::abs(2 * c.g * jet.vx - m * jet.v + (2 * c.hp - c.gpp * x) * jet.u / S));
    }
  }
  return dev;
}

GeneratorSpec table1_generator(const std::string& tag, const ModelParams& p, bool enforce) {
  auto need = [&](bool cond, const std::string& what) {
    if (enforce && !cond) throw ConstraintError("operator " + tag + " is a Lie symmetry only for " + what);
  };
  auto zero = [](double, double, double, double) { return 0.0; };
  auto one = [](double, double, double, double) { return 1.0; };
  GeneratorSpec g;
  g.tag = tag;
  g.xi0 = zero;
  g.xi1 = zero;
  g.eta1 = zero;
  g.eta2 = zero;
  const double R = p.R, S = p.S;
  if (tag == "P_t") {
    g.xi0 = one;
  } else if (tag == "P_x") {
    g.xi1 = one;
  } else if (tag == "I") {
    need(p.A == 0.0, "A = 0");
    g.eta1 = [](double, double, double u, double) { return u; };
    g.eta2 = [](double, double, double, double v) { return v; };
  } else if (tag == "D") {
    need(p.A == 0.0 && S == 1.0, "A = 0, S = 1");
    g.xi0 = [](double t, double, double, double) { return 2 * t; };
    g.xi1 = [](double, double x, double, double) { return x; };
    g.eta1 = [](double t, double, double u, double) { return 2 * (1 + t) * u; };
    g.eta2 = [](double t, double, double, double v) { return 2 * t * v; };
  } else if (tag == "G") {
    need(p.A == 0.0 && p.d == 1.0, "A = 0, d = 1");
    g.xi1 = [](double t, double, double, double) { return 2 * t; };
    g.eta1 = [](double, double x, double u, double) { return -x * u; };
    g.eta2 = [](double, double x, double, double v) { return -x * v; };
  } else if (tag == "Q") {
    need(p.A == 0.0 && p.d == 1.0 && R == S && S != 1.0, "A = 0, d = 1, R = S != 1");
    g.eta1 = [S](double t, double, double u, double) { return std::exp((S - 1) * t) * S * u; };
    g.eta2 = [S](double t, double, double u, double v) { return std::exp((S - 1) * t) * (S * v + (1 - S) * u); };
  } else if (tag == "Y") {
    need(p.A == 0.0 && p.d == 1.0 && R == 1.0 && S == 1.0, "A = 0, d = 1, R = S = 1");
    g.eta1 = [](double t, double, double u, double) { return t * u; };
    g.eta2 = [](double t, double, double u, double v) { return t * v - u; };
  } else if (tag == "Pi") {
    need(p.A == 0.0 && p.d == 1.0 && S == 1.0 && R != 1.0, "A = 0, d = 1, S = 1, R != 1");
    const double k = (R + 1) / (2 * (R - 1));
    g.xi0 = [](double t, double, double, double) { return t * t; };
    g.xi1 = [](double t, double x, double, double) { return t * x; };
    g.eta1 = [k](double t, double x, double u, double) { return (t * t + k * t - x * x / 4) * u; };
    g.eta2 = [k, R](double t, double x, double u, double v) {
      return (t * t + k * t - x * x / 4) * v + u / (1 - R) - 2 * t * v;
    };
  } else {
    throw InvalidParameter("generator", "unknown operator \"" + tag + "\" (P_t, P_x, I, D, G, Q, Y, Pi)");
  }
  return g;
}

SymmetryCheckResult infinitesimal_symmetry_check(const ExactSolution& sol, const GeneratorSpec& gen,
                                                 const ModelParams& params, const std::vector<double>& epsilons,
                                                 const GridSpec& grid, double h) {
  if (epsilons.size() < 2) throw InvalidParameter("epsilons", "need at least two values");
  for (double e : epsilons) {
    if (!(e > 0)) throw InvalidParameter("epsilons", "values must be positive");
  }
  // The characteristic needs u_t, u_x of the base field; a coarser inner step keeps its
  // roundoff small relative to the outer second differences.
  const double inner = 10.0 * h;
  auto characteristic = [sol, gen, inner](double t, double x) {
    const Jet j = fd_jet(sol, t, x, scaled_step(inner, t, x), true);
    const double a = gen.xi0(t, x, j.u, j.v), b = gen.xi1(t, x, j.u, j.v);
    return FieldSample{gen.eta1(t, x, j.u, j.v) - a * j.ut - b * j.ux,
                       gen.eta2(t, x, j.u, j.v) - a * j.vt - b * j.vx};
  };
  // Points whose inner stencil leaves the domain are excluded from the perturbed field's domain.
  const Domain base_domain = sol.domain();
  Domain inner_domain{base_domain.description + " (with the inner stencil)",
                      [base_domain, inner](double t, double x) {
                        const double hi = scaled_step(inner, t, x);
                        for (int k = -2; k <= 2; ++k) {
                          if (!base_domain(t + k * hi, x) || !base_domain(t, x + k * hi)) return false;
                        }
                        return true;
                      }};
  auto perturbed = [&](double eps) {
    return ExactSolution(sol.family(), sol.params(), inner_domain,
                         [sol, characteristic, eps](double t, double x) {
                           const FieldSample s = sol.evaluate_raw(t, x);
                           const FieldSample c = characteristic(t, x);
                           return FieldSample{s.u + eps * c.u, s.v + eps * c.v};
                         },
                         sol.system());
  };
  SymmetryCheckResult res;
  res.tag = gen.tag;
  res.epsilons = epsilons;
  const ResidualReport base = residual_report(perturbed(0.0), params, grid, h);
  res.floor = base.linf();
  ResidualOptions fixed;
  fixed.auto_margin = false;
  for (double e : epsilons) res.residuals.push_back(residual_report(perturbed(e), params, base.grid, h, fixed).linf());

  const double threshold = 10.0 * res.floor;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (res.residuals[k] > threshold && res.residuals[k] > 0.0) {
      const double lx = std::log(epsilons[k]), ly = std::log(res.residuals[k]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
  }
  res.fitted = n;
  if (n < 2) {
    res.floor_reached = true;
    res.slope = std::numeric_limits<double>::quiet_NaN();
    res.note = "residual stays at the finite-difference floor for every epsilon; the flow is exact at this resolution";
  } else {
    res.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (n < epsilons.size()) res.note = "some epsilons fell below 10x the floor and were excluded from the fit";
  }
  return res;
}

}  // namespace dht
