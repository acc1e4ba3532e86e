#include <cmath>

#include "doctest.h"
#include "dhtlab/errors.hpp"
#include "dhtlab/reductions.hpp"
#include "dhtlab/special_fn.hpp"
#include "dhtlab/verify.hpp"

using namespace dht;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

/// Largest relative difference between a trajectory component and a reference on n points.
template <class F>
double max_rel(const OdeTrajectory& traj, std::size_t i, F ref, int n = 201) {
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = traj.front() + (traj.back() - traj.front()) * k / (n - 1);
    worst = std::max(worst, rel(traj.at(w, i), ref(w)));
  }
  return worst;
}

/// As max_rel, but relative to max(1, |ref|) so zero crossings of chi stay meaningful.
template <class F>
double max_mixed(const OdeTrajectory& traj, std::size_t i, F ref, int n = 201) {
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = traj.front() + (traj.back() - traj.front()) * k / (n - 1);
    const double r = ref(w);
    worst = std::max(worst, std::abs(traj.at(w, i) - r) / std::max(1.0, std::abs(r)));
  }
  return worst;
}

}  // namespace

TEST_CASE("reductions: right-hand sides") {
  SUBCASE("T2C2 at (phi, psi) = (1, 0) with beta = 0") {
    ReductionCase rc{ReductionTag::T2C2};
    const ModelParams p{0, 2, 3, 1.5};
    const State dy = reduced_rhs(rc, p, 0.3, {1.0, 0.0});
    CHECK(dy[0] == doctest::Approx(1.0));
    CHECK(dy[1] == 0.0);
  }
  SUBCASE("phi = 0 is singular") {
    ReductionCase rc{ReductionTag::T2C4};
    CHECK_THROWS_AS(reduced_rhs(rc, {0, 2, 3, 1}, 1.0, {0.0, 1.0}), SingularDenominator);
  }
  SUBCASE("wrong state size and constraints") {
    ReductionCase rc{ReductionTag::T2C3};
    rc.alpha = 1.0;
    CHECK_THROWS_AS(reduced_rhs(rc, {0, 2, 3, 1}, 0.0, {1.0, 0.0}), InvalidParameter);
    CHECK_THROWS_AS(validate_case(rc, {0, 2, 3, 0.5}), ConstraintError);
    rc.alpha = 0.0;
    CHECK_THROWS_AS(validate_case(rc, {0, 2, 3, 1}), ConstraintError);
    CHECK_THROWS_AS(validate_case({ReductionTag::T2C2}, {1, 2, 3, 1}), ConstraintError);
    CHECK_THROWS_AS(validate_case({ReductionTag::CSI}, {0, 2, 2, 0.5}), InvalidParameter);
  }
  SUBCASE("tags round-trip") {
    for (auto t : {ReductionTag::T2C1, ReductionTag::T2C1_scalar, ReductionTag::T2C2, ReductionTag::T2C3,
                   ReductionTag::T2C4, ReductionTag::CSI, ReductionTag::CSII}) {
      CHECK(parse_reduction_tag(to_string(t)) == t);
    }
    CHECK(parse_reduction_tag("t2c1_SCALAR") == ReductionTag::T2C1_scalar);
    CHECK_THROWS_AS(parse_reduction_tag("T2C9"), InvalidParameter);
  }
}

TEST_CASE("reductions: fourth-order equation") {
  SUBCASE("x and x^{3/2} solve phi phi'''' = phi''^2 under S = dR") {
    const double d = 0.5, R = 3.0;
    const ModelParams p{0, R, d * R, d};
    const double beta = d * (R - 1.0) / (1.0 - d);
    for (double x : {0.4, 1.0, 2.5}) {
      CHECK(std::abs(fourth_order_lhs(p, 0.0, beta, x, 1.0, 0.0, 0.0, 0.0)) <= 1e-12);
      const double q = std::pow(x, 1.5);
      const double p1 = 1.5 * std::sqrt(x), p2 = 0.75 / std::sqrt(x);
      const double p3 = -0.375 * std::pow(x, -1.5), p4 = 0.5625 * std::pow(x, -2.5);
      CHECK(std::abs(fourth_order_lhs(p, 0.0, beta, q, p1, p2, p3, p4)) <= 1e-12);
    }
  }
  SUBCASE("integrated pair system is consistent with the scalar equation") {
    ReductionCase rc{ReductionTag::T2C1};
    rc.alpha = 0.7;
    rc.beta = 0.2;
    const ModelParams p{0, 2, 1.5, 0.8};
    const OdeTrajectory tr = integrate(rc, p, {1.0, 0.1, 0.6, -0.2}, 0.0, 1.5);
    CHECK(fourth_order_consistency(rc, p, tr) <= 1e-6);

    ReductionCase sc = rc;
    sc.tag = ReductionTag::T2C1_scalar;
    const State d0 = reduced_rhs(rc, p, 0.0, tr.y.front());
    const double p3 = -rc.alpha * d0[1] - (1.0 - rc.beta) * 0.1 + p.R * (-0.2);
    const OdeTrajectory ts = integrate(sc, p, {1.0, 0.1, d0[1], p3}, 0.0, 1.5);
    CHECK(max_rel(ts, 0, [&](double w) { return tr.at(w, 0); }) <= 1e-6);
  }
}

TEST_CASE("reductions: closed forms agree with integration") {
  SUBCASE("exponential-separable system against the F4 profile") {
    const ModelParams p{0, 2, 0.5, 1.5};
    const double beta = 0.3, C = 1.0;
    const double gamma = chi_gamma(p, beta);
    auto phi = [&](double t) {
      return std::pow(C + std::exp(-gamma * t), p.R / (p.R - p.S)) * std::exp((1 + beta * beta) * t);
    };
    auto psi = [&](double t) {
      return gamma / (p.R - p.S) * std::pow(C + std::exp(-gamma * t), p.S / (p.R - p.S)) *
             std::exp((p.S + p.d * beta * beta) * t);
    };
    ReductionCase rc{ReductionTag::T2C2};
    rc.beta = beta;
    const OdeTrajectory tr = integrate(rc, p, {phi(0), psi(0)}, 0.0, 2.0);
    CHECK(max_rel(tr, 0, phi) <= 1e-6);
    CHECK(max_rel(tr, 1, psi) <= 1e-6);
  }
  SUBCASE("Gaussian-source system against the heat-kernel profile on [1, 3]") {
    const ModelParams p{0, 1.5, 3, 1};
    const double C = 0.5;
    auto phi = [&](double t) {
      return std::exp(t) / std::sqrt(t) * std::pow(C + std::exp((p.S - 1) * t), p.R / (p.R - p.S));
    };
    auto psi = [&](double t) {
      return (p.S - 1) / (p.S - p.R) * std::exp(p.S * t) / std::sqrt(t) *
             std::pow(C + std::exp((p.S - 1) * t), p.S / (p.R - p.S));
    };
    const OdeTrajectory tr = integrate({ReductionTag::T2C4}, p, {phi(1), psi(1)}, 1.0, 3.0);
    CHECK(max_rel(tr, 0, phi) <= 1e-6);
    CHECK(max_rel(tr, 1, psi) <= 1e-6);
  }
  SUBCASE("Airy system") {
    const ModelParams p{0, 2, 3, 1};
    const double alpha = 1.0;
    const double b = p.S * (1 - p.R) / (p.R - p.S);
    auto z = [&](double y) { return y / std::cbrt(std::pow(alpha, 4)) + std::cbrt(alpha * alpha) * b; };
    auto phi = [&](double y) { return airy(z(y)).ai; };
    const double k = (p.S - 1) / (p.S - p.R);
    ReductionCase rc{ReductionTag::T2C3};
    rc.alpha = alpha;
    const double dz = 1.0 / std::cbrt(std::pow(alpha, 4));
    const AiryPair a0 = airy(z(0.0));
    const OdeTrajectory tr = integrate(rc, p, {a0.ai, dz * a0.ai_prime, k * a0.ai, k * dz * a0.ai_prime}, 0.0, 2.0);
    CHECK(max_rel(tr, 0, phi) <= 1e-6);
    CHECK(max_rel(tr, 2, [&](double y) { return k * phi(y); }) <= 1e-6);
  }
  SUBCASE("Case-I system against the closed-form phi, psi") {
    const ModelParams p{0, 1.5, 1.5, 0.5};
    const double C = 0.5;
    ReductionCase rc{ReductionTag::CSI};
    rc.f = [p](double t) { return case_one_f(p, 1, t); };
    const PhiPsi s0 = case_one_phi_psi(p, C, 0.0);
    const OdeTrajectory tr = integrate(rc, p, {s0.phi, s0.psi}, 0.0, 1.5);
    CHECK(max_rel(tr, 0, [&](double t) { return case_one_phi_psi(p, C, t).phi; }) <= 1e-6);
    CHECK(max_rel(tr, 1, [&](double t) { return case_one_phi_psi(p, C, t).psi; }) <= 1e-6);
  }
  SUBCASE("Case-II system with the particular (g, h) against the closed-form phi, psi on [0, 2]") {
    const double S = 2.0, C = -0.3, C2 = 0.2, C3 = 0.1;
    const ModelParams p{0, S, S, 1};
    ReductionCase rc{ReductionTag::CSII};
    rc.gh = [=](double t) { return case_two_family_gh(S, C2, C3, t); };
    const PhiPsi s0 = case_two_phi_psi(S, C, C2, C3, 0.0);
    const OdeTrajectory tr = integrate(rc, p, {s0.phi, s0.psi}, 0.0, 2.0);
    CHECK(max_rel(tr, 0, [&](double t) { return case_two_phi_psi(S, C, C2, C3, t).phi; }) <= 1e-6);
    CHECK(max_rel(tr, 1, [&](double t) { return case_two_phi_psi(S, C, C2, C3, t).psi; }) <= 1e-6);
  }
  SUBCASE("trivial system keeps its initial value") {
    const OdeTrajectory tr = integrate_ode([](double, const State& y, State& dy) { dy.assign(y.size(), 0.0); },
                                           {2.5, -1.0}, 0.0, 3.0);
    CHECK(tr.at(1.7, 0) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(tr.at(2.9, 1) == doctest::Approx(-1.0).epsilon(1e-15));
  }
}

TEST_CASE("reductions: chi branches") {
  SUBCASE("Primary with C = 0 is constant") {
    const ModelParams p{0, 2, 0.5, 1.5};
    const ChiBranch b{ChiBranchTag::Primary, 0.0, 0.3};
    const double expect = 1 + 0.09 - chi_gamma(p, 0.3) * p.R / (p.R - p.S);
    CHECK(chi_closed_form(b, p, 0.0) == doctest::Approx(expect).epsilon(1e-15));
    CHECK(chi_closed_form(b, p, 7.0) == doctest::Approx(expect).epsilon(1e-15));
  }
  SUBCASE("closed forms match integrated Riccati equations") {
    struct Row {
      ChiBranch b;
      ModelParams p;
      double t0, t1;
    };
    const Row rows[] = {
        {{ChiBranchTag::Primary, 0.7, 0.3}, {0, 2, 0.5, 1.5}, 0.0, 3.0},
        {{ChiBranchTag::Primary, -0.2, 0.5}, {0, 3, 1.2, 0.5}, 0.0, 2.0},
        {{ChiBranchTag::EqualRS, 0.4, 0.4}, {0, 1.3, 1.3, 0.5}, 0.0, 3.0},
        {{ChiBranchTag::GammaZero, -3.0, 0.5}, {0, 3, 1, 1}, 0.0, 1.0},
        {{ChiBranchTag::Case4General, 0.5, 0.0}, {0, 1.5, 3, 1}, 0.2, 3.0},
        {{ChiBranchTag::Case4EqualRS, 0.3, 0.0}, {0, 1.4, 1.4, 1}, 0.5, 3.0},
    };
    for (const Row& r : rows) {
      CAPTURE(to_string(r.b.tag));
      const OdeTrajectory tr = integrate_chi(r.b, r.p, chi_closed_form(r.b, r.p, r.t0), r.t0, r.t1, 1e-11);
      CHECK(max_mixed(tr, 0, [&](double t) { return chi_closed_form(r.b, r.p, t); }) <= 1e-8);
    }
  }
  SUBCASE("Case4General at large t with S > 1, C > 0") {
    // The correction tends to R(S-1)/(R-S), not to zero.
    const ModelParams p{0, 1.5, 3, 1};
    const ChiBranch b{ChiBranchTag::Case4General, 0.5, 0.0};
    const double t = 40.0;
    const double correction = chi_closed_form(b, p, t) - (1.0 - 1.0 / (2 * t));
    CHECK(correction == doctest::Approx(p.R * (p.S - 1) / (p.R - p.S)).epsilon(1e-12));
    const ModelParams q{0, 3, 0.5, 1};
    const double c2 = chi_closed_form(b, q, t) - (1.0 - 1.0 / (2 * t));
    CHECK(std::abs(c2) <= 1e-6);
  }
  SUBCASE("integration stops at a pole") {
    const ModelParams p{0, 3, 1, 1};
    const ChiBranch b{ChiBranchTag::GammaZero, -1.0, 0.5};  // pole at t = 0.5
    try {
      integrate_chi(b, p, chi_closed_form(b, p, 0.0), 0.0, 1.0);
      FAIL("expected a pole");
    } catch (const IntegrationFailure& e) {
      CHECK(e.last_reached() == doctest::Approx(0.5).epsilon(1e-3));
    }
  }
}

TEST_CASE("reductions: chi lifts") {
  SUBCASE("Primary lift equals F4 pointwise") {
    const ModelParams p{0, 2, 0.5, 1.5};
    const ExactSolution lift = chi_to_solution({ChiBranchTag::Primary, 1.0, 0.3}, p);
    const ExactSolution f4 = instantiate({ExpSeparableParams{0.3, 1.0, ExpBranch::Primary}, p});
    for (double t : {0.0, 0.5, 1.0}) {
      for (double x : {-1.0, 0.2, 1.0}) {
        CHECK(rel(lift.evaluate(t, x).u, f4.evaluate(t, x).u) <= 1e-13);
        CHECK(rel(lift.evaluate(t, x).v, f4.evaluate(t, x).v) <= 1e-13);
      }
    }
  }
  SUBCASE("Case-4 lift with C = 1 reproduces the cosh form") {
    const ModelParams p{0, 1.5, 3, 1};
    const double R = p.R, S = p.S;
    const ExactSolution lift = chi_to_solution({ChiBranchTag::Case4General, 1.0, 0.0}, p, std::pow(2.0, -R / (R - S)));
    for (double t : {0.3, 1.0, 2.0}) {
      for (double x : {-2.0, 0.0, 1.5}) {
        const double u = std::pow(std::cosh((S - 1) / 2 * t), R / (R - S)) / std::sqrt(t) *
                         std::exp((2 * S - R - R * S) / (2 * (S - R)) * t - x * x / (4 * t));
        const double v = (S - 1) / (2 * (S - R)) * (1 + std::tanh((S - 1) / 2 * t)) * u;
        CHECK(rel(lift.evaluate(t, x).u, u) <= 1e-12);
        CHECK(rel(lift.evaluate(t, x).v, v) <= 1e-12);
      }
    }
  }
  SUBCASE("every branch lift passes the residual gate") {
    const GridSpec g{0.2, 1.0, 41, -1.0, 1.0, 41};
    CHECK(residual_report(chi_to_solution({ChiBranchTag::Primary, 0.7, 0.3}, {0, 2, 0.5, 1.5}), g).linf() <= 1e-6);
    CHECK(residual_report(chi_to_solution({ChiBranchTag::EqualRS, 0.4, 0.4}, {0, 1.3, 1.3, 0.5}), g).linf() <= 1e-6);
    CHECK(residual_report(chi_to_solution({ChiBranchTag::GammaZero, -3.0, 0.5}, {0, 3, 1, 1}), g).linf() <= 1e-6);
    CHECK(residual_report(chi_to_solution({ChiBranchTag::GammaZero, 2.0, 0.0}, {0, 1, 1, 1}), g).linf() <= 1e-6);
    CHECK(residual_report(chi_to_solution({ChiBranchTag::Case4General, 0.5, 0}, {0, 1.5, 3, 1}), g).linf() <= 1e-6);
    CHECK(residual_report(chi_to_solution({ChiBranchTag::Case4EqualRS, 0.3, 0}, {0, 1.4, 1.4, 1}), g).linf() <=
          1e-6);
  }
  SUBCASE("lift constraints") {
    CHECK_THROWS_AS(chi_to_solution({ChiBranchTag::Primary, 1.0, 0.3}, {0, 2, 2, 1.5}), ConstraintError);
    CHECK_THROWS_AS(chi_to_solution({ChiBranchTag::Primary, 1.0, 0.3}, {0, 2, 0.5, 1.5}, -1.0), InvalidParameter);
    const ExactSolution c4 = chi_to_solution({ChiBranchTag::Case4General, 0.5, 0}, {0, 1.5, 3, 1});
    CHECK_FALSE(c4.in_domain(0.0, 0.0));
    CHECK_THROWS_AS(c4.evaluate(-1.0, 0.0), DomainError);
  }
}

TEST_CASE("reductions: the f equation") {
  const ModelParams p{0, 1.5, 1.5, 0.5};
  SUBCASE("C1 = 0 matches the explicit f") {
    const OdeTrajectory tr = f_solve(p, 0.0, case_one_f(p, 1, 0.0).f, 0.0, 2.0, 1e-12);
    CHECK(max_rel(tr, 0, [&](double t) { return case_one_f(p, 1, t).f; }) <= 1e-8);
    CHECK(f_equation_residual(p, tr) <= 1e-6);
    const OdeTrajectory neg = f_solve(p, 0.0, case_one_f(p, -1, 0.0).f, 0.0, 2.0, 1e-11);
    CHECK(max_rel(neg, 0, [&](double t) { return case_one_f(p, -1, t).f; }) <= 1e-8);
  }
  SUBCASE("a root of the cubic is an equilibrium") {
    // (d-1)/3 f^3 + (S-1) f + C1 = 0 at f = 1 with C1 = 1/6 - 1/2.
    const double C1 = -((p.d - 1) / 3 + (p.S - 1));
    const OdeTrajectory tr = f_solve(p, C1, 1.0, 0.0, 5.0);
    CHECK(std::abs(tr.at(4.3, 0) - 1.0) <= 1e-14);
  }
  SUBCASE("residual along a general trajectory") {
    const OdeTrajectory tr = f_solve(p, 0.3, -0.4, 0.0, 2.0, 1e-11);
    CHECK(f_equation_residual(p, tr) <= 1e-6);
  }
  SUBCASE("finite-time blow-up is reported with its location") {
    const ModelParams q{0, 1.5, 1.5, 2.0};
    // f' ~ f^3 / 3 from f(0) = 2 blows up near t = 3/(2 f0^2) = 0.375, earlier with the linear term.
    try {
      f_solve(q, 0.0, 2.0, 0.0, 5.0);
      FAIL("expected blow-up");
    } catch (const IntegrationFailure& e) {
      CHECK(e.last_reached() > 0.2);
      CHECK(e.last_reached() < 0.4);
    }
    CHECK_THROWS_AS(f_solve({0, 1.5, 1.5, 1.0}, 0.0, 1.0, 0.0, 1.0), ConstraintError);
  }
}

TEST_CASE("reductions: Case-I pipeline") {
  const ModelParams p{0, 1.5, 1.5, 0.5};
  const double C = 0.5, t0 = 0.0, t1 = 1.0;
  const CaseOneF f0 = case_one_f(p, 1, t0);
  const double chi0 = 1.0 + f0.f * f0.f + 3.0 * (p.S - 1.0) * case_one_G(p, C, t0) / case_one_D(p, t0);
  const double phi0 = case_one_phi_psi(p, C, t0).phi;
  const ExactSolution pipe = caseI_pipeline(p, 0.0, f0.f, chi0, t0, t1, phi0);
  const ExactSolution f7 = instantiate({CaseIParams{C, 1, false}, p});
  SUBCASE("C1 = 0 matches F7") {
    double worst = 0.0;
    for (double t : {0.0, 0.25, 0.5, 0.8, 1.0}) {
      for (double x : {-1.0, 0.0, 0.6, 1.0}) {
        worst = std::max({worst, rel(pipe.evaluate(t, x).u, f7.evaluate(t, x).u),
                          std::abs(pipe.evaluate(t, x).v - f7.evaluate(t, x).v) /
                              std::max(1.0, std::abs(f7.evaluate(t, x).v))});
      }
    }
    CHECK(worst <= 1e-6);
  }
  SUBCASE("explicit K coefficients agree with the general ones") {
    for (double t : {0.0, 0.4, 1.3}) {
      for (double d : {0.5, 2.0}) {
        const ModelParams q{0, 1.2, 1.2, d};
        if (!case_one_defined(q, t)) continue;
        const CaseOneF f = case_one_f(q, 1, t);
        const KCoefficients a = case_one_K(q, f.f, f.fp), b = case_one_K_explicit(q, t);
        CHECK(a.K0 == doctest::Approx(b.K0).epsilon(1e-12));
        CHECK(a.K1 == doctest::Approx(b.K1).epsilon(1e-12));
      }
    }
  }
  SUBCASE("residual gate on the strip") {
    CHECK(residual_report(pipe, {t0, t1, 41, -1, 1, 41}).linf() <= 1e-5);
    const ExactSolution general = caseI_pipeline(p, 0.2, 0.3, 0.5, 0.0, 1.0);
    CHECK(residual_report(general, {0, 1, 41, -1, 1, 41}).linf() <= 1e-5);
  }
  SUBCASE("outside the strip") {
    CHECK_THROWS_AS(pipe.evaluate(1.5, 0.0), DomainError);
  }
}

TEST_CASE("reductions: the (g, h) system") {
  SUBCASE("particular solution") {
    const double S = 2.0, C1 = 1.0, C2 = 0.0, C3 = 1.0;
    const double C = C1 * C1 * (S - 1) * (S - 1) / 4.0;
    auto ref = [=](double t) { return case_two_particular(S, C1, C2, C3, t); };
    CHECK(gh_residual(S, C, ref, 0.0, 2.0).max() <= 1e-6);
    const CaseTwoGH q0 = ref(0.0);
    const OdeTrajectory tr = gh_solve(S, C, q0.g, q0.gp, q0.h, q0.hp, 0.0, 2.0);
    CHECK(max_rel(tr, 0, [&](double t) { return ref(t).g; }) <= 1e-7);
    CHECK(max_rel(tr, 2, [&](double t) { return ref(t).h; }, 200) <= 1e-7);
    CHECK(gh_residual(S, C, tr).max() <= 1e-6);
  }
  SUBCASE("C = 0 with h = 0 keeps g linear") {
    const OdeTrajectory tr = gh_solve(2.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.0, 2.0);
    CHECK(tr.at(1.6, 0) == doctest::Approx(1.8).epsilon(1e-12));
    CHECK(tr.at(1.6, 2) == 0.0);
  }
  SUBCASE("g reaching zero is singular") {
    CHECK_THROWS_AS(gh_solve(2.0, -1.0, 1.0, -1.0, 0.0, 0.0, 0.0, 2.0), SingularDenominator);
    CHECK_THROWS_AS(gh_solve(2.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0), SingularDenominator);
  }
}

TEST_CASE("reductions: oracle reports") {
  const OracleReport chi = chi_oracle({ChiBranchTag::Case4General, 0.5, 0.0}, {0, 1.5, 3, 1}, 0.2, 3.0);
  CHECK(chi.norm == "mixed");
  CHECK(chi.max_rel_error <= 1e-6);
  CHECK(f_oracle({0, 1.5, 1.5, 0.5}, -1, 0.0, 2.0).max_rel_error <= 1e-6);
  CHECK(caseI_oracle({0, 1.5, 1.5, 0.5}, 0.5, 0.0, 1.5).max_rel_error <= 1e-6);
  CHECK(caseII_oracle(2.0, -0.3, 0.2, 0.1, 0.0, 2.0).max_rel_error <= 1e-6);
  const OracleReport pipe = caseI_pipeline_oracle({0, 1.5, 1.5, 0.5}, 0.5, 0.0, 1.0);
  CHECK(pipe.samples == 441);
  CHECK(pipe.max_rel_error <= 1e-6);
  CHECK_THROWS_AS(chi_oracle({ChiBranchTag::GammaZero, -1.0, 0.5}, {0, 3, 1, 1}, 0.0, 1.0), IntegrationFailure);
}
