#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"
#include "dhtlab/errors.hpp"
#include "dhtlab/solutions.hpp"
#include "dhtlab/special_fn.hpp"
#include "dhtlab/verify.hpp"

using namespace dht;

namespace {

const Family kFamilies[] = {Family::F1_PowerLaw,       Family::F2_EqualDiffusionTravelling,
                            Family::F3_StationaryProfileLift, Family::F4_ExpSeparable,
                            Family::F5_Airy,           Family::F6_GaussianSource,
                            Family::F7_ConditionalCaseI, Family::F8_ConditionalCaseII};

double gate(const ExactSolution& sol, const GridSpec& g) { return residual_report(sol, g).linf(); }

/// Residual divided by the largest field magnitude on the grid (at least 1).
double relative_gate(const ExactSolution& sol, const GridSpec& g) {
  const ResidualReport rep = residual_report(sol, g);
  double scale = 1.0;
  for (int i = 0; i < rep.grid.nt; ++i) {
    for (int j = 0; j < rep.grid.nx; ++j) {
      const FieldSample s = sol.evaluate(rep.grid.t(i), rep.grid.x(j));
      scale = std::max({scale, std::abs(s.u), std::abs(s.v)});
    }
  }
  return rep.linf() / scale;
}

std::string constraint_message(const SolutionSpec& spec) {
  try {
    instantiate(spec);
  } catch (const ConstraintError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("solutions: every representative point passes the residual gate") {
  for (Family f : kFamilies) {
    CAPTURE(family_tag(f));
    const ExactSolution sol = instantiate(representative_spec(f));
    const ResidualReport rep = residual_report(sol, representative_window(f));
    CHECK(rep.linf() <= 1e-6);
    CHECK(rep.grid.nt == 41);
    CHECK(rep.grid.nx == 41);
  }
}

TEST_CASE("solutions: other branches pass the residual gate") {
  const GridSpec g{0.0, 1.0, 41, -1.0, 1.0, 41};
  SUBCASE("F1 with exponent 1") {
    CHECK(gate(instantiate({PowerLawParams{1.0}, {0, 3, 1.5, 0.5}}), {0, 1, 41, 0.5, 2, 41}) <= 1e-6);
    CHECK(gate(instantiate({PowerLawParams{1.5}, {0, 0.5, 1.0, 2.0}}), {0, 1, 41, 0.5, 2, 41}) <= 1e-6);
  }
  SUBCASE("F2 sine and linear") {
    TravellingParams tp;
    tp.alpha = 1.0;
    tp.beta = -4.0;  // threshold is -3.25 for R = 2, S = 3
    tp.branch = ProfileBranch::Sine;
    tp.C0 = 0.3;
    CHECK(gate(instantiate({tp, {0, 2, 3, 1}}), {0, 0.5, 41, 0.2, 1.2, 41}) <= 1e-6);
    tp.branch = ProfileBranch::Linear;
    tp.beta = -3.25;
    tp.C1 = 3.0;
    tp.C2 = 1.0;
    CHECK(gate(instantiate({tp, {0, 2, 3, 1}}), g) <= 1e-6);
  }
  SUBCASE("F3 sine and linear") {
    StationaryLiftParams sp;
    sp.beta = -1.0;  // q = -4 for R = 2, S = 0.5, d = 0.5
    sp.branch = ProfileBranch::Sine;
    sp.C0 = 1.5;
    CHECK(gate(instantiate({sp, {0, 2, 0.5, 0.5}}), {0, 1, 41, -0.5, 0.5, 41}) <= 1e-6);
    sp.beta = 1.0 / 3.0;
    sp.branch = ProfileBranch::Linear;
    sp.C1 = 2.0;
    sp.C2 = 0.5;
    CHECK(gate(instantiate({sp, {0, 2, 0.5, 0.5}}), g) <= 1e-6);
  }
  SUBCASE("F4 sub-branches") {
    CHECK(gate(instantiate({ExpSeparableParams{0.4, 0.7, ExpBranch::Auto}, {0, 1.3, 1.3, 0.5}}), g) <= 1e-6);
    CHECK(gate(instantiate({ExpSeparableParams{0.5, -3.0, ExpBranch::Auto}, {0, 3, 1, 1}}), g) <= 1e-6);
    CHECK(gate(instantiate({ExpSeparableParams{0.2, -1.0, ExpBranch::Auto}, {0, 1, 1, 1}}), g) <= 1e-6);
  }
  SUBCASE("F5 with a Bi component and negative alpha") {
    // |u| reaches 1e4 here, so the check is relative to the field size.
    CHECK(relative_gate(instantiate({AiryParams{-1.5, 1.0, 0.3}, {0, 2, 3, 1}}), {0, 1, 41, -2, 2, 41}) <= 1e-6);
  }
  SUBCASE("F6 general form") {
    GaussianSourceParams gp;
    gp.form = GaussianForm::General;
    gp.C = 0.5;
    CHECK(gate(instantiate({gp, {0, 1.5, 3, 1}}), {0.2, 2, 41, -3, 3, 41}) <= 1e-6);
  }
  SUBCASE("F7 with d > 1 and the negative sign") {
    // |v| reaches 7e5 near t = 1, so the check is relative to the field size.
    CHECK(relative_gate(instantiate({CaseIParams{-0.3, -1, false}, {0, 1.2, 1.2, 2.0}}), {0, 1, 41, -1, 1, 41}) <= 1e-6);
  }
  SUBCASE("F8 three-parameter, shifted and simplified forms") {
    CaseIIParams cp;
    cp.form = CaseIIForm::ThreeParameter;
    cp.C = -0.3;
    cp.C2 = 0.2;
    cp.C3 = 0.1;
    CHECK(gate(instantiate({cp, {0, 2, 2, 1}}), g) <= 1e-6);
    cp.form = CaseIIForm::Shifted;
    cp.t0 = 0.5;
    cp.x0 = -2.0;
    CHECK(gate(instantiate({cp, {0, 2, 2, 1}}), g) <= 1e-6);
    cp.form = CaseIIForm::Simplified;
    CHECK(gate(instantiate({cp, {0, 1.5, 1.5, 1}}), g) <= 1e-6);
  }
}

TEST_CASE("solutions: printed forms that fail the gate are flagged") {
  SUBCASE("F7 printed cube root") {
    const ExactSolution sol = instantiate({CaseIParams{0.5, 1, true}, {0, 1.5, 1.5, 0.5}});
    CHECK(sol.unverified_as_printed());
    CHECK(gate(sol, {0, 1, 41, -1, 1, 41}) > 1e-3);
  }
  SUBCASE("F2 printed second exponential") {
    auto spec = representative_spec(Family::F2_EqualDiffusionTravelling);
    std::get<TravellingParams>(spec.family).as_printed = true;
    const ExactSolution sol = instantiate(spec);
    CHECK(sol.unverified_as_printed());
    CHECK(gate(sol, representative_window(Family::F2_EqualDiffusionTravelling)) > 1e-3);
  }
}

TEST_CASE("solutions: constraint violations name the constraint") {
  auto f2 = representative_spec(Family::F2_EqualDiffusionTravelling);
  f2.params.d = 0.5;
  CHECK(constraint_message(f2).find("requires d = 1") != std::string::npos);
  CHECK(constraint_message(f2).find("F2") != std::string::npos);

  auto f5 = representative_spec(Family::F5_Airy);
  f5.params.d = 2.0;
  CHECK(constraint_message(f5) == "F5 requires d = 1");

  auto f1 = representative_spec(Family::F1_PowerLaw);
  f1.params.S = 1.0;
  CHECK(constraint_message(f1).find("S = dR") != std::string::npos);

  auto f6 = representative_spec(Family::F6_GaussianSource);
  f6.params.S = 1.0;
  CHECK(constraint_message(f6).find("S != 1") != std::string::npos);
  f6 = representative_spec(Family::F6_GaussianSource);
  std::get<GaussianSourceParams>(f6.family).t0 = 0.0;
  CHECK_THROWS_AS(instantiate(f6), InvalidParameter);

  auto f7 = representative_spec(Family::F7_ConditionalCaseI);
  f7.params.R = 2.0;
  CHECK(constraint_message(f7).find("R = S") != std::string::npos);

  auto f8 = representative_spec(Family::F8_ConditionalCaseII);
  f8.params.A = 0.5;
  CHECK(constraint_message(f8).find("A = 0") != std::string::npos);

  // Explicit primary branch with gamma = 0 is rejected; Auto routes to GammaZero.
  CHECK(constraint_message({ExpSeparableParams{0.3, 1.0, ExpBranch::Primary}, {0, 3, 1, 1}}).find("gamma") !=
        std::string::npos);
  const ExactSolution routed = instantiate({ExpSeparableParams{0.3, 1.0, ExpBranch::Auto}, {0, 3, 1, 1}});
  REQUIRE_FALSE(routed.notes().empty());
  CHECK(routed.notes().front() == "branch GammaZero");

  // Wrong branch sign for F2.
  auto f2b = representative_spec(Family::F2_EqualDiffusionTravelling);
  std::get<TravellingParams>(f2b.family).branch = ProfileBranch::Sine;
  CHECK(constraint_message(f2b).find("sine branch") != std::string::npos);
}

TEST_CASE("solutions: the Fig. 1 and Fig. 3 points instantiate") {
  CHECK_NOTHROW(instantiate({GaussianSourceParams{GaussianForm::Shifted, 1.0, 0.1}, {0, 1.5, 3, 1}}));
  const ExactSolution f8 = instantiate(representative_spec(Family::F8_ConditionalCaseII));
  bool regime = false;
  for (const auto& n : f8.notes()) regime = regime || n.find("positivity regime") == 0;
  CHECK(regime);
}

TEST_CASE("solutions: evaluation outside the domain raises") {
  const ExactSolution f1 = instantiate(representative_spec(Family::F1_PowerLaw));
  CHECK_THROWS_AS(f1.evaluate(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(f1.evaluate(0.0, 0.0), DomainError);
  try {
    f1.evaluate(0.0, -1.0);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("x > 0") != std::string::npos);
  }
  const ExactSolution f6 = instantiate(representative_spec(Family::F6_GaussianSource));
  CHECK_THROWS_AS(f6.evaluate(-0.2, 0.0), DomainError);
  CHECK_NOTHROW(f6.evaluate(-0.05, 0.0));
  const ExactSolution f7 = instantiate({CaseIParams{0.0, 1, false}, {0, 1.2, 1.2, 2.0}});
  // (d-1) e^{2(S-1)t} < 3 means t < ln(3)/0.4.
  CHECK_NOTHROW(f7.evaluate(2.7, 0.0));
  CHECK_THROWS_AS(f7.evaluate(2.8, 0.0), DomainError);
}

TEST_CASE("solutions: F2, F3, F5 have the stated constant v/u") {
  for (Family f : {Family::F2_EqualDiffusionTravelling, Family::F3_StationaryProfileLift, Family::F5_Airy}) {
    const SolutionSpec spec = representative_spec(f);
    const ExactSolution sol = instantiate(spec);
    const ModelParams& p = spec.params;
    double ratio = 0.0;
    if (f == Family::F2_EqualDiffusionTravelling) ratio = (1 - p.S) / (p.R - p.S);
    if (f == Family::F3_StationaryProfileLift) {
      const double b = std::get<StationaryLiftParams>(spec.family).beta;
      ratio = (p.d - p.S + (1 - p.d) * b) / (p.d * p.R - p.S);
    }
    if (f == Family::F5_Airy) ratio = (p.S - 1) / (p.S - p.R);
    for (double t : {0.0, 0.4, 1.0})
      for (double x : {-1.0, 0.3, 1.7}) {
        const FieldSample s = sol.evaluate(t, x);
        CHECK(s.v == doctest::Approx(ratio * s.u).epsilon(1e-14));
      }
  }
}

TEST_CASE("solutions: F8 three-parameter form with C2 = C3 = 0 equals the special form") {
  CaseIIParams a;
  a.form = CaseIIForm::ThreeParameter;
  a.C = -0.25;
  CaseIIParams b = a;
  b.form = CaseIIForm::Special;
  const ExactSolution sa = instantiate({a, {0, 2, 2, 1}});
  const ExactSolution sb = instantiate({b, {0, 2, 2, 1}});
  for (double t : {0.0, 0.3, 1.0, 2.5})
    for (double x : {-7.0, -1.0, 0.0, 2.0, 9.0}) {
      CHECK(sa.evaluate(t, x).u == doctest::Approx(sb.evaluate(t, x).u).epsilon(1e-14));
      CHECK(sa.evaluate(t, x).v == doctest::Approx(sb.evaluate(t, x).v).epsilon(1e-13));
    }
}

TEST_CASE("solutions: F8 decays in |x| and F6 v/u saturates") {
  const ExactSolution f8 = instantiate(representative_spec(Family::F8_ConditionalCaseII));
  CHECK(f8.evaluate(1.0, 30.0).u < 1e-40);
  CHECK(f8.evaluate(1.0, 30.0).u < f8.evaluate(1.0, 10.0).u);

  const ExactSolution f6 = instantiate(representative_spec(Family::F6_GaussianSource));
  const FieldSample s = f6.evaluate(10.0, 0.0);
  const double S = 3.0, R = 1.5;
  CHECK(std::abs(s.v / s.u - (S - 1) / (S - R)) <= 1e-8);
  CHECK(s.v / s.u == doctest::Approx((S - 1) / (2 * (S - R)) * (1 + std::tanh((S - 1) / 2 * 10.1))).epsilon(1e-14));
}

TEST_CASE("solutions: F5 pinned value at the origin") {
  // z = (1-R)S/(R-S) = 3 at (0, 0); the exponential factor is 1.
  const ExactSolution f5 = instantiate(representative_spec(Family::F5_Airy));
  const FieldSample s = f5.evaluate(0.0, 0.0);
  CHECK(s.u == doctest::Approx(airy(3.0).ai).epsilon(1e-15));
  CHECK(s.u == doctest::Approx(0.006591139357460719).epsilon(1e-12));
  CHECK(s.v == doctest::Approx(2.0 * s.u).epsilon(1e-15));
}

TEST_CASE("positivity_scan") {
  const ExactSolution fig1 = instantiate(representative_spec(Family::F6_GaussianSource));
  const PositivityResult ok = positivity_scan(fig1, {0.0, 5.0, 51, -10.0, 10.0, 81});
  CHECK(ok.ok);
  CHECK_FALSE(ok.first_violation.has_value());

  // S = 3, R = 0.5: the coefficient (S-1)/(2(S-R)) stays positive, so both components stay nonnegative.
  const ExactSolution fig2 = instantiate({GaussianSourceParams{GaussianForm::Shifted, 1.0, 0.1}, {0, 0.5, 3, 1}});
  const PositivityResult r2 = positivity_scan(fig2, {0.0, 5.0, 51, -10.0, 10.0, 81});
  CHECK(r2.ok);

  CaseIIParams cp;
  cp.C = -0.05;
  const ExactSolution bad = instantiate({cp, {0, 2, 2, 1}});
  const PositivityResult r3 = positivity_scan(bad, {0.0, 3.0, 31, -10.0, 10.0, 81});
  REQUIRE_FALSE(r3.ok);
  REQUIRE(r3.first_violation.has_value());
  CHECK(r3.first_violation->component == 'v');
  CHECK(r3.first_violation->t == 0.0);
  CHECK(std::abs(r3.first_violation->x) < 2.0);
  CHECK(r3.first_violation->value < 0.0);
}

TEST_CASE("catalogue") {
  CHECK(catalogue().size() == 8);
  CHECK(catalogue()[5].constraints == "d=1, R≠S, S≠1, t₀>0");
  CHECK(parse_family("f6") == Family::F6_GaussianSource);
  CHECK(parse_family("F8_ConditionalCaseII") == Family::F8_ConditionalCaseII);
  CHECK_THROWS_AS(parse_family("F9"), InvalidParameter);
}
