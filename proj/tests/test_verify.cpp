#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "dhtlab/errors.hpp"
#include "dhtlab/reductions.hpp"
#include "dhtlab/transforms.hpp"
#include "dhtlab/verify.hpp"

using namespace dht;

namespace {

const std::vector<double> kEps{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};

SymmetryCheckResult check(const ExactSolution& sol, const std::string& tag, const GridSpec& g) {
  return infinitesimal_symmetry_check(sol, table1_generator(tag, sol.params()), sol.params(), kEps, g);
}

ExactSolution f6_fig1() {
  GaussianSourceParams gp;
  gp.t0 = 0.1;
  return instantiate({gp, {0, 1.5, 3, 1}});
}

}  // namespace

TEST_CASE("verify: finite-difference jet") {
  const ExactSolution poly(Family::Custom, {0, 2, 2, 1}, Domain::everywhere(), [](double t, double x) {
    return FieldSample{t * t + x * x * x, std::exp(t - x)};
  });
  const Jet j = fd_jet(poly, 0.5, 0.3, 1e-3);
  CHECK(j.ut == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j.ux == doctest::Approx(0.27).epsilon(1e-10));
  CHECK(j.uxx == doctest::Approx(1.8).epsilon(1e-8));
  CHECK(j.vxx == doctest::Approx(std::exp(0.2)).epsilon(1e-8));
  const Jet jr = fd_jet(poly, 0.5, 0.3, 1e-2, true);
  CHECK(jr.vt == doctest::Approx(std::exp(0.2)).epsilon(1e-12));
  CHECK(scaled_step(1e-3, 0.5, -4.0) == doctest::Approx(4e-3));

  const ExactSolution half(Family::Custom, {0, 2, 2, 1}, {"t > 0", [](double t, double) { return t > 0; }},
                           [](double t, double x) { return FieldSample{t + x, t}; });
  CHECK_THROWS_AS(fd_jet(half, 0.001, 0.0, 1e-3), DomainError);
}

TEST_CASE("verify: residual report and negative control") {
  const ExactSolution sol = f6_fig1();
  const GridSpec g{0.1, 3, 41, -6, 6, 41};
  const ResidualReport rep = residual_report(sol, g);
  CHECK(rep.linf() <= 1e-6);
  CHECK(rep.l2_s1 <= rep.linf_s1);
  const nlohmann::json j = rep.to_json();
  CHECK(j.at("version").get<std::string>() == version());
  CHECK(j.at("provenance").get<std::string>() == sol.provenance());
  CHECK(residual_report(perturb_u(sol, 0.01), g).linf() > 1e-3);
  CHECK(perturb_u(sol, 0.01).provenance().find("PerturbU(0.01)") != std::string::npos);
}

TEST_CASE("verify: symmetry operators have second-order infinitesimal residuals") {
  const GridSpec g{0.2, 1.0, 21, -1.0, 1.0, 21};
  const ExactSolution f6 = f6_fig1();
  SUBCASE("P_t, P_x, G and Q on the Case-II family") {
    const ExactSolution f8 = instantiate(representative_spec(Family::F8_ConditionalCaseII));
    for (const char* tag : {"P_t", "P_x", "G", "Q"}) {
      CAPTURE(tag);
      const SymmetryCheckResult r = check(f8, tag, g);
      CHECK(r.slope >= 1.8);
      CHECK(r.slope <= 2.2);
    }
  }
  SUBCASE("P_t is second order on the Gaussian-source family") {
    const SymmetryCheckResult r = check(f6, "P_t", g);
    CHECK(r.slope >= 1.8);
    CHECK(r.slope <= 2.2);
  }
  SUBCASE("P_x and G are exact when v/u depends on t only") {
    // With v = k(t) u the system is linear in u, so first-order flows of linear symmetries stay on solutions.
    for (const char* tag : {"P_x", "G"}) {
      CAPTURE(tag);
      const SymmetryCheckResult r = check(f6, tag, g);
      for (double res : r.residuals) CHECK(res <= 1e-6);
    }
  }
  SUBCASE("I on a homogeneous system is exact") {
    const SymmetryCheckResult r = check(f6, "I", g);
    CHECK(r.floor_reached);
    CHECK(std::isnan(r.slope));
    for (double res : r.residuals) CHECK(res <= 1e-6);
  }
  SUBCASE("D and Pi with S = 1") {
    const ExactSolution lift = chi_to_solution({ChiBranchTag::GammaZero, -3.0, 0.5}, {0, 3, 1, 1});
    for (const char* tag : {"D", "Pi"}) {
      CAPTURE(tag);
      const SymmetryCheckResult r = check(lift, tag, g);
      CHECK(r.slope >= 1.8);
      CHECK(r.slope <= 2.2);
    }
  }
  SUBCASE("Y with R = S = 1") {
    const ExactSolution lift = chi_to_solution({ChiBranchTag::GammaZero, 2.0, 0.3}, {0, 1, 1, 1});
    const SymmetryCheckResult r = check(lift, "Y", g);
    CHECK(r.slope >= 1.8);
    CHECK(r.slope <= 2.2);
  }
  SUBCASE("I on A = 1 is not a symmetry") {
    const ExactSolution steady = instantiate({SteadyStateParams{}, {1, 2, 1, 1}});
    const GeneratorSpec gen = table1_generator("I", steady.params(), false);
    const SymmetryCheckResult r = infinitesimal_symmetry_check(steady, gen, steady.params(), kEps, g);
    CHECK(r.slope <= 1.3);
    CHECK(r.slope >= 0.7);
  }
  SUBCASE("restrictions are enforced") {
    CHECK_THROWS_AS(table1_generator("I", {1, 2, 1, 1}), ConstraintError);
    CHECK_THROWS_AS(table1_generator("G", {0, 2, 3, 0.5}), ConstraintError);
    CHECK_THROWS_AS(table1_generator("Q", {0, 2, 3, 1}), ConstraintError);
    CHECK_THROWS_AS(table1_generator("Pi", {0, 1, 1, 1}), ConstraintError);
    CHECK_THROWS_AS(table1_generator("Z", {0, 1, 1, 1}), InvalidParameter);
  }
}

TEST_CASE("verify: invariant surface conditions") {
  SUBCASE("Case I") {
    const SolutionSpec spec = representative_spec(Family::F7_ConditionalCaseI);
    const ExactSolution f7 = instantiate(spec);
    const ModelParams p = spec.params;
    const SurfaceDeviation dev = invariant_surface_check(
        f7, [p](double t) { return case_one_f(p, 1, t); }, representative_window(Family::F7_ConditionalCaseI));
    CHECK(dev.max() <= 1e-6);
    const SurfaceDeviation wrong = invariant_surface_check(
        f7, [p](double t) { return case_one_f(p, -1, t); }, representative_window(Family::F7_ConditionalCaseI));
    CHECK(wrong.max() > 1e-2);
  }
  SUBCASE("Case II") {
    const SolutionSpec spec = representative_spec(Family::F8_ConditionalCaseII);
    const ExactSolution f8 = instantiate(spec);
    const double S = spec.params.S;
    const SurfaceDeviation dev = invariant_surface_check_caseII(
        f8, [S](double t) { return case_two_family_gh(S, 0.0, 0.0, t); },
        representative_window(Family::F8_ConditionalCaseII));
    CHECK(dev.max() <= 1e-6);
    CaseIIParams cp;
    cp.form = CaseIIForm::ThreeParameter;
    cp.C = -0.3;
    cp.C2 = 0.2;
    cp.C3 = 0.1;
    const ExactSolution three = instantiate({cp, {0, S, S, 1}});
    const SurfaceDeviation d3 = invariant_surface_check_caseII(
        three, [S](double t) { return case_two_family_gh(S, 0.2, 0.1, t); }, {0, 1, 41, -2, 2, 41});
    CHECK(d3.max() <= 1e-6);
  }
}

TEST_CASE("transforms") {
  const ExactSolution f6 = f6_fig1();
  SUBCASE("Galilei boost of F6 passes the gate") {
    const ExactSolution boosted = dht::apply(TransformSpec{Galilei{0.5}}, f6);
    CHECK(residual_report(boosted, {0.1, 3, 41, -6, 6, 41}).linf() <= 1e-6);
    CHECK(boosted.provenance() == "F6 | Galilei(0.5)");
  }
  SUBCASE("time shift and scale of the general form give the shifted form") {
    const ModelParams p{0, 1.5, 3, 1};
    GaussianSourceParams gen;
    gen.form = GaussianForm::General;
    gen.C = 1.0;
    const double t0 = 0.1, R = p.R, S = p.S;
    const double k = (2 * S - R - R * S) / (2 * (S - R));
    const TransformChain chain{TimeShift{t0}, Scale{std::pow(2.0, -R / (R - S)) * std::exp(-k * t0)}};
    const ExactSolution a = dht::apply(chain, instantiate({gen, p}));
    for (double t : {0.0, 0.7, 2.0}) {
      for (double x : {-3.0, 0.0, 2.0}) {
        CHECK(a.evaluate(t, x).u == doctest::Approx(f6.evaluate(t, x).u).epsilon(1e-12));
        CHECK(a.evaluate(t, x).v == doctest::Approx(f6.evaluate(t, x).v).epsilon(1e-12));
      }
    }
  }
  SUBCASE("composition is application in order") {
    const TransformChain first{SpaceShift{1.0}}, second{Galilei{0.3}, Scale{2.0}};
    const ExactSolution a = dht::apply(compose(first, second), f6);
    const ExactSolution b = dht::apply(second, dht::apply(first, f6));
    CHECK(a.evaluate(0.4, 0.5).u == b.evaluate(0.4, 0.5).u);
    CHECK(compose({first, second, first}).size() == 4);
    const ExactSolution back = dht::apply(TransformChain{SpaceShift{1.0}, SpaceShift{-1.0}}, f6);
    CHECK(back.evaluate(0.4, 0.5).u == doctest::Approx(f6.evaluate(0.4, 0.5).u).epsilon(1e-15));
  }
  SUBCASE("gauge transform") {
    const ExactSolution lift = chi_to_solution({ChiBranchTag::GammaZero, -3.0, 0.5}, {0, 3, 1, 1});
    const ExactSolution reduced = dht::apply(TransformSpec{GaugeExp{GaugeDirection::Inverse}}, lift);
    CHECK(reduced.system() == SystemKind::GaugeReduced);
    CHECK(residual_report(reduced, {0.2, 1, 21, -1, 1, 21}).linf() <= 1e-6);
    const ExactSolution again = dht::apply(TransformSpec{GaugeExp{GaugeDirection::Forward}}, reduced);
    CHECK(again.evaluate(0.5, 0.1).u == doctest::Approx(lift.evaluate(0.5, 0.1).u).epsilon(1e-14));
    CHECK_THROWS_AS(dht::apply(TransformSpec{GaugeExp{GaugeDirection::Forward}}, lift), ConstraintError);
  }
  SUBCASE("compatibility and parsing") {
    const ExactSolution f7 = instantiate(representative_spec(Family::F7_ConditionalCaseI));
    CHECK_THROWS_AS(dht::apply(TransformSpec{Galilei{0.5}}, f7), ConstraintError);
    const ExactSolution steady = instantiate({SteadyStateParams{}, {1, 2, 1, 1}});
    CHECK_THROWS_AS(dht::apply(TransformSpec{Scale{2.0}}, steady), ConstraintError);
    CHECK_THROWS_AS(dht::apply(TransformSpec{Scale{0.0}}, f6), InvalidParameter);
    CHECK(describe(parse_transform("timeshift:0.25")) == "TimeShift(0.25)");
    CHECK(describe(parse_transform("Galilei(-0.5)")) == "Galilei(-0.5)");
    CHECK(describe(parse_transform("gauge_exp(inverse)")) == "GaugeExp(inverse)");
    CHECK_THROWS_AS(parse_transform("Rotate(1)"), InvalidParameter);
    CHECK_THROWS_AS(parse_transform("Scale(abc)"), InvalidParameter);
  }
  SUBCASE("approximate flag survives transforms") {
    const ExactSolution approx = ExactSolution(f6).mark_approximate();
    CHECK(dht::apply(TransformSpec{SpaceShift{2.0}}, approx).approximate());
  }
}
