#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dhtlab/core_model.hpp"
#include "dhtlab/grid.hpp"

namespace dht {

/// Catalogue tags. F1..F8 are the closed-form families; the rest label derived objects.
enum class Family {
  F1_PowerLaw,
  F2_EqualDiffusionTravelling,
  F3_StationaryProfileLift,
  F4_ExpSeparable,
  F5_Airy,
  F6_GaussianSource,
  F7_ConditionalCaseI,
  F8_ConditionalCaseII,
  SteadyState,
  Lifted,         ///< built from an ODE reduction
  Superposition,  ///< sum of shifted copies (approximate)
  Custom,
};

/// "F1" .. "F8", "steady", "lifted", "superposition", "custom".
std::string family_tag(Family f);
std::string family_name(Family f);
/// Accepts the short tag ("F6") or the full name ("F6_GaussianSource"), case-insensitively.
Family parse_family(const std::string& text);

/// u = x^p e^{beta t}, p in {1, 3/2}, with beta = d(R-1)/(1-d). Needs S = dR, d != 1.
struct PowerLawParams {
  double exponent{1.5};
};

enum class ProfileBranch { TwoExponential, Sine, Linear };
std::string to_string(ProfileBranch b);

/// Travelling profile phi(x - alpha t) e^{beta t} for d = 1.
struct TravellingParams {
  double alpha{0.0};
  double beta{0.0};
  ProfileBranch branch{ProfileBranch::TwoExponential};
  double C1{1.0};
  double C2{0.0};
  double C0{0.0};  ///< phase of the sine branch
  /// Use the printed second exponential of the two-exponential branch (fails the residual gate).
  bool as_printed{false};
};

/// Stationary profile phi(x) e^{beta t} for d != 1.
struct StationaryLiftParams {
  double beta{0.0};
  ProfileBranch branch{ProfileBranch::TwoExponential};
  double C1{1.0};
  double C2{0.0};
  double C0{0.0};
  /// Restrict the sine branch to the lobes where u > 0.
  bool positive_lobes_only{false};
};

enum class ExpBranch { Auto, Primary, EqualRS, GammaZero };
std::string to_string(ExpBranch b);

/// phi(t) e^{beta x}, psi(t) e^{beta x} with phi'/phi from the Riccati closed forms.
struct ExpSeparableParams {
  double beta{0.0};
  double C{1.0};
  ExpBranch branch{ExpBranch::Auto};
};

/// (C1 Ai(z) + C2 Bi(z)) exp(2t^3/(3 alpha^2) - t x / alpha), d = 1.
struct AiryParams {
  double alpha{1.0};
  double C1{1.0};
  double C2{0.0};
};

enum class GaussianForm { General, Shifted };

/// Heat-kernel type solution for d = 1; the shifted form is regular at t = 0.
struct GaussianSourceParams {
  GaussianForm form{GaussianForm::Shifted};
  double C{1.0};   ///< General form only
  double t0{0.1};  ///< Shifted form only, t0 > 0
};

/// Explicit solution generated by the Case-I conditional symmetry (R = S, d != 1, S > 1).
struct CaseIParams {
  double C{0.0};
  int sign{1};
  /// Use the printed v-component (cube root), which fails the residual gate.
  bool as_printed{false};
};

enum class CaseIIForm { ThreeParameter, Special, Shifted, Simplified };
std::string to_string(CaseIIForm f);

/// Solutions generated by the Case-II conditional symmetry (R = S, d = 1).
struct CaseIIParams {
  CaseIIForm form{CaseIIForm::Special};
  double C{-0.25};
  double C2{0.0};  ///< ThreeParameter, Simplified
  double C3{0.0};  ///< ThreeParameter
  double t0{0.0};  ///< Shifted
  double x0{0.0};  ///< Shifted
};

/// u = v = A/(R-1); needs A > 0, R > 1.
struct SteadyStateParams {};

using FamilyParams =
    std::variant<PowerLawParams, TravellingParams, StationaryLiftParams, ExpSeparableParams, AiryParams,
                 GaussianSourceParams, CaseIParams, CaseIIParams, SteadyStateParams>;

struct SolutionSpec {
  FamilyParams family;
  ModelParams params;

  Family tag() const;
};

/// Validity domain of a solution: a description and a predicate.
struct Domain {
  std::string description{"all (t,x)"};
  std::function<bool(double, double)> contains;

  static Domain everywhere();
  bool operator()(double t, double x) const { return !contains || contains(t, x); }
  /// Intersection, with the descriptions joined.
  Domain intersect(const Domain& other) const;
};

/**
 * An evaluable (u, v) field together with the system it solves, its domain and provenance.
 *
 * Values are immutable; evaluate() is pure and safe to call concurrently.
 */
class ExactSolution {
 public:
  using Evaluator = std::function<FieldSample(double t, double x)>;

  ExactSolution(Family family, ModelParams params, Domain domain, Evaluator eval,
                SystemKind system = SystemKind::Dht);

  /// Throws DomainError out of the domain, or if the formula produces a non-finite value.
  FieldSample evaluate(double t, double x) const;
  /// Formula value without any checks.
  FieldSample evaluate_raw(double t, double x) const { return (*eval_)(t, x); }
  bool in_domain(double t, double x) const { return domain_(t, x); }

  Family family() const { return family_; }
  const ModelParams& params() const { return params_; }
  const Domain& domain() const { return domain_; }
  SystemKind system() const { return system_; }
  const std::optional<SolutionSpec>& spec() const { return spec_; }

  bool approximate() const { return approximate_; }
  bool unverified_as_printed() const { return unverified_; }
  const std::string& seed() const { return seed_; }
  const std::vector<std::string>& transform_chain() const { return chain_; }
  const std::vector<std::string>& notes() const { return notes_; }

  /// Family tag followed by the transform chain, e.g. "F6 | TimeShift(0.1)".
  std::string provenance() const;

  // Builders used by the catalogue, the transforms and the reductions.
  ExactSolution& with_spec(SolutionSpec spec);
  ExactSolution& with_seed(std::string seed);
  ExactSolution& mark_approximate(bool on = true);
  ExactSolution& mark_unverified(bool on = true);
  ExactSolution& add_transform(std::string description);
  ExactSolution& add_note(std::string note);

 private:
  Family family_;
  ModelParams params_;
  Domain domain_;
  std::shared_ptr<const Evaluator> eval_;
  SystemKind system_;
  std::optional<SolutionSpec> spec_;
  bool approximate_{false};
  bool unverified_{false};
  std::string seed_;
  std::vector<std::string> chain_;
  std::vector<std::string> notes_;
};

/// Builds the solution for a catalogue spec; throws ConstraintError naming the violated constraint.
ExactSolution instantiate(const SolutionSpec& spec);

inline FieldSample evaluate(const ExactSolution& sol, double t, double x) { return sol.evaluate(t, x); }

struct PositivityViolation {
  double t{0.0};
  double x{0.0};
  char component{'u'};
  double value{0.0};
};

struct PositivityResult {
  bool ok{true};
  std::optional<PositivityViolation> first_violation;
};

/// Scans the grid row by row (t outer, x inner); ok iff u >= 0 and v >= 0 at every node.
PositivityResult positivity_scan(const ExactSolution& sol, const GridSpec& grid);

/// One catalogue row for listing.
struct CatalogueEntry {
  std::string tag;
  std::string name;
  std::string constraints;
  std::string formula;
  std::string domain;
};

const std::vector<CatalogueEntry>& catalogue();

/// The parameter point used for each family by the acceptance gate and the CLI defaults.
SolutionSpec representative_spec(Family f);

/// A 41 x 41 window inside the domain of representative_spec(f).
GridSpec representative_window(Family f);

}  // namespace dht
