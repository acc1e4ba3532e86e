// Command-line front end for the library: catalogue, evaluation, verification, oracles,
// simulation, superposition and figure data.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dhtlab/errors.hpp"
#include "dhtlab/fdsolver.hpp"
#include "dhtlab/reductions.hpp"
#include "dhtlab/riccati.hpp"
#include "dhtlab/solutions.hpp"
#include "dhtlab/superpose.hpp"
#include "dhtlab/transforms.hpp"
#include "dhtlab/verify.hpp"

namespace dht::cli {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

template <class E>
E parse_enum(const std::string& field, const std::string& text, std::initializer_list<E> values,
             std::string (*name)(E)) {
  std::string known;
  for (E v : values) {
    if (lower(name(v)) == lower(text)) return v;
    known += (known.empty() ? "" : ", ") + name(v);
  }
  throw InvalidParameter(field, "unknown value '" + text + "' (expected one of " + known + ")");
}

std::string gaussian_form_name(GaussianForm f) { return f == GaussianForm::General ? "general" : "shifted"; }

std::vector<double> parse_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidParameter(field, "'" + text + "' is not a comma-separated list of numbers");
    }
  }
  return out;
}

std::filesystem::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DHTLAB_OUT_DIR"); env && *env) return env;
  return ".";
}

/// Relative paths are placed under DHTLAB_OUT_DIR when it is set.
std::filesystem::path output_path(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* env = std::getenv("DHTLAB_OUT_DIR"); env && *env) p = std::filesystem::path(env) / p;
  }
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("out", "cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw InvalidParameter("out", "write to '" + path.string() + "' failed");
}

/// Writes to --out if given, otherwise to stdout.
void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(output_path(out), text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json grid_json(const GridSpec& g) { return g.to_string(); }

// ---------------------------------------------------------------------------
// Solution selection shared by eval, grid, verify, simulate and symmetry-check.

const char* const kModelFlags[] = {"A", "R", "S", "d"};
const char* const kNumericFlags[] = {"A", "R", "S", "d", "C", "C0", "C1", "C2", "C3", "alpha", "beta", "t0", "x0", "exponent"};

class SolutionFlags {
 public:
  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family_, "F1..F8, steady or superposition")->required();
    for (const char* name : kNumericFlags) {
      opts_[name] = cmd->add_option(std::string("--") + name, num_[name]);
    }
    opts_["branch"] = cmd->add_option("--branch", branch_, "profile or exponential branch");
    opts_["form"] = cmd->add_option("--form", form_, "F6: general|shifted; F8: special|shifted|simplified|three-parameter");
    opts_["sign"] = cmd->add_option("--sign", sign_, "F7 sign of f (+1 or -1)");
    opts_["as-printed"] = cmd->add_flag("--as-printed", as_printed_, "use the printed formula (F2, F7)");
    opts_["positive-lobes"] = cmd->add_flag("--positive-lobes", positive_lobes_, "F3 sine branch: restrict to u > 0");
    opts_["shift"] = cmd->add_option("--shift", shifts_, "superposition copy shift 't,x' (repeatable)");
    cmd->add_option("--transform", transforms_, "transform applied in order, e.g. Galilei(0.5) (repeatable)");
  }

  ExactSolution build() const {
    ExactSolution sol = family_is_superposition() ? build_superposition() : build_family();
    TransformChain chain;
    for (const std::string& t : transforms_) chain.push_back(parse_transform(t));
    return chain.empty() ? sol : dht::apply(chain, sol);
  }

  /// Compact window for infinitesimal checks, where O(eps^2) terms dominate the residual.
  GridSpec symmetry_window() const {
    if (!family_is_superposition() && parse_family(family_) == Family::F1_PowerLaw) return {0.2, 1.0, 21, 0.5, 2.0, 21};
    return {0.2, 1.0, 21, -1.0, 1.0, 21};
  }

  /// Representative window of the selected family; superpositions use the wide figure window.
  GridSpec default_window() const {
    if (family_is_superposition()) return {3.0 / 41, 3.0, 41, -45.0, 45.0, 41};
    return representative_window(parse_family(family_));
  }

 private:
  bool given(const std::string& name) const { return opts_.at(name)->count() > 0; }
  double get(const std::string& name, double fallback) const { return given(name) ? num_.at(name) : fallback; }
  bool family_is_superposition() const { return lower(family_) == "superposition"; }

  void only(const std::set<std::string>& allowed, const std::string& tag) const {
    for (const auto& [name, opt] : opts_) {
      const bool model = std::find(std::begin(kModelFlags), std::end(kModelFlags), name) != std::end(kModelFlags);
      if (opt->count() > 0 && !model && allowed.count(name) == 0) {
        throw InvalidParameter(name, "--" + name + " does not apply to " + tag);
      }
    }
  }

  ExactSolution build_superposition() const {
    only({"S", "C", "shift"}, "superposition");
    for (const char* m : {"A", "R", "d"}) {
      if (given(m)) throw InvalidParameter(m, "superpositions fix A = 0, R = S, d = 1");
    }
    SuperpositionSpec spec = SuperpositionSpec::figure_configuration();
    spec.S = get("S", spec.S);
    spec.C = get("C", spec.C);
    if (!shifts_.empty()) {
      spec.shifts.clear();
      for (const std::string& s : shifts_) {
        const std::vector<double> v = parse_list("shift", s);
        if (v.size() != 2) throw InvalidParameter("shift", "expected 't,x', got '" + s + "'");
        spec.shifts.push_back({v[0], v[1]});
      }
    }
    return dht::build(spec);
  }

  ExactSolution build_family() const {
    const Family f = parse_family(family_);
    SolutionSpec spec = representative_spec(f);
    const std::string tag = family_tag(f);
    ModelParams& p = spec.params;
    p.A = get("A", p.A);
    p.R = get("R", p.R);
    p.S = get("S", p.S);
    p.d = get("d", p.d);

    if (auto* fp = std::get_if<PowerLawParams>(&spec.family)) {
      only({"exponent"}, tag);
      fp->exponent = get("exponent", fp->exponent);
    } else if (auto* fp = std::get_if<TravellingParams>(&spec.family)) {
      only({"alpha", "beta", "branch", "C0", "C1", "C2", "as-printed"}, tag);
      fp->alpha = get("alpha", fp->alpha);
      fp->beta = get("beta", fp->beta);
      fp->C0 = get("C0", fp->C0);
      fp->C1 = get("C1", fp->C1);
      fp->C2 = get("C2", fp->C2);
      if (given("branch")) fp->branch = profile_branch();
      fp->as_printed = as_printed_;
    } else if (auto* fp = std::get_if<StationaryLiftParams>(&spec.family)) {
      only({"beta", "branch", "C0", "C1", "C2", "positive-lobes"}, tag);
      fp->beta = get("beta", fp->beta);
      fp->C0 = get("C0", fp->C0);
      fp->C1 = get("C1", fp->C1);
      fp->C2 = get("C2", fp->C2);
      if (given("branch")) fp->branch = profile_branch();
      fp->positive_lobes_only = positive_lobes_;
    } else if (auto* fp = std::get_if<ExpSeparableParams>(&spec.family)) {
      only({"beta", "C", "branch"}, tag);
      fp->beta = get("beta", fp->beta);
      fp->C = get("C", fp->C);
      if (given("branch")) {
        fp->branch = parse_enum("branch", branch_,
                                {ExpBranch::Auto, ExpBranch::Primary, ExpBranch::EqualRS, ExpBranch::GammaZero},
                                static_cast<std::string (*)(ExpBranch)>(&to_string));
      }
    } else if (auto* fp = std::get_if<AiryParams>(&spec.family)) {
      only({"alpha", "C1", "C2"}, tag);
      fp->alpha = get("alpha", fp->alpha);
      fp->C1 = get("C1", fp->C1);
      fp->C2 = get("C2", fp->C2);
    } else if (auto* fp = std::get_if<GaussianSourceParams>(&spec.family)) {
      only({"form", "C", "t0"}, tag);
      if (given("form")) {
        fp->form = parse_enum("form", form_, {GaussianForm::General, GaussianForm::Shifted}, &gaussian_form_name);
      }
      fp->C = get("C", fp->C);
      fp->t0 = get("t0", fp->t0);
    } else if (auto* fp = std::get_if<CaseIParams>(&spec.family)) {
      only({"C", "sign", "as-printed"}, tag);
      fp->C = get("C", fp->C);
      if (given("sign")) {
        if (sign_ != 1 && sign_ != -1) throw InvalidParameter("sign", "must be +1 or -1");
        fp->sign = sign_;
      }
      fp->as_printed = as_printed_;
    } else if (auto* fp = std::get_if<CaseIIParams>(&spec.family)) {
      only({"form", "C", "C2", "C3", "t0", "x0"}, tag);
      if (given("form")) {
        fp->form = parse_enum("form", form_,
                              {CaseIIForm::ThreeParameter, CaseIIForm::Special, CaseIIForm::Shifted,
                               CaseIIForm::Simplified},
                              static_cast<std::string (*)(CaseIIForm)>(&to_string));
      }
      fp->C = get("C", fp->C);
      fp->C2 = get("C2", fp->C2);
      fp->C3 = get("C3", fp->C3);
      fp->t0 = get("t0", fp->t0);
      fp->x0 = get("x0", fp->x0);
    } else {
      only({}, tag);
    }
    return instantiate(spec);
  }

  ProfileBranch profile_branch() const {
    return parse_enum("branch", branch_, {ProfileBranch::TwoExponential, ProfileBranch::Sine, ProfileBranch::Linear},
                      static_cast<std::string (*)(ProfileBranch)>(&to_string));
  }

  std::string family_;
  std::map<std::string, double> num_;
  std::map<std::string, CLI::Option*> opts_;
  std::string branch_, form_;
  int sign_{1};
  bool as_printed_{false};
  bool positive_lobes_{false};
  std::vector<std::string> shifts_;
  std::vector<std::string> transforms_;
};

GridSpec grid_or(const std::string& text, const GridSpec& fallback) {
  return text.empty() ? fallback : GridSpec::parse(text);
}

json solution_json(const ExactSolution& sol) {
  json j;
  j["family"] = family_tag(sol.family());
  j["provenance"] = sol.provenance();
  j["params"] = {{"A", sol.params().A}, {"R", sol.params().R}, {"S", sol.params().S}, {"d", sol.params().d}};
  j["system"] = to_string(sol.system());
  j["domain"] = sol.domain().description;
  j["approximate"] = sol.approximate();
  j["unverified_as_printed"] = sol.unverified_as_printed();
  j["notes"] = sol.notes();
  return j;
}

// ---------------------------------------------------------------------------
// list

int cmd_list(const std::string& family, bool as_json) {
  std::vector<CatalogueEntry> rows;
  for (const CatalogueEntry& e : catalogue()) {
    if (family.empty() || lower(e.tag) == lower(family) || lower(e.name) == lower(family)) rows.push_back(e);
  }
  if (rows.empty()) throw InvalidParameter("family", "unknown family '" + family + "'");
  const std::vector<std::string> transforms = {"TimeShift(t0)", "SpaceShift(x0)", "Scale(C)", "Galilei(eps)",
                                               "GaugeExp(forward|inverse)"};
  if (as_json) {
    json j;
    j["version"] = version();
    for (const CatalogueEntry& e : rows) {
      j["families"].push_back({{"tag", e.tag},
                               {"name", e.name},
                               {"constraints", e.constraints},
                               {"formula", e.formula},
                               {"domain", e.domain}});
    }
    if (family.empty()) j["transforms"] = transforms;
    std::cout << dump(j);
    return kExitOk;
  }
  for (const CatalogueEntry& e : rows) {
    std::cout << e.tag << "  " << e.name << "\n    constraints: " << e.constraints << "\n    formula: " << e.formula
              << "\n    domain: " << e.domain << "\n";
  }
  if (family.empty()) {
    std::cout << "transforms:";
    for (const std::string& t : transforms) std::cout << " " << t;
    std::cout << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval and grid

int cmd_eval(const SolutionFlags& flags, double t, double x, bool as_json) {
  const ExactSolution sol = flags.build();
  const FieldSample s = sol.evaluate(t, x);
  if (as_json) {
    json j = solution_json(sol);
    j["version"] = version();
    j["t"] = t;
    j["x"] = x;
    j["u"] = s.u;
    j["v"] = s.v;
    std::cout << dump(j);
  } else {
    char buf[160];
    std::snprintf(buf, sizeof buf, "t,x,u,v\n%.17g,%.17g,%.17g,%.17g\n", t, x, s.u, s.v);
    std::cout << buf;
  }
  return kExitOk;
}

int cmd_grid(const SolutionFlags& flags, const std::string& grid_text, const std::string& out) {
  const ExactSolution sol = flags.build();
  const GridSpec g = grid_or(grid_text, flags.default_window());
  emit(sample(sol, g).to_csv(), out);
  if (sol.approximate()) {
    // Approximate fields always travel with their residual.
    const ResidualReport rep = superposition_residual(sol, g);
    json j = rep.to_json();
    std::cerr << "approximate solution: residual linf " << rep.linf() << "\n";
    if (!out.empty()) write_file(output_path(out + ".residual.json"), dump(j));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const SolutionFlags& flags, const std::string& grid_text, double tol, double perturb, double h,
               bool richardson, const std::string& out) {
  ExactSolution sol = flags.build();
  if (perturb != 0.0) sol = perturb_u(sol, perturb);
  const GridSpec g = grid_or(grid_text, flags.default_window());
  ResidualOptions opt;
  opt.richardson = richardson;
  const ResidualReport rep = residual_report(sol, g, h, opt);
  json j = rep.to_json();
  j["tolerance"] = tol;
  j["pass"] = rep.linf() <= tol;
  j["solution"] = solution_json(sol);
  emit(dump(j), out);
  if (!out.empty()) std::cout << (rep.linf() <= tol ? "PASS" : "FAIL") << " linf=" << rep.linf() << "\n";
  return rep.linf() <= tol ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// reduce

struct ReduceFlags {
  std::string oracle{"chi"};
  std::string branch{"Primary"};
  std::map<std::string, double> num;
  std::map<std::string, CLI::Option*> opts;
  int sign{1};
  std::string span;
  double tol{1e-6};

  double get(const std::string& name, double fallback) const {
    return opts.at(name)->count() > 0 ? num.at(name) : fallback;
  }
};

int cmd_reduce(const ReduceFlags& rf, const std::string& out) {
  const std::string which = lower(rf.oracle);
  std::vector<double> span = rf.span.empty() ? std::vector<double>{} : parse_list("span", rf.span);
  if (!span.empty() && span.size() != 2) throw InvalidParameter("span", "expected 't0,t1'");
  auto span_or = [&](double a, double b) { return span.empty() ? std::make_pair(a, b) : std::make_pair(span[0], span[1]); };
  auto model = [&](ModelParams p) {
    p.A = rf.get("A", p.A);
    p.R = rf.get("R", p.R);
    p.S = rf.get("S", p.S);
    p.d = rf.get("d", p.d);
    return p;
  };

  OracleReport rep;
  ModelParams used;
  if (which == "chi") {
    const ChiBranchTag tag =
        parse_enum("branch", rf.branch,
                   {ChiBranchTag::Primary, ChiBranchTag::EqualRS, ChiBranchTag::GammaZero, ChiBranchTag::Case4General,
                    ChiBranchTag::Case4EqualRS},
                   static_cast<std::string (*)(ChiBranchTag)>(&to_string));
    used = model(is_case4(tag) ? ModelParams{0, 1.5, 3, 1} : ModelParams{0, 2, 0.5, 1.5});
    const auto [a, b] = span_or(is_case4(tag) ? 0.2 : 0.0, 3.0);
    rep = chi_oracle({tag, rf.get("C", 0.5), rf.get("beta", 0.3)}, used, a, b);
  } else if (which == "f") {
    used = model({0, 1.5, 1.5, 0.5});
    const auto [a, b] = span_or(0.0, 2.0);
    rep = f_oracle(used, rf.sign, a, b);
  } else if (which == "csi") {
    used = model({0, 1.5, 1.5, 0.5});
    const auto [a, b] = span_or(0.0, 1.5);
    rep = caseI_oracle(used, rf.get("C", 0.5), a, b);
  } else if (which == "csii") {
    used = model({0, 2, 2, 1});
    const auto [a, b] = span_or(0.0, 2.0);
    rep = caseII_oracle(used.S, rf.get("C", -0.3), rf.get("C2", 0.2), rf.get("C3", 0.1), a, b);
  } else if (which == "pipeline") {
    used = model({0, 1.5, 1.5, 0.5});
    const auto [a, b] = span_or(0.0, 1.0);
    rep = caseI_pipeline_oracle(used, rf.get("C", 0.5), a, b);
  } else {
    throw InvalidParameter("oracle", "unknown oracle '" + rf.oracle + "' (chi, f, csi, csii, pipeline)");
  }
  json j;
  j["version"] = version();
  j["oracle"] = rep.name;
  j["params"] = {{"A", used.A}, {"R", used.R}, {"S", used.S}, {"d", used.d}};
  j["span"] = {rep.t0, rep.t1};
  j["samples"] = rep.samples;
  j["norm"] = rep.norm;
  j["max_rel_error"] = rep.max_rel_error;
  j["tolerance"] = rf.tol;
  j["pass"] = rep.max_rel_error <= rf.tol;
  emit(dump(j), out);
  return rep.max_rel_error <= rf.tol ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const SolutionFlags& flags, const std::string& grid_text, const std::string& bc_text,
                 const SolverConfig& cfg, int levels, double tol, const std::string& csv_out,
                 const std::string& out) {
  const ExactSolution sol = flags.build();
  GridSpec g = grid_or(grid_text, flags.default_window());
  const std::string bc_kind = lower(bc_text);
  EdgeConditions bc;
  if (bc_kind == "neumann") {
    bc = EdgeConditions::both(BoundaryCondition::neumann_zero());
  } else if (bc_kind == "dirichlet") {
    bc = EdgeConditions::both(BoundaryCondition::dirichlet_from(sol));
  } else {
    throw InvalidParameter("bc", "expected 'neumann' or 'dirichlet'");
  }
  json j;
  j["version"] = version();
  j["solution"] = solution_json(sol);
  j["grid"] = grid_json(g);
  j["bc"] = bc.left.describe();
  j["cfl"] = cfg.cfl;
  j["u_floor"] = cfg.u_floor;
  bool pass = true;
  if (levels >= 2) {
    const ConvergenceStudy st = convergence_study(sol.params(), sol, bc, g, levels, cfg);
    j["nx"] = st.nx;
    j["errors"] = st.errors;
    j["orders"] = st.orders;
    j["floor_reached"] = st.floor_reached;
    j["seconds"] = st.seconds;
    for (double o : st.orders) pass = pass && std::abs(o - 2.0) <= 0.3;
  } else {
    const FieldGrid num = simulate(sol.params(), sol, bc, g, cfg);
    const Comparison c = compare(num, sol);
    j["dt"] = num.dt;
    for (const LevelError& e : c.levels) {
      j["levels"].push_back(
          {{"t", e.t}, {"linf_u", e.linf_u}, {"linf_v", e.linf_v}, {"l2_u", e.l2_u}, {"l2_v", e.l2_v}});
    }
    j["final_linf"] = c.final_level().linf();
    if (tol > 0) pass = c.final_level().linf() <= tol;
    if (!csv_out.empty()) write_file(output_path(csv_out), num.to_csv());
  }
  j["pass"] = pass;
  emit(dump(j), out);
  return pass ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// superpose

int cmd_superpose(double S, double C, const std::vector<std::string>& shifts, const std::string& grid_text,
                  const std::string& spacings, double tol, const std::string& csv_out, const std::string& out) {
  SuperpositionSpec spec = SuperpositionSpec::figure_configuration();
  spec.S = S;
  spec.C = C;
  if (!shifts.empty()) {
    spec.shifts.clear();
    for (const std::string& s : shifts) {
      const std::vector<double> v = parse_list("shift", s);
      if (v.size() != 2) throw InvalidParameter("shift", "expected 't,x', got '" + s + "'");
      spec.shifts.push_back({v[0], v[1]});
    }
  }
  const ExactSolution sol = build(spec);
  const GridSpec g = grid_or(grid_text, {3.0 / 41, 3.0, 41, -45.0, 45.0, 41});
  const ResidualReport rep = superposition_residual(sol, g);
  json j;
  j["version"] = version();
  j["solution"] = solution_json(sol);
  j["positivity_regime"] = spec.in_positivity_regime();
  j["residual"] = rep.to_json();
  bool pass = tol <= 0 || rep.linf() <= tol;
  if (!spacings.empty()) {
    const SpacingResidualCurve curve = spacing_residual_curve(S, C, parse_list("spacings", spacings), g);
    for (const auto& [s, r] : curve.points) j["spacing_curve"].push_back({{"spacing", s}, {"residual_linf", r}});
    j["monotone_decreasing"] = curve.monotone_decreasing(1e-9);
  }
  j["pass"] = pass;
  if (!csv_out.empty()) write_file(output_path(csv_out), sample(sol, g).to_csv());
  emit(dump(j), out);
  return pass ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// symmetry-check

int cmd_symmetry(const SolutionFlags& flags, const std::string& op, const std::string& grid_text,
                 const std::string& eps_text, bool no_enforce, const std::string& range, const std::string& out) {
  const ExactSolution sol = flags.build();
  const GridSpec g = grid_or(grid_text, flags.symmetry_window());
  const std::vector<double> eps = parse_list("eps", eps_text);
  const std::vector<double> bounds = parse_list("slope-range", range);
  if (bounds.size() != 2) throw InvalidParameter("slope-range", "expected 'lo,hi'");
  const GeneratorSpec gen = table1_generator(op, sol.params(), !no_enforce);
  const SymmetryCheckResult r = infinitesimal_symmetry_check(sol, gen, sol.params(), eps, g);
  const bool pass = r.floor_reached || (r.slope >= bounds[0] && r.slope <= bounds[1]);
  json j;
  j["version"] = version();
  j["solution"] = solution_json(sol);
  j["operator"] = r.tag;
  j["grid"] = grid_json(g);
  j["epsilons"] = r.epsilons;
  j["residuals"] = r.residuals;
  j["floor"] = r.floor;
  j["slope"] = std::isnan(r.slope) ? json(nullptr) : json(r.slope);
  j["fitted"] = r.fitted;
  j["floor_reached"] = r.floor_reached;
  j["note"] = r.note;
  j["slope_range"] = bounds;
  j["pass"] = pass;
  emit(dump(j), out);
  return pass ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// figure

struct FigureSetup {
  std::string caption;
  ExactSolution sol;
  GridSpec grid;
  std::vector<std::string> checks;
};

FigureSetup figure_setup(int n) {
  const GridSpec narrow{0.05, 3.0, 60, -10.0, 10.0, 201};
  const GridSpec wide{0.05, 3.0, 60, -45.0, 45.0, 901};
  auto f6 = [](double R) {
    GaussianSourceParams gp;
    gp.form = GaussianForm::Shifted;
    gp.t0 = 0.1;
    return instantiate({gp, {0.0, R, 3.0, 1.0}});
  };
  auto f8 = [](double S, double C) {
    CaseIIParams cp;
    cp.form = CaseIIForm::Special;
    cp.C = C;
    return instantiate({cp, {0.0, S, S, 1.0}});
  };
  switch (n) {
    case 1: return {"F6 with d=1, S=3, R=1.5, t0=0.1", f6(1.5), narrow, {"finite", "nonnegative"}};
    case 2: return {"F6 with d=1, S=3, R=0.5, t0=0.1", f6(0.5), narrow, {"finite"}};
    case 3: return {"F8 special with S=2, C=-0.25", f8(2.0, -0.25), narrow, {"finite", "nonnegative"}};
    case 4: return {"F8 special with S=1.4, C=-0.125", f8(1.4, -0.125), narrow, {"finite", "nonnegative"}};
    case 5:
    case 6:
      return {"superposition of F8 copies, S=2, C=-0.35, (t,x) shifts (-1,-30), (0,0), (1,30)",
              build(SuperpositionSpec::figure_configuration()), wide, {"finite", "nonnegative", "three_peaks"}};
    default: break;
  }
  throw InvalidParameter("n", "figures are numbered 1 to 6");
}

std::string component_csv(const FieldGrid& f, bool u) {
  std::string out = u ? "t,x,u\n" : "t,x,v\n";
  char buf[96];
  for (int i = 0; i < f.grid.nt; ++i) {
    for (int j = 0; j < f.grid.nx; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.grid.t(i), f.grid.x(j), u ? f.u_at(i, j) : f.v_at(i, j));
      out += buf;
    }
  }
  return out;
}

int cmd_figure(int n, const std::string& out_dir, const std::string& grid_text) {
  FigureSetup fig = figure_setup(n);
  const GridSpec g = grid_or(grid_text, fig.grid);
  const FieldGrid f = sample(fig.sol, g);
  const std::filesystem::path dir = output_dir(out_dir);
  const std::string stem = "fig" + std::to_string(n);
  write_file(dir / (stem + "_u.csv"), component_csv(f, true));
  write_file(dir / (stem + "_v.csv"), component_csv(f, false));

  const bool finite = std::all_of(f.u.begin(), f.u.end(), [](double v) { return std::isfinite(v); }) &&
                      std::all_of(f.v.begin(), f.v.end(), [](double v) { return std::isfinite(v); });
  const double min_u = *std::min_element(f.u.begin(), f.u.end());
  const double min_v = *std::min_element(f.v.begin(), f.v.end());
  int peaks_lo = g.nx, peaks_hi = 0;
  for (int i = 0; i < g.nt; ++i) {
    const int p = count_peaks(fig.sol, g.t(i), g);
    peaks_lo = std::min(peaks_lo, p);
    peaks_hi = std::max(peaks_hi, p);
  }
  json j;
  j["version"] = version();
  j["figure"] = n;
  j["caption"] = fig.caption;
  j["solution"] = solution_json(fig.sol);
  j["grid"] = grid_json(g);
  j["files"] = {stem + "_u.csv", stem + "_v.csv"};
  j["min_u"] = min_u;
  j["min_v"] = min_v;
  j["u_peaks_per_row"] = {peaks_lo, peaks_hi};
  bool pass = true;
  for (const std::string& c : fig.checks) {
    bool ok = true;
    if (c == "finite") ok = finite;
    if (c == "nonnegative") ok = min_u >= 0.0 && min_v >= 0.0;
    if (c == "three_peaks") ok = peaks_lo == 3 && peaks_hi == 3;
    j["checks"][c] = ok;
    pass = pass && ok;
  }
  if (fig.sol.approximate()) j["residual"] = superposition_residual(fig.sol, {3.0 / 41, 3.0, 41, -45.0, 45.0, 41}).to_json();
  write_file(dir / (stem + ".json"), dump(j));
  std::cout << (pass ? "PASS" : "FAIL") << " figure " << n << ": " << (dir / (stem + "_u.csv")).string() << ", "
            << (dir / (stem + "_v.csv")).string() << "\n";
  return pass ? kExitOk : kExitFail;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Diffusive Holling-Tanner laboratory"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string out;
  std::string grid_text;

  // list
  CLI::App* list = app.add_subcommand("list", "Catalogue of exact families and transforms");
  std::string list_family;
  bool list_json = false;
  list->add_option("--family", list_family, "show one family");
  list->add_flag("--json", list_json, "machine-readable output");

  // eval
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a solution at one point");
  SolutionFlags eval_flags;
  eval_flags.attach(eval);
  double eval_t = 0.0, eval_x = 0.0;
  bool eval_json = false;
  eval->add_option("--t", eval_t)->required();
  eval->add_option("--x", eval_x)->required();
  eval->add_flag("--json", eval_json);

  // grid
  CLI::App* grid = app.add_subcommand("grid", "Sample a solution to CSV (t,x,u,v)");
  SolutionFlags grid_flags;
  grid_flags.attach(grid);
  grid->add_option("--grid", grid_text, "t0,t1,nt,x0,x1,nx");
  grid->add_option("--out", out, "CSV path (stdout if omitted)");

  // verify
  CLI::App* verify = app.add_subcommand("verify", "Residual gate; exit 0 pass, 1 fail, 2 invalid configuration");
  SolutionFlags verify_flags;
  verify_flags.attach(verify);
  double tol = 1e-6, perturb = 0.0, h = kDefaultFdStep;
  bool richardson = false;
  verify->add_option("--grid", grid_text, "t0,t1,nt,x0,x1,nx");
  verify->add_option("--tol", tol, "residual tolerance")->capture_default_str();
  verify->add_option("--perturb", perturb, "multiply u by (1 + factor) first (negative control)");
  verify->add_option("--fd-step", h, "finite-difference step")->capture_default_str();
  verify->add_flag("--richardson", richardson, "Richardson-extrapolated differences");
  verify->add_option("--out", out, "JSON report path (stdout if omitted)");

  // reduce
  CLI::App* reduce = app.add_subcommand("reduce", "Compare an integrated reduction with its closed form");
  ReduceFlags rf;
  reduce->add_option("--oracle", rf.oracle, "chi, f, csi, csii or pipeline")->capture_default_str();
  reduce->add_option("--branch", rf.branch, "chi branch")->capture_default_str();
  for (const char* name : {"A", "R", "S", "d", "C", "C2", "C3", "beta"}) {
    rf.opts[name] = reduce->add_option(std::string("--") + name, rf.num[name]);
  }
  reduce->add_option("--sign", rf.sign, "sign of f")->capture_default_str();
  reduce->add_option("--span", rf.span, "t0,t1");
  reduce->add_option("--tol", rf.tol)->capture_default_str();
  reduce->add_option("--out", out);

  // simulate
  CLI::App* sim = app.add_subcommand("simulate", "Finite-difference run compared with the exact solution");
  SolutionFlags sim_flags;
  sim_flags.attach(sim);
  std::string bc_text = "dirichlet", csv_out;
  SolverConfig cfg;
  int levels = 1;
  double sim_tol = 0.0;
  sim->add_option("--grid", grid_text, "t0,t1,nt,x0,x1,nx");
  sim->add_option("--bc", bc_text, "dirichlet or neumann")->capture_default_str();
  sim->add_option("--cfl", cfg.cfl)->capture_default_str();
  sim->add_option("--u-floor", cfg.u_floor)->capture_default_str();
  sim->add_option("--levels", levels, "run a convergence study over this many refinements");
  sim->add_option("--tol", sim_tol, "fail if the final-time linf error exceeds this");
  sim->add_option("--csv", csv_out, "write the numeric field to CSV");
  sim->add_option("--out", out);

  // superpose
  CLI::App* sup = app.add_subcommand("superpose", "Approximate multi-peak solution and its residual");
  double sup_S = 2.0, sup_C = -0.35, sup_tol = 0.0;
  std::vector<std::string> sup_shifts;
  std::string spacings;
  sup->add_option("--S", sup_S)->capture_default_str();
  sup->add_option("--C", sup_C)->capture_default_str();
  sup->add_option("--shift", sup_shifts, "'t,x' (repeatable); default (-1,-30) (0,0) (1,30)");
  sup->add_option("--grid", grid_text, "t0,t1,nt,x0,x1,nx");
  sup->add_option("--spacings", spacings, "two-peak spacing curve, e.g. 5,10,20,30");
  sup->add_option("--tol", sup_tol, "fail if the residual exceeds this");
  sup->add_option("--csv", csv_out, "write the superposition to CSV");
  sup->add_option("--out", out);

  // symmetry-check
  CLI::App* sym = app.add_subcommand("symmetry-check", "Infinitesimal slope of a Lie symmetry operator (P_t, P_x, I, G, D, Pi, Y, Q)");
  SolutionFlags sym_flags;
  sym_flags.attach(sym);
  std::string op, eps_text = "0.001,0.003,0.01,0.03,0.1", range = "1.8,2.2";
  bool no_enforce = false;
  sym->add_option("--operator", op, "P_t, P_x, I, D, G, Q, Y or Pi")->required();
  sym->add_option("--grid", grid_text, "t0,t1,nt,x0,x1,nx");
  sym->add_option("--eps", eps_text)->capture_default_str();
  sym->add_option("--slope-range", range, "accepted slope interval lo,hi")->capture_default_str();
  sym->add_flag("--no-enforce", no_enforce, "skip the operator's parameter restrictions (negative controls)");
  sym->add_option("--out", out);

  // figure
  CLI::App* figure = app.add_subcommand("figure", "Write figN_u.csv, figN_v.csv and figN.json");
  int fig_n = 0;
  std::string out_dir;
  figure->add_option("n", fig_n, "figure number 1..6")->required()->check(CLI::Range(1, 6));
  figure->add_option("--out-dir", out_dir, "directory (default $DHTLAB_OUT_DIR or .)");
  figure->add_option("--grid", grid_text, "override the default window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*list) return cmd_list(list_family, list_json);
    if (*eval) return cmd_eval(eval_flags, eval_t, eval_x, eval_json);
    if (*grid) return cmd_grid(grid_flags, grid_text, out);
    if (*verify) return cmd_verify(verify_flags, grid_text, tol, perturb, h, richardson, out);
    if (*reduce) return cmd_reduce(rf, out);
    if (*sim) return cmd_simulate(sim_flags, grid_text, bc_text, cfg, levels, sim_tol, csv_out, out);
    if (*sup) return cmd_superpose(sup_S, sup_C, sup_shifts, grid_text, spacings, sup_tol, csv_out, out);
    if (*sym) return cmd_symmetry(sym_flags, op, grid_text, eps_text, no_enforce, range, out);
    if (*figure) return cmd_figure(fig_n, out_dir, grid_text);
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConstraintError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace dht::cli

int main(int argc, char** argv) { return dht::cli::run(argc, argv); }
