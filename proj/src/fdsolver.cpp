#include "dhtlab/fdsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dhtlab/errors.hpp"

namespace dht {

namespace {

std::string node_message(const char* what, double t, double x, double value) {
  std::ostringstream os;
  os.precision(10);
  os << what << " at t = " << t << ", x = " << x << " (u = " << value << ")";
  return os.str();
}

/// Integrates the method-of-lines system; the state holds u at [0, nx) and v at [nx, 2nx).
class MolSystem {
 public:
  MolSystem(const ModelParams& p, const EdgeConditions& bc, const GridSpec& g, const SolverConfig& cfg)
      : p_(p), bc_(bc), g_(g), cfg_(cfg), n_(g.nx), dx_(g.dx()) {}

  void impose(double t, std::vector<double>& y) const {
    if (bc_.left.kind == BoundaryKind::DirichletFromExact) set_node(t, 0, bc_.left, y);
    if (bc_.right.kind == BoundaryKind::DirichletFromExact) set_node(t, n_ - 1, bc_.right, y);
  }

  void rhs(double t, std::vector<double>& y, std::vector<double>& dy) const {
    impose(t, y);
    const double inv = 1.0 / (dx_ * dx_);
    const double tiny = std::numeric_limits<double>::min();
    const double* u = y.data();
    const double* v = y.data() + n_;
    double* du = dy.data();
    double* dv = dy.data() + n_;
    for (int j = 0; j < n_; ++j) {
      const bool left = j == 0, right = j == n_ - 1;
      if ((left && bc_.left.kind == BoundaryKind::DirichletFromExact) ||
          (right && bc_.right.kind == BoundaryKind::DirichletFromExact)) {
        du[j] = 0.0;
        dv[j] = 0.0;
        continue;
      }
      if (!(u[j] >= cfg_.u_floor)) {
        throw SolverFailure(node_message("u fell below the floor", t, g_.x(j), u[j]), t, g_.x(j));
      }
      // Ghost nodes for the zero-flux edges mirror the first interior node.
      const int jl = left ? 1 : j - 1;
      const int jr = right ? n_ - 2 : j + 1;
      double fu = 0.0, fv = 0.0;
      if (!cfg_.zero_reaction) {
        const Reaction r = reaction_rhs(p_, u[j], v[j], tiny);
        fu = r.f;
        fv = r.g;
      }
      du[j] = (u[jl] - 2.0 * u[j] + u[jr]) * inv + fu;
      dv[j] = p_.d * (v[jl] - 2.0 * v[j] + v[jr]) * inv + fv;
    }
  }

 private:
  void set_node(double t, int j, const BoundaryCondition& bc, std::vector<double>& y) const {
    const FieldSample s = bc.exact->evaluate(t, g_.x(j));
    y[static_cast<std::size_t>(j)] = s.u;
    y[static_cast<std::size_t>(j + n_)] = s.v;
  }

  ModelParams p_;
  EdgeConditions bc_;
  GridSpec g_;
  SolverConfig cfg_;
  int n_;
  double dx_;
};

void check_boundary(const BoundaryCondition& bc, const GridSpec& g, double x) {
  if (bc.kind != BoundaryKind::DirichletFromExact) return;
  if (!bc.exact) throw InvalidParameter("bc", "DirichletFromExact needs a solution");
  for (int i = 0; i < g.nt; ++i) {
    if (!bc.exact->in_domain(g.t(i), x)) {
      throw DomainError("Dirichlet data undefined at t = " + std::to_string(g.t(i)) + ", x = " + std::to_string(x));
    }
  }
}

}  // namespace

std::vector<double> FieldGrid::row_u(int i) const {
  return {u.begin() + static_cast<std::ptrdiff_t>(index(i, 0)), u.begin() + static_cast<std::ptrdiff_t>(index(i, 0) + grid.nx)};
}

std::vector<double> FieldGrid::row_v(int i) const {
  return {v.begin() + static_cast<std::ptrdiff_t>(index(i, 0)), v.begin() + static_cast<std::ptrdiff_t>(index(i, 0) + grid.nx)};
}

std::string FieldGrid::to_csv() const {
  std::string out = "t,x,u,v\n";
  out.reserve(out.size() + grid.size() * 80);
  char buf[128];
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nx; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", grid.t(i), grid.x(j), u_at(i, j), v_at(i, j));
      out += buf;
    }
  }
  return out;
}

void FieldGrid::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << to_csv();
  if (!f) throw Error("write to '" + path + "' failed");
}

FieldGrid sample(const ExactSolution& sol, const GridSpec& grid) {
  grid.validate();
  FieldGrid out;
  out.grid = grid;
  out.u.resize(grid.size());
  out.v.resize(grid.size());
  out.provenance = sol.provenance();
  out.approximate = sol.approximate();
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nx; ++j) {
      const FieldSample s = sol.evaluate(grid.t(i), grid.x(j));
      out.u_at(i, j) = s.u;
      out.v_at(i, j) = s.v;
    }
  }
  return out;
}

BoundaryCondition BoundaryCondition::neumann_zero() { return {}; }

BoundaryCondition BoundaryCondition::dirichlet_from(const ExactSolution& sol) {
  return {BoundaryKind::DirichletFromExact, std::make_shared<const ExactSolution>(sol)};
}

std::string BoundaryCondition::describe() const {
  if (kind == BoundaryKind::NeumannZero) return "NeumannZero";
  return "DirichletFromExact(" + (exact ? exact->provenance() : std::string("?")) + ")";
}

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl < 1.0)) throw InvalidParameter("cfl", "must lie in (0, 1)");
  if (!(u_floor > 0.0)) throw InvalidParameter("u_floor", "must be positive");
  if (max_steps == 0) throw InvalidParameter("max_steps", "must be positive");
}

FieldGrid simulate(const ModelParams& params, const ExactSolution& init, const EdgeConditions& bc,
                   const GridSpec& grid, const SolverConfig& cfg) {
  grid.validate();
  std::vector<double> u0(static_cast<std::size_t>(grid.nx)), v0(u0.size());
  for (int j = 0; j < grid.nx; ++j) {
    const FieldSample s = init.evaluate(grid.t0, grid.x(j));
    u0[static_cast<std::size_t>(j)] = s.u;
    v0[static_cast<std::size_t>(j)] = s.v;
  }
  FieldGrid out = simulate(params, u0, v0, bc, grid, cfg);
  out.provenance = "simulate(" + init.provenance() + ")";
  out.approximate = init.approximate();
  return out;
}

FieldGrid simulate(const ModelParams& params, const std::vector<double>& u0, const std::vector<double>& v0,
                   const EdgeConditions& bc, const GridSpec& grid, const SolverConfig& cfg) {
  params.validate();
  grid.validate();
  cfg.validate();
  if (grid.nx < 3) throw InvalidParameter("grid", "the solver needs nx >= 3");
  const auto n = static_cast<std::size_t>(grid.nx);
  if (u0.size() != n || v0.size() != n) throw InvalidParameter("init", "initial rows must have nx entries");
  check_boundary(bc.left, grid, grid.x0);
  check_boundary(bc.right, grid, grid.x1);

  const double dx = grid.dx();
  const double dt_max = cfg.cfl * dx * dx / std::max(1.0, params.d);
  const double dt_out = grid.dt();
  const auto substeps = static_cast<std::size_t>(std::ceil(dt_out / dt_max * (1.0 - 1e-12)));
  const double dt = dt_out / static_cast<double>(substeps);
  if (substeps * static_cast<std::size_t>(grid.nt - 1) > cfg.max_steps) {
    throw InvalidParameter("max_steps", "the grid needs " +
                                            std::to_string(substeps * static_cast<std::size_t>(grid.nt - 1)) +
                                            " steps");
  }

  FieldGrid out;
  out.grid = grid;
  out.scheme = "MOL central-2 / RK4";
  out.dt = dt;
  out.bc_left = bc.left.describe();
  out.bc_right = bc.right.describe();
  out.u.assign(grid.size(), 0.0);
  out.v.assign(grid.size(), 0.0);

  const MolSystem sys(params, bc, grid, cfg);
  std::vector<double> y(2 * n), k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n), tmp(2 * n);
  std::copy(u0.begin(), u0.end(), y.begin());
  std::copy(v0.begin(), v0.end(), y.begin() + static_cast<std::ptrdiff_t>(n));
  sys.impose(grid.t0, y);

  auto store = [&](int i) {
    std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), out.u.begin() + static_cast<std::ptrdiff_t>(out.index(i, 0)));
    std::copy(y.begin() + static_cast<std::ptrdiff_t>(n), y.end(), out.v.begin() + static_cast<std::ptrdiff_t>(out.index(i, 0)));
  };
  store(0);

  for (int i = 1; i < grid.nt; ++i) {
    const double level_start = grid.t(i - 1);
    for (std::size_t s = 0; s < substeps; ++s) {
      const double t = level_start + static_cast<double>(s) * dt;
      sys.rhs(t, y, k1);
      for (std::size_t q = 0; q < y.size(); ++q) tmp[q] = y[q] + 0.5 * dt * k1[q];
      sys.rhs(t + 0.5 * dt, tmp, k2);
      for (std::size_t q = 0; q < y.size(); ++q) tmp[q] = y[q] + 0.5 * dt * k2[q];
      sys.rhs(t + 0.5 * dt, tmp, k3);
      for (std::size_t q = 0; q < y.size(); ++q) tmp[q] = y[q] + dt * k3[q];
      sys.rhs(t + dt, tmp, k4);
      for (std::size_t q = 0; q < y.size(); ++q) y[q] += dt / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
      sys.impose(s + 1 == substeps ? grid.t(i) : t + dt, y);
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(y[j]) || !std::isfinite(y[j + n])) {
          throw SolverFailure(node_message("non-finite value", t + dt, grid.x(static_cast<int>(j)), y[j]), t + dt,
                              grid.x(static_cast<int>(j)));
        }
      }
    }
    store(i);
  }
  return out;
}

double Comparison::max_linf() const {
  double m = 0.0;
  for (const LevelError& e : levels) m = std::max(m, e.linf());
  return m;
}

Comparison compare(const FieldGrid& numeric, const ExactSolution& exact) {
  const GridSpec& g = numeric.grid;
  if (numeric.u.size() != g.size() || numeric.v.size() != g.size()) {
    throw InvalidParameter("numeric", "field arrays do not match the grid");
  }
  Comparison c;
  for (int i = 0; i < g.nt; ++i) {
    LevelError e;
    e.t = g.t(i);
    for (int j = 0; j < g.nx; ++j) {
      if (!exact.in_domain(e.t, g.x(j))) {
        throw DomainError("exact solution undefined at t = " + std::to_string(e.t) + ", x = " + std::to_string(g.x(j)));
      }
      const FieldSample s = exact.evaluate(e.t, g.x(j));
      const double du = std::abs(numeric.u_at(i, j) - s.u);
      const double dv = std::abs(numeric.v_at(i, j) - s.v);
      e.linf_u = std::max(e.linf_u, du);
      e.linf_v = std::max(e.linf_v, dv);
      e.l2_u += du * du;
      e.l2_v += dv * dv;
    }
    e.l2_u = std::sqrt(e.l2_u / g.nx);
    e.l2_v = std::sqrt(e.l2_v / g.nx);
    c.levels.push_back(e);
  }
  return c;
}

double ConvergenceStudy::observed_order() const {
  if (floor_reached || orders.empty()) return std::numeric_limits<double>::quiet_NaN();
  return orders.back();
}

std::string ConvergenceStudy::summary() const {
  std::ostringstream os;
  os.precision(4);
  for (std::size_t k = 0; k < nx.size(); ++k) {
    os << "nx=" << nx[k] << " err=" << errors[k];
    if (k > 0 && k - 1 < orders.size()) os << " order=" << orders[k - 1];
    os << (k + 1 < nx.size() ? "; " : "");
  }
  if (floor_reached) os << " (floor reached)";
  return os.str();
}

ConvergenceStudy convergence_study(const ModelParams& params, const ExactSolution& sol, const EdgeConditions& bc,
                                   const GridSpec& base, int levels, const SolverConfig& cfg, double floor_tol) {
  if (levels < 2) throw InvalidParameter("levels", "a convergence study needs at least 2 levels");
  base.validate();
  const auto start = std::chrono::steady_clock::now();
  ConvergenceStudy st;
  double scale = 0.0;
  GridSpec g = base;
  g.nt = 2;
  for (int k = 0; k < levels; ++k) {
    GridSpec gk = g;
    gk.nx = (base.nx - 1) * (1 << k) + 1;
    const FieldGrid num = simulate(params, sol, bc, gk, cfg);
    const Comparison c = compare(num, sol);
    st.nx.push_back(gk.nx);
    st.dx.push_back(gk.dx());
    st.errors.push_back(c.final_level().linf());
    if (k == 0) {
      for (int j = 0; j < gk.nx; ++j) {
        const FieldSample s = sol.evaluate(gk.t1, gk.x(j));
        scale = std::max({scale, std::abs(s.u), std::abs(s.v)});
      }
    }
  }
  st.floor_reached = std::all_of(st.errors.begin(), st.errors.end(),
                                 [&](double e) { return e <= floor_tol * std::max(1.0, scale); });
  if (!st.floor_reached) {
    for (std::size_t k = 1; k < st.errors.size(); ++k) st.orders.push_back(std::log2(st.errors[k - 1] / st.errors[k]));
  }
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return st;
}

double trapezoid(const std::vector<double>& values, double dx) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * dx;
}

}  // namespace dht
