#include "carbon/pde_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"

namespace carbon {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

void check_band(std::span<const double> values, double lo, double hi, double tolerance, double t) {
  const double slack = tolerance * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  for (double v : values) {
    if (!std::isfinite(v) || v < lo - slack || v > hi + slack) {
      throw InstabilityError("explicit step left the admissible band [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "] at t = " + std::to_string(t) +
                             " (value " + std::to_string(v) + "); reduce the time step");
    }
  }
}

}  // namespace

DStencil parse_d_stencil(const std::string& name) {
  if (name == "central") return DStencil::Central;
  if (name == "hybrid") return DStencil::Hybrid;
  throw ConfigError("unknown D stencil '" + name + "' (expected central or hybrid)");
}

const char* to_string(DStencil s) { return s == DStencil::Central ? "central" : "hybrid"; }

void check_compatible(const Grid& grid, const JacobiParams& dyn, const StackParams& stack) {
  stack.validate();
  require_valid(dyn);
  if (!close(grid.xi_max, stack.xi_max) || !close(dyn.xi_max, stack.xi_max))
    throw GridMismatchError("grid, demand and stack must share xi_max");
}

double cfl_max_dt(const Grid& grid, const JacobiParams& dyn, const StackParams& stack, double rate,
                  double safety) {
  double max_s2 = 0.0;
  double max_drift = 0.0;
  for (int i = 0; i <= grid.n_d; ++i) {
    const double d = grid.d(i);
    max_s2 = std::max(max_s2, diffusion_squared(dyn, d));
    max_drift = std::max(max_drift, std::abs(drift(dyn, d)));
  }
  // mu_e is largest at full demand with zero carbon price.
  const double max_rate = bau_emissions_rate(stack, stack.xi_max);
  const double dd = grid.delta_d();
  const double denom = max_s2 / (dd * dd) + max_drift / dd + max_rate / grid.delta_e() + rate;
  if (denom <= 0.0) return grid.horizon;
  return std::min(grid.horizon, safety / denom);
}

BackwardStepper::BackwardStepper(const Grid& grid, const JacobiParams& dyn,
                                 const EmissionsTable& table, double rate, DStencil stencil)
    : grid_(grid), table_(&table), rate_(rate) {
  if (table.demand_cells() != grid.n_d)
    throw GridMismatchError("emissions table and grid use different demand meshes");
  const double dd = grid.delta_d();
  lower_.resize(grid.rows());
  upper_.resize(grid.rows());
  centre_.resize(grid.rows());
  for (int i = 0; i <= grid.n_d; ++i) {
    const double m = drift(dyn, grid.d(i));
    if (i == 0) {
      lower_[i] = 0.0;
      upper_[i] = m / dd;
      centre_[i] = -m / dd;
    } else if (i == grid.n_d) {
      lower_[i] = -m / dd;
      upper_[i] = 0.0;
      centre_[i] = m / dd;
    } else {
      const double half_s2 = 0.5 * diffusion_squared(dyn, grid.d(i)) / (dd * dd);
      if (stencil == DStencil::Central || 2.0 * half_s2 * dd >= std::abs(m)) {
        lower_[i] = half_s2 - m / (2.0 * dd);
        upper_[i] = half_s2 + m / (2.0 * dd);
      } else {
        lower_[i] = half_s2 + std::max(-m, 0.0) / dd;
        upper_[i] = half_s2 + std::max(m, 0.0) / dd;
      }
      centre_[i] = -lower_[i] - upper_[i];
    }
  }
}

void BackwardStepper::step(std::span<const double> in, std::span<const double> coefficient,
                           std::span<double> out) const {
  const int cols = grid_.cols();
  const int n_e = grid_.n_e;
  const double dt = grid_.delta_t();
  const double inv_de = 1.0 / grid_.delta_e();
  for (int i = 0; i <= grid_.n_d; ++i) {
    const double* row = in.data() + grid_.index(i, 0);
    const double* below = i > 0 ? row - cols : row;
    const double* above = i < grid_.n_d ? row + cols : row;
    const double* coef = coefficient.data() + grid_.index(i, 0);
    double* dst = out.data() + grid_.index(i, 0);
    const double lo = lower_[i];
    const double up = upper_[i];
    const double ce = centre_[i] - rate_;
    for (int j = 0; j < n_e; ++j) {
      const double transport = table_->at_node(i, coef[j]) * inv_de * (row[j + 1] - row[j]);
      dst[j] = row[j] + dt * (lo * below[j] + up * above[j] + ce * row[j] + transport);
    }
    dst[n_e] = row[n_e] + dt * (lo * below[n_e] + up * above[n_e] + ce * row[n_e]);
  }
}

ValueSurface step_backward(const ValueSurface& surface, const JacobiParams& dyn,
                           const EmissionsTable& table, double rate, double band_tolerance,
                           DStencil stencil) {
  const BackwardStepper stepper(surface.grid, dyn, table, rate, stencil);
  ValueSurface out(surface.grid, surface.time - surface.grid.delta_t());
  stepper.step(surface.values, surface.values, out.values);
  const auto [lo, hi] = std::minmax_element(surface.values.begin(), surface.values.end());
  check_band(out.values, std::min(*lo, 0.0), std::max(*hi, 0.0), band_tolerance, out.time);
  return out;
}

SurfaceHistory solve_backward(const BackwardProblem& problem, const JacobiParams& dyn,
                              const SolveOptions& options) {
  const Grid& g = problem.grid;
  if (options.stride < 1) throw ConfigError("solve: stride must be >= 1");
  if (!problem.table || !problem.terminal || !problem.top)
    throw ConfigError("solve: incomplete backward problem");
  const BackwardStepper stepper(g, dyn, *problem.table, problem.rate, options.d_stencil);

  SurfaceHistory history(g, options.stride);
  ValueSurface current(g, g.horizon);
  for (int i = 0; i <= g.n_d; ++i)
    for (int j = 0; j <= g.n_e; ++j) current(i, j) = problem.terminal(i, j);
  history.append(current);

  ValueSurface next(g, 0.0);
  for (int k = g.n_t; k > 0; --k) {
    next.time = g.t(k - 1);
    stepper.step(current.values, current.values, next.values);
    const double top = problem.top(next.time);
    for (int i = 0; i <= g.n_d; ++i) next(i, g.n_e) = top;
    check_band(next.values, problem.band_lo, problem.band_hi, options.band_tolerance, next.time);
    std::swap(current, next);
    if ((k - 1) % options.stride == 0 || k - 1 == 0) history.append(current);
  }
  history.finish();
  return history;
}

SurfaceHistory solve_single_period(const SchemeParams& scheme, const JacobiParams& dyn,
                                   const StackParams& stack, const Grid& grid,
                                   const SolveOptions& options) {
  scheme.validate();
  check_compatible(grid, dyn, stack);
  if (!close(grid.e_max, scheme.e_max) || !close(grid.horizon, scheme.horizon))
    throw GridMismatchError("grid must span [0, horizon] x [0, e_max] of the scheme");
  if (!grid.on_e_node(scheme.e_cap)) throw ConfigError("e_cap must lie on an E node");
  const EmissionsTable table(stack, grid.n_d, scheme.penalty, options.price_levels);
  BackwardProblem p;
  p.grid = grid;
  p.table = &table;
  p.rate = scheme.rate;
  p.terminal = [&](int, int j) { return single_period_terminal(scheme, grid.e(j)); };
  p.top = [&](double t) { return scheme.discounted_penalty(t); };
  p.band_lo = 0.0;
  p.band_hi = scheme.penalty;
  return solve_backward(p, dyn, options);
}

ValueSurface first_period_terminal(const TwoPeriodScheme& scheme, const Grid& grid,
                                   const ValueSurface& alpha2_at_T1) {
  const Grid& s = alpha2_at_T1.grid;
  if (s.n_d != grid.n_d || s.n_e != grid.n_e || !close(s.e_max, grid.e_max))
    throw GridMismatchError("E1 slicing must match the period E grid");
  // Explicit-scheme overshoot can leave the stored slice marginally outside
  // [0, e^{-r(T2-T1)} pi2]; phi1 is only defined on that band.
  const double bound = scheme.second_period_value_bound();
  ValueSurface out(grid, grid.horizon);
  for (int i = 0; i <= grid.n_d; ++i)
    for (int j = 0; j <= grid.n_e; ++j)
      out(i, j) = phi1(scheme, grid.e(j), std::clamp(alpha2_at_T1(i, j), 0.0, bound));
  return out;
}

TwoPeriodSolution solve_two_period(const TwoPeriodScheme& scheme, const JacobiParams& dyn,
                                   const StackParams& stack, const Grid& grid,
                                   const SolveOptions& options, bool keep_period2) {
  scheme.validate();
  check_compatible(grid, dyn, stack);
  const SchemeParams& p1 = scheme.period1;
  const SchemeParams& p2 = scheme.period2;
  if (!close(grid.e_max, p1.e_max) || !close(grid.horizon, p1.horizon))
    throw GridMismatchError("grid must span the first compliance period");
  if (!grid.on_e_node(p1.e_cap) || !grid.on_e_node(p2.e_cap))
    throw ConfigError("both caps must lie on E nodes");
  const double steps2 = p2.horizon / grid.delta_t();
  const int n_t2 = static_cast<int>(std::lround(steps2));
  if (n_t2 < 1 || std::abs(steps2 - n_t2) > 1e-9 * steps2)
    throw GridMismatchError("second period length must be a multiple of the time step");
  const Grid grid2 = Grid::make(grid.n_d, grid.n_e, n_t2, grid.xi_max, grid.e_max, p2.horizon);

  const EmissionsTable table2(stack, grid.n_d, p2.penalty, options.price_levels);
  SolveOptions slice_options = options;
  slice_options.stride = keep_period2 ? options.stride : n_t2;

  TwoPeriodSolution out;
  out.alpha2.resize(grid.cols());
  parallel_for(grid.cols(), options.threads, [&](int j1) {
    const double e1 = grid.e(j1);
    BackwardProblem p;
    p.grid = grid2;
    p.table = &table2;
    p.rate = p2.rate;
    p.terminal = [&](int, int j) { return phi2(scheme, grid2.e(j), e1); };
    p.top = [&](double t) { return p2.discounted_penalty(t); };
    p.band_lo = 0.0;
    p.band_hi = p2.penalty;
    out.alpha2[j1] = solve_backward(p, dyn, slice_options);
  });

  out.alpha2_at_T1 = ValueSurface(grid, grid.horizon);
  for (int j1 = 0; j1 <= grid.n_e; ++j1) {
    const ValueSurface& start = out.alpha2[j1].front();
    for (int i = 0; i <= grid.n_d; ++i) out.alpha2_at_T1(i, j1) = start(i, 0);
  }
  if (!keep_period2) out.alpha2.clear();

  const ValueSurface terminal = first_period_terminal(scheme, grid, out.alpha2_at_T1);
  const double top_value = p1.penalty + scheme.extra_penalty;
  const EmissionsTable table1(stack, grid.n_d, top_value, options.price_levels);
  BackwardProblem p;
  p.grid = grid;
  p.table = &table1;
  p.rate = p1.rate;
  p.terminal = [&](int i, int j) { return terminal(i, j); };
  p.top = [&](double t) { return std::exp(-p1.rate * (p1.horizon - t)) * top_value; };
  p.band_lo = 0.0;
  p.band_hi = top_value;
  out.alpha1 = solve_backward(p, dyn, options);
  return out;
}

}  // namespace carbon
