#include "carbon/option_pricer.hpp"

#include <algorithm>
#include <cmath>

namespace carbon {

void OptionSpec::validate(double horizon) const {
  if (!(maturity >= 0.0 && maturity <= horizon))
    throw ConfigError("option: maturity must lie in [0, horizon]");
  if (!(strike >= 0.0) || !std::isfinite(strike)) throw ConfigError("option: strike must be >= 0");
}

double call_top_boundary(const OptionSpec& spec, const SchemeParams& scheme, double t) {
  const double forward_strike = std::exp(scheme.rate * (scheme.horizon - spec.maturity)) * spec.strike;
  return std::exp(-scheme.rate * (scheme.horizon - t)) * std::max(scheme.penalty - forward_strike, 0.0);
}

SurfaceHistory solve_call(const OptionSpec& spec, const SurfaceHistory& allowance,
                          const SchemeParams& scheme, const JacobiParams& dyn,
                          const StackParams& stack, const Grid& grid,
                          const SolveOptions& options) {
  scheme.validate();
  spec.validate(scheme.horizon);
  check_compatible(grid, dyn, stack);
  if (!(allowance.grid() == grid)) throw GridMismatchError("allowance solved on a different grid");
  if (options.stride < 1) throw ConfigError("solve: stride must be >= 1");
  const int k_tau = grid.time_index(spec.maturity);
  if (allowance.stride() != 1 && k_tau > 0)
    throw MissingAllowanceError("option solve needs every allowance level on [0, maturity]");

  const EmissionsTable table(stack, grid.n_d, scheme.penalty, options.price_levels);
  const BackwardStepper stepper(grid, dyn, table, scheme.rate, options.d_stencil);

  SurfaceHistory history(grid, options.stride);
  const ValueSurface& at_tau = allowance.exactly_at(grid.t(k_tau));
  ValueSurface current(grid, grid.t(k_tau));
  for (std::size_t n = 0; n < current.values.size(); ++n)
    current.values[n] = std::max(at_tau.values[n] - spec.strike, 0.0);
  history.append(current);

  const double band_hi = std::max(scheme.penalty - spec.strike, 0.0);
  const double slack = options.band_tolerance * std::max(1.0, band_hi);
  ValueSurface next(grid, 0.0);
  for (int k = k_tau; k > 0; --k) {
    const ValueSurface& coefficient = allowance.exactly_at(grid.t(k));
    next.time = grid.t(k - 1);
    stepper.step(current.values, coefficient.values, next.values);
    const double top = call_top_boundary(spec, scheme, next.time);
    for (int i = 0; i <= grid.n_d; ++i) next(i, grid.n_e) = top;
    for (double v : next.values)
      if (!std::isfinite(v) || v < -slack || v > band_hi + slack)
        throw InstabilityError("call solve left the payoff band; reduce the time step");
    std::swap(current, next);
    if ((k - 1) % options.stride == 0 || k - 1 == 0) history.append(current);
  }
  history.finish();
  return history;
}

}  // namespace carbon
