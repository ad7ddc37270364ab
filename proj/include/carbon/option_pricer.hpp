#pragma once

#include "carbon/pde_engine.hpp"

namespace carbon {

// European call on the allowance certificate.
struct OptionSpec {
  double maturity = 0.5;
  double strike = 50.0;

  void validate(double horizon) const;
};

// Prices the call by marching v back from the maturity with the stencil of
// the allowance equation, reading the transport coefficient from the stored
// allowance levels. `allowance` must retain every time level in [0, maturity].
SurfaceHistory solve_call(const OptionSpec& spec, const SurfaceHistory& allowance,
                          const SchemeParams& scheme, const JacobiParams& dyn,
                          const StackParams& stack, const Grid& grid,
                          const SolveOptions& options = {});

// e^{-r (T - t)} (pi - e^{r (T - tau)} K)^+
double call_top_boundary(const OptionSpec& spec, const SchemeParams& scheme, double t);

}  // namespace carbon
