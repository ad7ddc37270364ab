#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "carbon/emissions_table.hpp"
#include "carbon/grid.hpp"
#include "carbon/market_dynamics.hpp"
#include "carbon/market_scheme.hpp"
#include "carbon/stack_model.hpp"

namespace carbon {

// D-derivative stencil on interior rows. Central differences lose the
// positive-weight (monotone) property where drift dominates diffusion,
// |mu_d| dD > sigma_d^2; Hybrid switches those rows to upwind differences.
enum class DStencil { Central, Hybrid };

DStencil parse_d_stencil(const std::string& name);
const char* to_string(DStencil s);

struct SolveOptions {
  // Keep every stride-th time level (1 keeps all; n_t keeps only t = 0 and T).
  int stride = 1;
  // Allowance price levels of the emissions-rate lookup table.
  int price_levels = 512;
  // Worker threads for independent sub-solves (second-period slices).
  int threads = 1;
  // Admissible overshoot of the payoff band, relative to the largest payoff,
  // before a step is reported as unstable.
  double band_tolerance = 5e-2;
  DStencil d_stencil = DStencil::Hybrid;
};

// Conservative explicit-scheme step bound
//   safety / (max sigma_d^2 / dD^2 + max |mu_d| / dD + max mu_e / dE + r).
// Returns the grid horizon when every coefficient vanishes.
double cfl_max_dt(const Grid& grid, const JacobiParams& dyn, const StackParams& stack, double rate,
                  double safety = 1.0);

// Explicit backward step of
//   a_t + 1/2 s^2 a_DD + m a_D + mu_e(c, D) a_E - r a = 0
// where the transport coefficient is read from `coefficient` (the surface
// itself for the allowance, the allowance price for a derivative).
//
// Central (or hybrid, see DStencil) differences in D on interior rows,
// first-order one-sided differences into the domain on D = 0 and
// D = xi_max, and the upwind
// difference (a_{j+1} - a_j) / dE in E. The last E column has no E transport;
// solvers overwrite it with Dirichlet data.
class BackwardStepper {
 public:
  BackwardStepper(const Grid& grid, const JacobiParams& dyn, const EmissionsTable& table,
                  double rate, DStencil stencil = DStencil::Hybrid);

  void step(std::span<const double> in, std::span<const double> coefficient,
            std::span<double> out) const;

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  const EmissionsTable* table_;
  double rate_;
  std::vector<double> lower_;  // weight of row i-1 per unit dt
  std::vector<double> upper_;  // weight of row i+1
  std::vector<double> centre_;  // D contribution to row i
};

// One step of the allowance equation; the result is stamped time - dt.
// Throws InstabilityError when the output leaves the input's value band.
ValueSurface step_backward(const ValueSurface& surface, const JacobiParams& dyn,
                           const EmissionsTable& table, double rate,
                           double band_tolerance = 5e-2,
                           DStencil stencil = DStencil::Hybrid);

// Generic backward march used by every solver in this module.
struct BackwardProblem {
  Grid grid;
  const EmissionsTable* table = nullptr;
  double rate = 0.0;
  // Value at node (i, j) at the final time.
  std::function<double(int i, int j)> terminal;
  // Dirichlet value on E = e_max at time t.
  std::function<double(double t)> top;
  // Admissible value band used for instability detection.
  double band_lo = 0.0;
  double band_hi = 0.0;
};

// Marches from t = grid.horizon to 0. The transport coefficient is the
// surface being solved (semilinear, lagged explicitly).
SurfaceHistory solve_backward(const BackwardProblem& problem, const JacobiParams& dyn,
                              const SolveOptions& options);

// Allowance price for one compliance period.
SurfaceHistory solve_single_period(const SchemeParams& scheme, const JacobiParams& dyn,
                                   const StackParams& stack, const Grid& grid,
                                   const SolveOptions& options = {});

struct TwoPeriodSolution {
  SurfaceHistory alpha1;
  // alpha2(T1, D_i, 0; E1_j), laid out on the period grid with E1 along E.
  ValueSurface alpha2_at_T1;
  // Full second-period solutions per E1 node (retained per options.stride).
  std::vector<SurfaceHistory> alpha2;
};

// First-period terminal data phi1(E_j) built from the stored alpha2 slice.
ValueSurface first_period_terminal(const TwoPeriodScheme& scheme, const Grid& grid,
                                   const ValueSurface& alpha2_at_T1);

// Both vintages for two periods. `grid` describes the first period; the
// second period reuses its D/E mesh and time step.
TwoPeriodSolution solve_two_period(const TwoPeriodScheme& scheme, const JacobiParams& dyn,
                                   const StackParams& stack, const Grid& grid,
                                   const SolveOptions& options = {}, bool keep_period2 = false);

// Grid-independent consistency checks shared by the solvers.
void check_compatible(const Grid& grid, const JacobiParams& dyn, const StackParams& stack);

}  // namespace carbon
