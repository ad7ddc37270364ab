#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "carbon/pde_engine.hpp"

namespace carbon {

struct PathConfig {
  int n_paths = 100000;
  int n_steps = 365;
  std::uint64_t seed = 20111213;
  double d0 = 21000.0;
  int threads = 1;
  // Demand cells of the emissions-rate table used along paths.
  int table_demand_cells = 3000;
  int table_price_levels = 512;

  void validate(double xi_max) const;
};

struct McResult {
  double mean_emissions = 0.0;
  double std_error = 0.0;
  double penalty = 0.0;
};

// State of one path after step k (k = 0 is the initial state).
struct PathState {
  int step = 0;
  double time = 0.0;
  double demand = 0.0;
  double emissions = 0.0;
  double allowance = 0.0;
};

// Euler scheme for (D, E) with the allowance price read off the solved
// surfaces. Demand reflects at 0 and xi_max; emissions clamp at e_max.
// Path n draws from its own generator seeded from (seed, n), so results do
// not depend on how paths are spread across threads.
class PathSimulator {
 public:
  PathSimulator(const PathConfig& cfg, const JacobiParams& dyn, const StackParams& stack,
                const SchemeParams& scheme, const SurfaceHistory& allowance);

  // Terminal cumulative emissions of path n.
  double run(std::uint64_t n) const;
  // Same path, reporting every state to `observe`.
  double run(std::uint64_t n, const std::function<void(const PathState&)>& observe) const;

  const PathConfig& config() const { return cfg_; }

 private:
  template <class Observer>
  double run_impl(std::uint64_t n, Observer&& observe) const;

  PathConfig cfg_;
  JacobiParams dyn_;
  const SurfaceHistory* allowance_;
  EmissionsTable table_;
  double e_max_;
  double dt_;
  std::vector<const ValueSurface*> levels_;  // allowance level for each step
};

// Sample mean of terminal emissions and its standard error
// sqrt(sum (x - mean)^2 / (n (n - 1))).
McResult summarize(std::span<const double> terminal, double penalty);

McResult simulate(const PathConfig& cfg, const JacobiParams& dyn, const StackParams& stack,
                  const SchemeParams& scheme, const SurfaceHistory& allowance);

// One allowance solve and one simulation per penalty, on the mesh `grid`.
std::vector<McResult> penalty_sweep(std::span<const double> penalties, const PathConfig& cfg,
                                    const JacobiParams& dyn, const StackParams& stack,
                                    const SchemeParams& scheme, const Grid& grid,
                                    const SolveOptions& options = {});

}  // namespace carbon
