#pragma once

#include <functional>
#include <span>
#include <vector>

#include "carbon/pde_engine.hpp"

namespace carbon {

// Mesh counts of one refinement level.
struct RefinementLevel {
  int label = 1;
  int n_d = 6;
  int n_e = 100;
  int n_t = 110;
};

// Levels first..last of the reference sequence 6/100/110, doubling the space
// counts and quadrupling the time steps per level.
std::vector<RefinementLevel> reference_levels(int first, int last);

struct ErrorNorms {
  double err_inf = 0.0;
  double err_one = 0.0;
};

// Relative sup- and 1-norm distance between a coarse t = 0 surface and a
// fine one restricted to the coarse nodes. The 1-norm weighs each node by
// dD dE of the coarse mesh.
ErrorNorms error_norms(const ValueSurface& coarse, const ValueSurface& fine);

// Least-squares slope of log(error) against log(width).
double fit_rate(std::span<const double> widths, std::span<const double> errors);

struct ErrorReport {
  std::vector<RefinementLevel> levels;
  std::vector<double> mesh_width;  // dE of the coarse level of each pair
  std::vector<double> err_inf;
  std::vector<double> err_one;
  double rate_inf = 0.0;
};

using LevelSolver = std::function<ValueSurface(const Grid&)>;

// Solves every level, compares consecutive pairs and fits the sup-norm rate
// against dE.
ErrorReport refinement_study(std::span<const RefinementLevel> levels, double xi_max, double e_max,
                             double horizon, const LevelSolver& solve_at);

// Single-period allowance at t = 0 for each level.
ErrorReport allowance_refinement_study(std::span<const RefinementLevel> levels,
                                       const SchemeParams& scheme, const JacobiParams& dyn,
                                       const StackParams& stack, const SolveOptions& options = {});

}  // namespace carbon
