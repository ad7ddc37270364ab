#include "carbon/convergence.hpp"

#include <cmath>

namespace carbon {

std::vector<RefinementLevel> reference_levels(int first, int last) {
  if (first < 1 || last < first) throw DomainError("refinement levels must satisfy 1 <= first <= last");
  std::vector<RefinementLevel> out;
  for (int l = first; l <= last; ++l) {
    const int doubling = 1 << (l - 1);
    out.push_back({l, 6 * doubling, 100 * doubling, 110 * doubling * doubling});
  }
  return out;
}

ErrorNorms error_norms(const ValueSurface& coarse, const ValueSurface& fine) {
  const Grid& c = coarse.grid;
  const Grid& f = fine.grid;
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
  if (!same(c.xi_max, f.xi_max) || !same(c.e_max, f.e_max) || f.n_d % c.n_d != 0 ||
      f.n_e % c.n_e != 0)
    throw GridMismatchError("error_norms: fine mesh is not nested in the coarse mesh");
  const int rd = f.n_d / c.n_d;
  const int re = f.n_e / c.n_e;
  const double cell = c.delta_d() * c.delta_e();
  double max_diff = 0.0;
  double max_ref = 0.0;
  double sum_diff = 0.0;
  double sum_ref = 0.0;
  for (int i = 0; i <= c.n_d; ++i) {
    for (int j = 0; j <= c.n_e; ++j) {
      const double a = coarse(i, j);
      const double diff = std::abs(a - fine(rd * i, re * j));
      max_diff = std::max(max_diff, diff);
      max_ref = std::max(max_ref, std::abs(a));
      sum_diff += diff * cell;
      sum_ref += std::abs(a) * cell;
    }
  }
  auto ratio = [](double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) throw DomainError("error_norms: coarse surface has zero norm");
    return num / den;
  };
  return {ratio(max_diff, max_ref), ratio(sum_diff, sum_ref)};
}

double fit_rate(std::span<const double> widths, std::span<const double> errors) {
  if (widths.size() != errors.size() || widths.size() < 2)
    throw DomainError("rate fit needs at least two error points");
  double mx = 0.0;
  double my = 0.0;
  const double n = static_cast<double>(widths.size());
  for (std::size_t k = 0; k < widths.size(); ++k) {
    if (!(widths[k] > 0.0) || !(errors[k] > 0.0))
      throw DomainError("rate fit needs positive widths and errors");
    mx += std::log(widths[k]);
    my += std::log(errors[k]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < widths.size(); ++k) {
    const double x = std::log(widths[k]) - mx;
    sxx += x * x;
    sxy += x * (std::log(errors[k]) - my);
  }
  if (sxx <= 0.0) throw DomainError("rate fit is degenerate: all mesh widths coincide");
  return sxy / sxx;
}

ErrorReport refinement_study(std::span<const RefinementLevel> levels, double xi_max, double e_max,
                             double horizon, const LevelSolver& solve_at) {
  if (levels.size() < 2) throw DomainError("refinement study needs at least two levels");
  ErrorReport report;
  report.levels.assign(levels.begin(), levels.end());
  ValueSurface previous;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const RefinementLevel& lv = levels[l];
    const Grid g = Grid::make(lv.n_d, lv.n_e, lv.n_t, xi_max, e_max, horizon);
    ValueSurface current = solve_at(g);
    if (l > 0) {
      const ErrorNorms e = error_norms(previous, current);
      report.mesh_width.push_back(previous.grid.delta_e());
      report.err_inf.push_back(e.err_inf);
      report.err_one.push_back(e.err_one);
    }
    previous = std::move(current);
  }
  report.rate_inf = fit_rate(report.mesh_width, report.err_inf);
  return report;
}

ErrorReport allowance_refinement_study(std::span<const RefinementLevel> levels,
                                       const SchemeParams& scheme, const JacobiParams& dyn,
                                       const StackParams& stack, const SolveOptions& options) {
  return refinement_study(levels, stack.xi_max, scheme.e_max, scheme.horizon, [&](const Grid& g) {
    SolveOptions o = options;
    o.stride = g.n_t;
    return solve_single_period(scheme, dyn, stack, g, o).front();
  });
}

}  // namespace carbon
