#include "carbon/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parallel.hpp"

namespace carbon {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double reflect(double d, double xi_max) {
  // A single Euler step can overshoot by more than the interval width only
  // for absurd step sizes; keep folding until inside.
  for (int n = 0; n < 64 && (d < 0.0 || d > xi_max); ++n) {
    if (d < 0.0) d = -d;
    if (d > xi_max) d = 2.0 * xi_max - d;
  }
  return std::clamp(d, 0.0, xi_max);
}

}  // namespace

void PathConfig::validate(double xi_max) const {
  if (n_paths < 1) throw ConfigError("mc: n_paths must be >= 1");
  if (n_steps < 1) throw ConfigError("mc: n_steps must be >= 1");
  if (!(d0 >= 0.0 && d0 <= xi_max)) throw ConfigError("mc: d0 must lie in [0, xi_max]");
  if (threads < 1) throw ConfigError("mc: threads must be >= 1");
  if (table_demand_cells < 1 || table_price_levels < 1)
    throw ConfigError("mc: table resolution must be positive");
}

PathSimulator::PathSimulator(const PathConfig& cfg, const JacobiParams& dyn,
                             const StackParams& stack, const SchemeParams& scheme,
                             const SurfaceHistory& allowance)
    : cfg_(cfg), dyn_(dyn), allowance_(&allowance) {
  scheme.validate();
  stack.validate();
  cfg_.validate(stack.xi_max);
  if (allowance.empty()) throw MissingAllowanceError("simulation needs solved allowance surfaces");
  const Grid& g = allowance.grid();
  if (std::abs(g.horizon - scheme.horizon) > 1e-12 * scheme.horizon)
    throw MissingAllowanceError("allowance surfaces do not cover [0, T]");
  if (allowance.front().time > 1e-12 * scheme.horizon)
    throw MissingAllowanceError("allowance surfaces do not reach t = 0");
  table_ = EmissionsTable(stack, cfg_.table_demand_cells, scheme.penalty, cfg_.table_price_levels);
  e_max_ = g.e_max;
  dt_ = scheme.horizon / cfg_.n_steps;
  levels_.reserve(cfg_.n_steps);
  for (int k = 0; k < cfg_.n_steps; ++k) levels_.push_back(&allowance.at_or_below(k * dt_));
}

template <class Observer>
double PathSimulator::run_impl(std::uint64_t n, Observer&& observe) const {
  std::mt19937_64 engine(splitmix64(cfg_.seed ^ splitmix64(n)));
  std::normal_distribution<double> normal;
  const double sqrt_dt = std::sqrt(dt_);
  const double xi_max = dyn_.xi_max;
  double d = cfg_.d0;
  double e = 0.0;
  for (int k = 0; k < cfg_.n_steps; ++k) {
    const double a = interpolate(*levels_[k], d, e);
    observe(PathState{k, k * dt_, d, e, a});
    const double mu_d = -dyn_.eta * (d - dyn_.d_bar);
    const double sigma_d = std::sqrt(2.0 * dyn_.eta * dyn_.sigma_bar * d * (xi_max - d));
    e = std::min(e + table_(a, d) * dt_, e_max_);
    d = reflect(d + mu_d * dt_ + sigma_d * sqrt_dt * normal(engine), xi_max);
  }
  observe(PathState{cfg_.n_steps, cfg_.n_steps * dt_, d, e, 0.0});
  return e;
}

double PathSimulator::run(std::uint64_t n) const {
  return run_impl(n, [](const PathState&) {});
}

double PathSimulator::run(std::uint64_t n,
                          const std::function<void(const PathState&)>& observe) const {
  return run_impl(n, observe);
}

McResult summarize(std::span<const double> terminal, double penalty) {
  McResult r;
  r.penalty = penalty;
  const double n = static_cast<double>(terminal.size());
  if (terminal.empty()) return r;
  // Shifted by the first sample so identical samples give exactly zero spread.
  const double shift = terminal.front();
  double sum = 0.0;
  for (double x : terminal) sum += x - shift;
  const double mean_shifted = sum / n;
  r.mean_emissions = shift + mean_shifted;
  if (terminal.size() > 1) {
    double ss = 0.0;
    for (double x : terminal) ss += (x - shift - mean_shifted) * (x - shift - mean_shifted);
    r.std_error = std::sqrt(ss / (n * (n - 1.0)));
  }
  return r;
}

McResult simulate(const PathConfig& cfg, const JacobiParams& dyn, const StackParams& stack,
                  const SchemeParams& scheme, const SurfaceHistory& allowance) {
  const PathSimulator sim(cfg, dyn, stack, scheme, allowance);
  std::vector<double> terminal(cfg.n_paths);
  constexpr int kBatch = 1024;
  const int batches = (cfg.n_paths + kBatch - 1) / kBatch;
  parallel_for(batches, cfg.threads, [&](int b) {
    const int end = std::min(cfg.n_paths, (b + 1) * kBatch);
    for (int n = b * kBatch; n < end; ++n) terminal[n] = sim.run(static_cast<std::uint64_t>(n));
  });
  return summarize(terminal, scheme.penalty);
}

std::vector<McResult> penalty_sweep(std::span<const double> penalties, const PathConfig& cfg,
                                    const JacobiParams& dyn, const StackParams& stack,
                                    const SchemeParams& scheme, const Grid& grid,
                                    const SolveOptions& options) {
  std::vector<McResult> out;
  out.reserve(penalties.size());
  for (double penalty : penalties) {
    SchemeParams s = scheme;
    s.penalty = penalty;
    const SurfaceHistory alpha = solve_single_period(s, dyn, stack, grid, options);
    out.push_back(simulate(cfg, dyn, stack, s, alpha));
  }
  return out;
}

}  // namespace carbon
