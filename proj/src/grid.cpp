#include "carbon/grid.hpp"

#include <algorithm>
#include <cmath>

namespace carbon {

Grid Grid::make(int n_d, int n_e, int n_t, double xi_max, double e_max, double horizon) {
  if (n_d < 2 || n_e < 1 || n_t < 1) throw ConfigError("grid: need n_d >= 2, n_e >= 1, n_t >= 1");
  if (!(xi_max > 0.0) || !(e_max > 0.0) || !(horizon > 0.0))
    throw ConfigError("grid: xi_max, e_max and horizon must be > 0");
  return Grid{n_d, n_e, n_t, xi_max, e_max, horizon};
}

double align_e_max(std::span<const double> caps, double e_max, int n_e) {
  if (n_e < 1 || !(e_max > 0.0)) throw ConfigError("align_e_max: need n_e >= 1 and e_max > 0");
  double base = 0.0;
  for (double c : caps) {
    if (!(c >= 0.0) || c > e_max) throw ConfigError("align_e_max: caps must lie in [0, e_max]");
    if (base == 0.0 && c > 0.0) base = c;
  }
  if (base == 0.0) return e_max;
  const double m = std::floor(base * n_e / e_max * (1.0 + 1e-12));
  if (m < 1.0) throw ConfigError("align_e_max: mesh too coarse to resolve the cap");
  const double aligned = base * n_e / m;
  const Grid g{2, n_e, 1, 1.0, aligned, 1.0};
  for (double c : caps)
    if (!g.on_e_node(c)) throw ConfigError("align_e_max: caps cannot share one E mesh");
  return aligned;
}

bool Grid::on_e_node(double e) const {
  const double x = e / delta_e();
  return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x));
}

int Grid::time_index(double t) const {
  const double x = t / delta_t();
  const double k = std::round(x);
  if (std::abs(x - k) > 1e-9 * std::max(1.0, x) || k < 0 || k > n_t)
    throw DomainError("time is not a mesh time level");
  return static_cast<int>(k);
}

double interpolate(const ValueSurface& s, double d, double e) {
  const Grid& g = s.grid;
  if (!(d >= 0.0 && d <= g.xi_max)) throw DomainError("interpolate: demand outside [0, xi_max]");
  if (!(e >= 0.0)) throw DomainError("interpolate: emissions below 0");
  e = std::min(e, g.e_max);
  const double x = d / g.delta_d();
  const double y = e / g.delta_e();
  const int i = std::min(static_cast<int>(x), g.n_d - 1);
  const int j = std::min(static_cast<int>(y), g.n_e - 1);
  const double u = x - i;
  const double v = y - j;
  return (1.0 - u) * ((1.0 - v) * s(i, j) + v * s(i, j + 1)) +
         u * ((1.0 - v) * s(i + 1, j) + v * s(i + 1, j + 1));
}

void SurfaceHistory::finish() {
  std::sort(levels_.begin(), levels_.end(),
            [](const ValueSurface& a, const ValueSurface& b) { return a.time < b.time; });
}

const ValueSurface& SurfaceHistory::at_or_below(double t) const {
  if (levels_.empty()) throw MissingAllowanceError("surface history is empty");
  const double slack = 1e-9 * grid_.delta_t();
  auto it = std::upper_bound(levels_.begin(), levels_.end(), t + slack,
                             [](double x, const ValueSurface& s) { return x < s.time; });
  if (it == levels_.begin()) throw MissingAllowanceError("no stored level at or below the requested time");
  return *std::prev(it);
}

const ValueSurface& SurfaceHistory::exactly_at(double t) const {
  const ValueSurface& s = at_or_below(t);
  if (std::abs(s.time - t) > 1e-9 * grid_.delta_t())
    throw MissingAllowanceError("no stored level at the requested time");
  return s;
}

double SurfaceHistory::evaluate(double t, double d, double e) const {
  if (!(t >= 0.0 && t <= grid_.horizon * (1.0 + 1e-12)))
    throw DomainError("evaluate: time outside [0, horizon]");
  return interpolate(at_or_below(t), d, e);
}

}  // namespace carbon
