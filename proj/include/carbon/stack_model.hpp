#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>

#include "carbon/errors.hpp"

namespace carbon {

// Parametric business-as-usual bid stack and marginal emissions stack.
//
//   b(xi) = b_min + (b_max - b_min) (xi / xi_max)^theta1
//   e(xi) = e_max - (e_max - e_min) (xi / xi_max)^theta2
//
// Prices in currency/MWh, emissions in tCO2/MWh, capacity in MW. kappa
// converts an hourly rate into a rate per unit of model time (8760 h/year).
struct StackParams {
  double b_min = 0.0;
  double b_max = 200.0;
  double theta1 = 10.0;
  double e_max = 1.2;
  double e_min = 0.4;
  double theta2 = 0.4;
  double kappa = 8760.0;
  double xi_max = 30000.0;

  // Throws ConfigError naming the first violated invariant.
  void validate() const;
};

// Supply interval [lo, hi] of the generators dispatched at a given demand.
struct ActiveSet {
  double lo = 0.0;
  double hi = 0.0;

  double measure() const { return hi - lo; }
};

// Anything the merit-order algorithms can run on. g(a, xi) = bid(xi) + a *
// emission(xi) must be convex in xi for every a >= 0.
template <class S>
concept MeritOrderStack = requires(const S& s, double a, double x) {
  { s.capacity() } -> std::convertible_to<double>;
  { s.hours() } -> std::convertible_to<double>;
  { s.bid(x) } -> std::convertible_to<double>;
  { s.emission(x) } -> std::convertible_to<double>;
  { s.emission_integral(x, x) } -> std::convertible_to<double>;
  { s.adjusted_minimizer(a) } -> std::convertible_to<double>;
};

// Closed forms for the parametric family.
class ParametricStack {
 public:
  explicit ParametricStack(const StackParams& p);

  const StackParams& params() const { return p_; }
  double capacity() const { return p_.xi_max; }
  double hours() const { return p_.kappa; }
  double bid(double xi) const;
  double emission(double xi) const;
  // Exact integral of e over [lo, hi] from the antiderivative.
  double emission_integral(double lo, double hi) const;
  // Minimizer of xi -> bid(xi) + a * emission(xi) on [0, xi_max].
  double adjusted_minimizer(double a) const;

 private:
  double antiderivative(double xi) const;

  StackParams p_;
};

// User-supplied stacks. The minimizer comes from golden-section search and
// integrals from adaptive Simpson quadrature.
class FunctionStack {
 public:
  FunctionStack(std::function<double(double)> bid, std::function<double(double)> emission,
                double xi_max, double kappa);

  double capacity() const { return xi_max_; }
  double hours() const { return kappa_; }
  double bid(double xi) const { return bid_(xi); }
  double emission(double xi) const { return emission_(xi); }
  double emission_integral(double lo, double hi) const;
  double adjusted_minimizer(double a) const;

 private:
  std::function<double(double)> bid_;
  std::function<double(double)> emission_;
  double xi_max_;
  double kappa_;
};

// Adaptive Simpson quadrature with relative tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol = 1e-9, int max_depth = 50);

// Golden-section minimizer of a unimodal function on [lo, hi].
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double abs_tol);

namespace detail {

inline void check_supply(double xi, double xi_max) {
  if (!(xi >= 0.0 && xi <= xi_max)) throw DomainError("supply outside [0, xi_max]");
}

inline void check_price_demand(double a, double d, double xi_max) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("allowance price must be >= 0");
  if (!(d >= 0.0 && d <= xi_max)) throw DomainError("demand outside [0, xi_max]");
}

}  // namespace detail

// Sublevel set of g(a, .) with Lebesgue measure d. For convex g this is the
// interval [x, x + d] where g(a, x) = g(a, x + d), clipped to [0, xi_max].
// h(x) = g(a, x + d) - g(a, x) is increasing, so a single bisection locates
// x to within tol_rel * xi_max.
template <MeritOrderStack S>
ActiveSet active_set(const S& s, double a, double d, double tol_rel = 1e-10) {
  const double cap = s.capacity();
  detail::check_price_demand(a, d, cap);
  if (d == 0.0) {
    const double m = s.adjusted_minimizer(a);
    return {m, m};
  }
  if (d >= cap) return {0.0, cap};
  auto g = [&](double x) { return s.bid(x) + a * s.emission(x); };
  auto h = [&](double x) { return g(x + d) - g(x); };
  double lo = 0.0;
  double hi = cap - d;
  if (h(lo) >= 0.0) return {0.0, d};
  if (h(hi) <= 0.0) return {hi, cap};
  const double tol = tol_rel * cap;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = h(mid);
    if (std::isnan(v)) throw ConvergenceError("active_set: non-finite bid stack value");
    (v < 0.0 ? lo : hi) = mid;
  }
  if (hi - lo > tol) throw ConvergenceError("active_set: bisection did not converge");
  const double x = 0.5 * (lo + hi);
  return {x, x + d};
}

// Market electricity price: the level of g(a, .) on the boundary of the active set.
template <MeritOrderStack S>
double electricity_price(const S& s, double a, double d) {
  const ActiveSet set = active_set(s, a, d);
  auto g = [&](double x) { return s.bid(x) + a * s.emission(x); };
  return std::max(g(set.lo), g(set.hi));
}

template <MeritOrderStack S>
double emissions_rate(const S& s, double a, double d) {
  const ActiveSet set = active_set(s, a, d);
  return s.hours() * s.emission_integral(set.lo, set.hi);
}

// Free-function surface over StackParams.
double bau_bid(const StackParams& p, double xi);
double marginal_emissions(const StackParams& p, double xi);
double adjusted_bid(const StackParams& p, double a, double xi);
ActiveSet active_set(const StackParams& p, double a, double d);
double electricity_price(const StackParams& p, double a, double d);
double emissions_rate(const StackParams& p, double a, double d);
double bau_emissions_rate(const StackParams& p, double d);

}  // namespace carbon
