#include "carbon/stack_model.hpp"

#include <string>
#include <utility>

namespace carbon {

void StackParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("stack: ") + what);
  };
  require(std::isfinite(b_min) && b_min >= 0.0, "b_min must be >= 0");
  require(std::isfinite(b_max) && b_max >= b_min, "b_max must be >= b_min");
  require(theta1 > 2.0 && std::isfinite(theta1), "theta1 must be > 2");
  require(e_min > 0.0, "e_min must be > 0");
  require(std::isfinite(e_max) && e_max > e_min, "e_max must be > e_min");
  require(theta2 >= 0.0 && theta2 < 1.0, "theta2 must lie in [0, 1)");
  require(kappa > 0.0 && std::isfinite(kappa), "kappa must be > 0");
  require(xi_max > 0.0 && std::isfinite(xi_max), "xi_max must be > 0");
}

ParametricStack::ParametricStack(const StackParams& p) : p_(p) { p_.validate(); }

double ParametricStack::bid(double xi) const {
  return p_.b_min + (p_.b_max - p_.b_min) * std::pow(xi / p_.xi_max, p_.theta1);
}

double ParametricStack::emission(double xi) const {
  return p_.e_max - (p_.e_max - p_.e_min) * std::pow(xi / p_.xi_max, p_.theta2);
}

double ParametricStack::antiderivative(double xi) const {
  const double k = p_.theta2 + 1.0;
  return p_.e_max * xi - (p_.e_max - p_.e_min) * xi * std::pow(xi / p_.xi_max, p_.theta2) / k;
}

double ParametricStack::emission_integral(double lo, double hi) const {
  return antiderivative(hi) - antiderivative(lo);
}

// g'(xi) = 0 reduces to x^(theta1 - theta2) = a (e_max - e_min) theta2 / (theta1 (b_max - b_min))
// with x = xi / xi_max.
double ParametricStack::adjusted_minimizer(double a) const {
  const double de = p_.e_max - p_.e_min;
  const double db = p_.b_max - p_.b_min;
  if (a <= 0.0 || p_.theta2 == 0.0) return 0.0;
  if (db <= 0.0) return p_.xi_max;
  const double ratio = a * de * p_.theta2 / (p_.theta1 * db);
  const double x = std::pow(ratio, 1.0 / (p_.theta1 - p_.theta2));
  return std::min(x, 1.0) * p_.xi_max;
}

FunctionStack::FunctionStack(std::function<double(double)> bid,
                             std::function<double(double)> emission, double xi_max, double kappa)
    : bid_(std::move(bid)), emission_(std::move(emission)), xi_max_(xi_max), kappa_(kappa) {
  if (!bid_ || !emission_) throw ConfigError("stack: bid and emission functions are required");
  if (!(xi_max > 0.0) || !(kappa > 0.0)) throw ConfigError("stack: xi_max and kappa must be > 0");
}

double FunctionStack::emission_integral(double lo, double hi) const {
  return adaptive_simpson(emission_, lo, hi);
}

double FunctionStack::adjusted_minimizer(double a) const {
  return golden_section_minimize([&](double x) { return bid_(x) + a * emission_(x); }, 0.0,
                                 xi_max_, 1e-10 * xi_max_);
}

namespace {

double simpson_step(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                    double f_mid, double f_hi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid);
  const double rm = 0.5 * (mid + hi);
  const double f_lm = f(lm);
  const double f_rm = f(rm);
  const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
  const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth - 1) +
         simpson_step(f, mid, hi, f_mid, f_rm, f_hi, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol, int max_depth) {
  if (hi == lo) return 0.0;
  if (hi < lo) return -adaptive_simpson(f, hi, lo, rel_tol, max_depth);
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  const double f_mid = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  // Scale the absolute budget by a coarse magnitude estimate of the integral.
  const double scale = std::max({std::abs(whole), std::abs(f_lo) * (hi - lo),
                                 std::abs(f_hi) * (hi - lo), 1e-300});
  return simpson_step(f, lo, hi, f_lo, f_mid, f_hi, whole, rel_tol * scale, max_depth);
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double abs_tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  const double a0 = lo;
  const double b0 = hi;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 500 && hi - lo > abs_tol; ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  if (hi - lo > abs_tol) throw ConvergenceError("golden-section search did not converge");
  // The bracket never contains the original endpoints, so compare them directly.
  double best = 0.5 * (lo + hi);
  double f_best = f(best);
  for (double edge : {a0, b0}) {
    const double fe = f(edge);
    if (fe < f_best) {
      best = edge;
      f_best = fe;
    }
  }
  return best;
}

double bau_bid(const StackParams& p, double xi) {
  detail::check_supply(xi, p.xi_max);
  return ParametricStack(p).bid(xi);
}

double marginal_emissions(const StackParams& p, double xi) {
  detail::check_supply(xi, p.xi_max);
  return ParametricStack(p).emission(xi);
}

double adjusted_bid(const StackParams& p, double a, double xi) {
  if (!(a >= 0.0)) throw DomainError("allowance price must be >= 0");
  detail::check_supply(xi, p.xi_max);
  const ParametricStack s(p);
  return s.bid(xi) + a * s.emission(xi);
}

ActiveSet active_set(const StackParams& p, double a, double d) {
  return active_set(ParametricStack(p), a, d);
}

double electricity_price(const StackParams& p, double a, double d) {
  return electricity_price(ParametricStack(p), a, d);
}

double emissions_rate(const StackParams& p, double a, double d) {
  return emissions_rate(ParametricStack(p), a, d);
}

double bau_emissions_rate(const StackParams& p, double d) {
  detail::check_supply(d, p.xi_max);
  const ParametricStack s(p);
  return s.hours() * s.emission_integral(0.0, d);
}

}  // namespace carbon
