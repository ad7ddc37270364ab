#include "carbon/market_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace carbon {

namespace {

void check_demand(const JacobiParams& p, double d) {
  if (!(d >= 0.0 && d <= p.xi_max)) throw DomainError("demand outside [0, xi_max]");
}

}  // namespace

double drift(const JacobiParams& p, double d) {
  check_demand(p, d);
  return -p.eta * (d - p.d_bar);
}

double diffusion_squared(const JacobiParams& p, double d) {
  check_demand(p, d);
  return 2.0 * p.eta * p.sigma_bar * d * (p.xi_max - d);
}

double diffusion(const JacobiParams& p, double d) { return std::sqrt(diffusion_squared(p, d)); }

// mu_d - (sigma_d^2)'/2 = eta ((d_bar - sigma_bar xi_max) + (2 sigma_bar - 1) d)
double fichera(const JacobiParams& p, double d, double emissions_rate, Normal n) {
  const double transport = p.eta * ((p.d_bar - p.sigma_bar * p.xi_max) + (2.0 * p.sigma_bar - 1.0) * d);
  return transport * n.n_d + emissions_rate * n.n_e;
}

std::string ValidityReport::summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i];
  }
  return out.str();
}

ValidityReport validate(const JacobiParams& p) {
  ValidityReport r;
  auto check = [&](bool ok, const char* what) {
    if (!ok) r.violations.emplace_back(what);
  };
  check(std::isfinite(p.eta) && p.eta > 0.0, "eta must be > 0");
  check(std::isfinite(p.sigma_bar) && p.sigma_bar >= 0.0, "sigma_bar must be >= 0");
  check(std::isfinite(p.xi_max) && p.xi_max > 0.0, "xi_max must be > 0");
  check(p.d_bar > 0.0 && p.d_bar < p.xi_max, "d_bar must lie in (0, xi_max)");
  check(p.d0 > 0.0 && p.d0 < p.xi_max, "d0 must lie in (0, xi_max)");
  check(std::min(p.d_bar, p.xi_max - p.d_bar) >= p.xi_max * p.sigma_bar,
        "min(d_bar, xi_max - d_bar) must be >= xi_max * sigma_bar (boundary attainable)");
  return r;
}

void require_valid(const JacobiParams& p) {
  const ValidityReport r = validate(p);
  if (!r.ok()) throw ConfigError("demand: " + r.summary());
}

}  // namespace carbon
