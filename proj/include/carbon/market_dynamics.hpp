#pragma once

#include <string>
#include <vector>

#include "carbon/errors.hpp"

namespace carbon {

// Jacobi demand diffusion
//   dD = -eta (D - d_bar) dt + sqrt(2 eta sigma_bar D (xi_max - D)) dW
// on [0, xi_max]. Time in years, demand in MW.
struct JacobiParams {
  double eta = 10.0;
  double d_bar = 21000.0;
  double sigma_bar = 0.05;
  double xi_max = 30000.0;
  double d0 = 21000.0;
};

double drift(const JacobiParams& p, double d);
double diffusion(const JacobiParams& p, double d);
// 2 eta sigma_bar d (xi_max - d), without the rounding of squaring diffusion().
double diffusion_squared(const JacobiParams& p, double d);

// Inward unit normal on the boundary of [0, xi_max] x [0, e_max].
struct Normal {
  double n_d = 0.0;
  double n_e = 0.0;
};

// Fichera function of the pricing operator with Jacobi coefficients. f >= 0
// marks outflow boundary points where no boundary data is needed.
double fichera(const JacobiParams& p, double d, double emissions_rate, Normal n);

struct ValidityReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// sigma_bar = 0 is accepted: it degenerates the demand to a deterministic
// relaxation towards d_bar.
ValidityReport validate(const JacobiParams& p);

// Throws ConfigError carrying the report summary when p is invalid.
void require_valid(const JacobiParams& p);

}  // namespace carbon
