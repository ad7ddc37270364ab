#pragma once

#include <vector>

#include "carbon/stack_model.hpp"

namespace carbon {

// Market emissions rate tabulated on a uniform (a, D) lattice. Each entry is
// an exact emissions_rate evaluation; lookups interpolate linearly in a and,
// off the demand nodes, in D. Allowance prices outside [0, a_max] clamp.
class EmissionsTable {
 public:
  EmissionsTable() = default;
  EmissionsTable(const StackParams& stack, int n_d, double a_max, int n_a);

  // Rate identically equal to value; used for pure transport-free problems.
  static EmissionsTable constant(int n_d, double xi_max, double value);

  int demand_cells() const { return n_d_; }
  int price_levels() const { return n_a_; }
  double a_max() const { return a_max_; }
  double xi_max() const { return xi_max_; }
  double max_rate() const;

  // Rate at demand node i.
  double at_node(int i, double a) const {
    const double* row = &values_[static_cast<std::size_t>(i) * n_a_];
    if (n_a_ == 1) return row[0];
    double x = a * inv_da_;
    if (!(x > 0.0)) return row[0];
    if (x >= n_a_ - 1) return row[n_a_ - 1];
    const int k = static_cast<int>(x);
    const double w = x - k;
    return row[k] + w * (row[k + 1] - row[k]);
  }

  // Bilinear lookup for demand between nodes.
  double operator()(double a, double d) const;

 private:
  int n_d_ = 0;
  int n_a_ = 1;
  double a_max_ = 0.0;
  double xi_max_ = 0.0;
  double inv_da_ = 0.0;
  double inv_dd_ = 0.0;
  std::vector<double> values_;  // [i * n_a + k]
};

}  // namespace carbon
