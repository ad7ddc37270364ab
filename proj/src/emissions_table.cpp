#include "carbon/emissions_table.hpp"

#include <algorithm>

namespace carbon {

EmissionsTable::EmissionsTable(const StackParams& stack, int n_d, double a_max, int n_a)
    : n_d_(n_d), n_a_(a_max > 0.0 ? n_a : 1), a_max_(a_max), xi_max_(stack.xi_max) {
  if (n_d < 1 || n_a < 1) throw ConfigError("emissions table: need n_d >= 1 and n_a >= 1");
  if (!(a_max >= 0.0)) throw ConfigError("emissions table: a_max must be >= 0");
  if (n_a_ == 1 && a_max > 0.0) n_a_ = 2;
  const ParametricStack s(stack);
  inv_da_ = n_a_ > 1 ? (n_a_ - 1) / a_max_ : 0.0;
  inv_dd_ = n_d_ / xi_max_;
  values_.resize(static_cast<std::size_t>(n_d_ + 1) * n_a_);
  for (int i = 0; i <= n_d_; ++i) {
    const double d = i == n_d_ ? xi_max_ : i * (xi_max_ / n_d_);
    for (int k = 0; k < n_a_; ++k) {
      const double a = n_a_ > 1 ? k * (a_max_ / (n_a_ - 1)) : 0.0;
      values_[static_cast<std::size_t>(i) * n_a_ + k] = emissions_rate(s, a, d);
    }
  }
}

EmissionsTable EmissionsTable::constant(int n_d, double xi_max, double value) {
  EmissionsTable t;
  t.n_d_ = n_d;
  t.n_a_ = 1;
  t.xi_max_ = xi_max;
  t.inv_dd_ = n_d / xi_max;
  t.values_.assign(static_cast<std::size_t>(n_d + 1), value);
  return t;
}

double EmissionsTable::max_rate() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double EmissionsTable::operator()(double a, double d) const {
  if (!(d >= 0.0 && d <= xi_max_)) throw DomainError("emissions table: demand outside [0, xi_max]");
  const double x = d * inv_dd_;
  const int i = std::min(static_cast<int>(x), n_d_ - 1);
  const double w = x - i;
  return (1.0 - w) * at_node(i, a) + w * at_node(i + 1, a);
}

}  // namespace carbon
