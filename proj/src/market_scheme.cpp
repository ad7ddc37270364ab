#include "carbon/market_scheme.hpp"

#include <algorithm>
#include <cmath>

namespace carbon {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("scheme: " + what);
}

void check_emissions(double e, double e_max) {
  if (!(e >= 0.0 && e <= e_max)) throw DomainError("cumulative emissions outside [0, e_max]");
}

}  // namespace

void SchemeParams::validate() const {
  require(std::isfinite(e_max) && e_max > 0.0, "e_max must be > 0");
  require(e_cap >= 0.0 && e_cap <= e_max, "e_cap must lie in [0, e_max]");
  require(std::isfinite(penalty) && penalty >= 0.0, "penalty must be >= 0");
  require(std::isfinite(horizon) && horizon > 0.0, "horizon must be > 0");
  require(std::isfinite(rate) && rate >= 0.0, "rate must be >= 0");
}

double SchemeParams::discounted_penalty(double t) const {
  return std::exp(-rate * (horizon - t)) * penalty;
}

Mechanism parse_mechanism(std::string_view text) {
  if (text == "bw") return Mechanism::BankingWithdrawal;
  if (text == "bbw") return Mechanism::BankingBorrowingWithdrawal;
  throw ConfigError("scheme: mechanism must be \"bw\" or \"bbw\", got \"" + std::string(text) +
                    "\"");
}

std::string_view to_string(Mechanism m) {
  return m == Mechanism::BankingWithdrawal ? "bw" : "bbw";
}

void TwoPeriodScheme::validate() const {
  period1.validate();
  period2.validate();
  require(period1.rate == period2.rate, "both periods must share the risk-free rate");
  require(period1.e_max == period2.e_max, "both periods must share e_max");
  require(std::isfinite(extra_penalty) && extra_penalty >= second_period_value_bound(),
          "extra_penalty must be >= e^{-r(T2-T1)} * pi2");
}

double TwoPeriodScheme::second_period_value_bound() const {
  return std::exp(-period2.rate * period2.horizon) * period2.penalty;
}

double single_period_terminal(const SchemeParams& s, double e_T) {
  check_emissions(e_T, s.e_max);
  return e_T >= s.e_cap ? s.penalty : 0.0;
}

double aggregate_supply_period2(const TwoPeriodScheme& s, double e1) {
  check_emissions(e1, s.period1.e_max);
  return std::max(s.period2.e_cap + s.period1.e_cap - e1, 0.0);
}

double phi2(const TwoPeriodScheme& s, double e_T2, double e1) {
  check_emissions(e_T2, s.period2.e_max);
  return e_T2 >= aggregate_supply_period2(s, e1) ? s.period2.penalty : 0.0;
}

namespace {

void check_second_period_value(const TwoPeriodScheme& s, double a2) {
  // The bound is approached by an explicit scheme from below; allow rounding.
  const double bound = s.second_period_value_bound();
  if (!(a2 >= -1e-9 && a2 <= bound * (1.0 + 1e-9) + 1e-9))
    throw DomainError("second-period allowance value outside [0, e^{-r(T2-T1)} pi2]");
}

}  // namespace

double phi1_banking_withdrawal(const TwoPeriodScheme& s, double e_T1, double a2_at_T1) {
  if (s.mechanism != Mechanism::BankingWithdrawal)
    throw MechanismError("phi1_banking_withdrawal requires mechanism bw");
  check_emissions(e_T1, s.period1.e_max);
  check_second_period_value(s, a2_at_T1);
  const double cap1 = s.period1.e_cap;
  if (e_T1 < cap1) return a2_at_T1;
  if (e_T1 < cap1 + s.period2.e_cap) return s.period1.penalty + a2_at_T1;
  return s.period1.penalty + s.extra_penalty;
}

double phi1_borrowing(const TwoPeriodScheme& s, double e_T1, double a2_at_T1) {
  if (s.mechanism != Mechanism::BankingBorrowingWithdrawal)
    throw MechanismError("phi1_borrowing requires mechanism bbw");
  check_emissions(e_T1, s.period1.e_max);
  check_second_period_value(s, a2_at_T1);
  if (e_T1 < s.period1.e_cap + s.period2.e_cap) return a2_at_T1;
  return s.period1.penalty + s.extra_penalty;
}

double phi1(const TwoPeriodScheme& s, double e_T1, double a2_at_T1) {
  return s.mechanism == Mechanism::BankingWithdrawal ? phi1_banking_withdrawal(s, e_T1, a2_at_T1)
                                                      : phi1_borrowing(s, e_T1, a2_at_T1);
}

}  // namespace carbon
