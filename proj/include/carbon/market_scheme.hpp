#pragma once

#include <string>
#include <string_view>

#include "carbon/errors.hpp"

namespace carbon {

// One compliance period. e_max bounds cumulative emissions over the period
// and doubles as the upper edge of the pricing domain in E.
struct SchemeParams {
  double e_cap = 1.17e8;
  double penalty = 100.0;
  double horizon = 1.0;
  double rate = 0.05;
  double e_max = 1.6519e8;

  void validate() const;
  // Discounted penalty e^{-r (horizon - t)} * penalty.
  double discounted_penalty(double t) const;
};

enum class Mechanism { BankingWithdrawal, BankingBorrowingWithdrawal };

// "bw" / "bbw"
Mechanism parse_mechanism(std::string_view text);
std::string_view to_string(Mechanism m);

// Two consecutive compliance periods. period2.horizon is the length T2 - T1
// of the second period.
struct TwoPeriodScheme {
  SchemeParams period1;
  SchemeParams period2;
  double extra_penalty = 100.0;
  Mechanism mechanism = Mechanism::BankingWithdrawal;

  void validate() const;
  // Upper bound e^{-r (T2 - T1)} pi2 of the second-period price at T1.
  double second_period_value_bound() const;
};

// pi * 1{e_T >= e_cap}
double single_period_terminal(const SchemeParams& s, double e_T);

// (E2_cap + E1_cap - e1)^+
double aggregate_supply_period2(const TwoPeriodScheme& s, double e1);

double phi2(const TwoPeriodScheme& s, double e_T2, double e1);

double phi1_banking_withdrawal(const TwoPeriodScheme& s, double e_T1, double a2_at_T1);
double phi1_borrowing(const TwoPeriodScheme& s, double e_T1, double a2_at_T1);

// Dispatches on s.mechanism.
double phi1(const TwoPeriodScheme& s, double e_T1, double a2_at_T1);

}  // namespace carbon
