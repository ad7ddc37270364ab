#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "carbon/market_dynamics.hpp"
#include "carbon/market_scheme.hpp"
#include "carbon/monte_carlo.hpp"
#include "carbon/option_pricer.hpp"
#include "carbon/pde_engine.hpp"
#include "carbon/stack_model.hpp"

namespace carbon {

// Cap, penalty and length of one period of the two-period market.
struct PeriodConfig {
  double e_cap = 8.0e7;
  double penalty = 100.0;
  double horizon = 1.0;
};

struct GridConfig {
  int n_d = 24;
  int n_e = 400;
  int n_t = 1760;
  int price_levels = 512;
  // Move e_max up so every cap sits on an E node.
  bool align_cap = true;
  int threads = 1;
  DStencil d_stencil = DStencil::Hybrid;
};

// Engine-wide configuration as read from file. Resolved parameter sets for
// the solvers come from the accessors below, never from the raw fields.
struct Config {
  StackParams stack;
  double eta = 10.0;
  double d_bar = 21000.0;
  double sigma_bar = 0.05;
  double d0 = 21000.0;

  double e_cap = 1.17e8;
  double penalty = 100.0;
  double horizon = 1.0;
  double rate = 0.05;
  // Unset: kappa * int_0^xi_max e * horizon.
  std::optional<double> e_max;

  PeriodConfig period1;
  PeriodConfig period2;
  // Unset: the second-period penalty.
  std::optional<double> extra_penalty;
  Mechanism mechanism = Mechanism::BankingWithdrawal;

  GridConfig grid;

  int n_paths = 100000;
  int n_steps = 365;
  std::uint64_t seed = 20111213;
  int mc_threads = 1;
  int table_demand_cells = 3000;
  std::vector<double> penalties{0, 25, 50, 75, 100, 150, 200};

  double strike = 50.0;
  // Unset: half the horizon.
  std::optional<double> maturity;

  JacobiParams demand() const;
  // Single-period scheme with e_max resolved and aligned to the grid.
  SchemeParams scheme() const;
  Grid allowance_grid() const;
  TwoPeriodScheme two_period() const;
  Grid two_period_grid() const;
  SolveOptions solve_options() const;
  PathConfig paths() const;
  OptionSpec option() const;

  // Throws ConfigError listing every violated invariant.
  void validate() const;

  // Assigns one key, e.g. set("scheme.period1", "e_cap", "8e7").
  void set(const std::string& section, const std::string& key, const std::string& value);
  // Current raw value of one key as text ("auto" for unset optionals).
  std::string get(const std::string& section, const std::string& key) const;
};

// Physical emission bound kappa * int_0^xi_max e * horizon.
double physical_e_max(const StackParams& stack, double horizon);

// key = value file with [section] headers; '#' and ';' start comments.
Config parse_ini(const std::string& text);
// {"stack": {...}, "scheme": {..., "period1": {...}}, ...}
Config parse_json(const std::string& text);
// Picks the parser from the extension (.json, otherwise INI).
Config load_config(const std::filesystem::path& path);

// Resolved parameters, including derived e_max and grid spacings.
nlohmann::json echo(const Config& cfg);

}  // namespace carbon
