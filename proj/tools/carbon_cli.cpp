// Command-line front end over the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "carbon/carbon.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 1, kRuntime = 2 };

struct Failure {
  int code;
  std::string message;
};

int exit_code(cb_status s) {
  switch (s) {
    case CB_ERR_CONFIG:
    case CB_ERR_ARGUMENT:
    case CB_ERR_IO:
      return kConfig;
    default:
      return kRuntime;
  }
}

void check(cb_status s, const std::string& what) {
  if (s != CB_OK) throw Failure{exit_code(s), what + ": " + cb_status_name(s) + ": " + cb_last_error()};
}

// Output failures happen after the configuration was accepted.
void check_output(cb_status s, const std::string& what) {
  if (s != CB_OK) throw Failure{kRuntime, what + ": " + cb_last_error()};
}

using ConfigPtr = std::unique_ptr<cb_config, decltype(&cb_config_free)>;
using HistoryPtr = std::unique_ptr<cb_history, decltype(&cb_history_free)>;

HistoryPtr own(cb_history* h) { return HistoryPtr(h, cb_history_free); }

std::string get(const cb_config* cfg, const std::string& section, const std::string& key) {
  size_t needed = 0;
  check(cb_config_get(cfg, section.c_str(), key.c_str(), nullptr, 0, &needed), "config get");
  std::string buf(needed, '\0');
  check(cb_config_get(cfg, section.c_str(), key.c_str(), buf.data(), buf.size(), nullptr), "config get");
  buf.pop_back();
  return buf;
}

json echo(const cb_config* cfg) {
  size_t needed = 0;
  check(cb_config_echo_json(cfg, nullptr, 0, &needed), "config echo");
  std::string buf(needed, '\0');
  check(cb_config_echo_json(cfg, buf.data(), buf.size(), nullptr), "config echo");
  buf.pop_back();
  return json::parse(buf);
}

void set(cb_config* cfg, const std::string& section, const std::string& key, const std::string& value) {
  check(cb_config_set(cfg, section.c_str(), key.c_str(), value.c_str()),
        "--set " + section + "." + key);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{kConfig, "not a number list: '" + text + "'"};
    }
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  char buf[32];
  for (size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) out += ",";
    out += buf;
  }
  return out;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  out << doc.dump(2) << '\n';
  if (!out) throw Failure{kRuntime, "cannot write " + path.string()};
}

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
};

ConfigPtr load(const Common& common) {
  cb_config* raw = nullptr;
  if (common.config_path.empty())
    check(cb_config_default(&raw), "default configuration");
  else
    check(cb_config_load(common.config_path.c_str(), &raw), "load " + common.config_path);
  ConfigPtr cfg(raw, cb_config_free);
  for (const std::string& o : common.overrides) {
    const auto eq = o.find('=');
    const auto dot = o.substr(0, eq).rfind('.');
    if (eq == std::string::npos || dot == std::string::npos)
      throw Failure{kConfig, "--set expects section.key=value, got '" + o + "'"};
    set(cfg.get(), o.substr(0, dot), o.substr(dot + 1, eq - dot - 1), o.substr(eq + 1));
  }
  return cfg;
}

fs::path prepare(const Common& common) {
  std::error_code ec;
  fs::create_directories(common.out_dir, ec);
  if (ec) throw Failure{kConfig, "cannot create " + common.out_dir + ": " + ec.message()};
  return common.out_dir;
}

void export_history(const cb_history* h, const fs::path& dir, const std::string& stem,
                    const std::vector<double>* times) {
  const fs::path csv = dir / (stem + ".csv");
  const fs::path grid = dir / (stem + "_grid.json");
  check_output(cb_history_write_csv(h, csv.c_str(), times ? times->data() : nullptr,
                                    times ? times->size() : 0),
               "write " + csv.string());
  check_output(cb_history_write_grid_json(h, grid.c_str()), "write " + grid.string());
  std::cout << "wrote " << csv.string() << "\n";
}

std::vector<double> snapshot_times(const cb_config* cfg, const std::string& section,
                                   const std::string& requested) {
  if (!requested.empty()) return parse_list(requested);
  const double horizon = std::stod(get(cfg, section, "horizon"));
  return {0.0, 0.5 * horizon, horizon};
}

double value_at(const cb_history* h, double t, double d, double e) {
  double v = 0.0;
  check(cb_history_evaluate(h, t, d, e, &v), "evaluate");
  return v;
}

std::pair<int, int> parse_levels(const std::string& text) {
  const auto sep = text.find("..");
  try {
    if (sep == std::string::npos) throw std::invalid_argument(text);
    return {std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + 2))};
  } catch (const std::exception&) {
    throw Failure{kConfig, "--levels expects first..last, got '" + text + "'"};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carbon allowance pricing engine"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-c,--config", common.config_path, "configuration file (.ini or .json)");
  app.add_option("-o,--out", common.out_dir, "output directory")->capture_default_str();
  app.add_option("--set", common.overrides, "override one key, e.g. scheme.penalty=50");

  std::string times;
  bool all_levels = false;
  auto add_export_flags = [&](CLI::App* sub) {
    sub->add_option("--times", times, "comma-separated snapshot times (default 0,T/2,T)");
    sub->add_flag("--all-levels", all_levels, "write every time level");
  };

  CLI::App* allowance = app.add_subcommand("price-allowance", "single-period allowance price");
  add_export_flags(allowance);
  CLI::App* two = app.add_subcommand("price-allowance-2p", "two-period allowance price");
  add_export_flags(two);

  CLI::App* call = app.add_subcommand("price-call", "European call on the allowance");
  add_export_flags(call);
  std::string strike;
  std::string maturity;
  call->add_option("--strike", strike, "strike K");
  call->add_option("--maturity", maturity, "maturity tau, a mesh time in [0, T]");

  CLI::App* mc = app.add_subcommand("simulate-emissions", "Monte Carlo penalty sweep");
  std::string penalties;
  std::string paths;
  std::string seed;
  mc->add_option("--penalties", penalties, "comma-separated penalties");
  mc->add_option("--paths", paths, "number of paths");
  mc->add_option("--seed", seed, "random seed");

  CLI::App* conv = app.add_subcommand("convergence", "refinement study on the reference levels");
  std::string levels = "1..4";
  conv->add_option("--levels", levels, "level range first..last")->capture_default_str();

  CLI::App* check_cfg = app.add_subcommand("validate-config", "validate and echo the configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    ConfigPtr cfg = load(common);
    cb_config* c = cfg.get();
    if (!strike.empty()) set(c, "option", "strike", strike);
    if (!maturity.empty()) set(c, "option", "maturity", maturity);
    if (!penalties.empty()) set(c, "mc", "penalties", penalties);
    if (!paths.empty()) set(c, "mc", "n_paths", paths);
    if (!seed.empty()) set(c, "mc", "seed", seed);
    check(cb_config_validate(c), "validate");
    const json config_echo = echo(c);

    if (*check_cfg) {
      std::cout << config_echo.dump(2) << "\n";
      return kOk;
    }

    const fs::path dir = prepare(common);
    const double d0 = config_echo["demand"]["d0"];
    json summary{{"config", config_echo}};

    if (*allowance) {
      cb_history* raw = nullptr;
      check(cb_price_allowance(c, 1, &raw), "price-allowance");
      HistoryPtr h = own(raw);
      const std::vector<double> t = snapshot_times(c, "scheme", times);
      export_history(h.get(), dir, "allowance", all_levels ? nullptr : &t);
      summary["alpha_t0_d0_e0"] = value_at(h.get(), 0.0, d0, 0.0);
      write_json(dir / "allowance.json", summary);
      std::printf("alpha(0, d0, 0) = %.10g\n", summary["alpha_t0_d0_e0"].get<double>());
    } else if (*two) {
      cb_history* a1 = nullptr;
      cb_history* a2 = nullptr;
      check(cb_price_allowance_2p(c, 1, &a1, &a2), "price-allowance-2p");
      HistoryPtr h1 = own(a1);
      HistoryPtr h2 = own(a2);
      const std::vector<double> t = snapshot_times(c, "scheme.period1", times);
      export_history(h1.get(), dir, "alpha1", all_levels ? nullptr : &t);
      export_history(h2.get(), dir, "alpha2_T1", nullptr);
      summary["alpha1_t0_d0_e0"] = value_at(h1.get(), 0.0, d0, 0.0);
      write_json(dir / "allowance_2p.json", summary);
      std::printf("alpha1(0, d0, 0) = %.10g\n", summary["alpha1_t0_d0_e0"].get<double>());
    } else if (*call) {
      cb_history* v = nullptr;
      check(cb_price_call(c, 1, &v, nullptr), "price-call");
      HistoryPtr h = own(v);
      const double tau = config_echo["option"]["maturity"];
      const std::vector<double> t =
          times.empty() ? std::vector<double>{0.0, 0.5 * tau, tau} : parse_list(times);
      export_history(h.get(), dir, "call", all_levels ? nullptr : &t);
      summary["v_t0_d0_e0"] = value_at(h.get(), 0.0, d0, 0.0);
      write_json(dir / "call.json", summary);
      std::printf("v(0, d0, 0) = %.10g\n", summary["v_t0_d0_e0"].get<double>());
    } else if (*mc) {
      const std::vector<double> list = parse_list(get(c, "mc", "penalties"));
      std::vector<cb_mc_result> results(list.size());
      check(cb_simulate_emissions(c, list.data(), list.size(), results.data()), "simulate-emissions");
      const fs::path csv = dir / "emissions.csv";
      std::ofstream out(csv, std::ios::binary);
      out << "penalty,mean,std_error\n";
      json rows = json::array();
      for (const cb_mc_result& r : results) {
        char line[128];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", r.penalty, r.mean_emissions,
                      r.std_error);
        out << line;
        rows.push_back({{"penalty", r.penalty}, {"mean", r.mean_emissions}, {"std_error", r.std_error}});
        std::printf("penalty %8.3f  mean %.6e  std_error %.4e\n", r.penalty, r.mean_emissions,
                    r.std_error);
      }
      if (!out.flush()) throw Failure{kRuntime, "cannot write " + csv.string()};
      summary["seed"] = config_echo["mc"]["seed"];
      summary["penalties"] = join(list);
      summary["results"] = rows;
      write_json(dir / "emissions.json", summary);
      std::cout << "wrote " << csv.string() << "\n";
    } else if (*conv) {
      const auto [first, last] = parse_levels(levels);
      cb_convergence r{};
      check(cb_convergence_study(c, first, last, &r), "convergence");
      json pairs = json::array();
      for (int k = 0; k < r.n_pairs; ++k) {
        pairs.push_back({{"coarse_level", first + k},
                         {"mesh_width", r.mesh_width[k]},
                         {"err_inf", r.err_inf[k]},
                         {"err_one", r.err_one[k]}});
        std::printf("levels %d-%d  err_inf %.4f  err_one %.4f\n", first + k, first + k + 1,
                    r.err_inf[k], r.err_one[k]);
      }
      std::printf("rate_inf %.4f\n", r.rate_inf);
      summary["e_max"] = r.e_max;
      summary["pairs"] = pairs;
      summary["rate_inf"] = r.rate_inf;
      write_json(dir / "convergence.json", summary);
    }
    return kOk;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
