#include "carbon/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace carbon {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty())
    throw ConfigError("not a number: '" + text + "'");
  return v;
}

long long to_integer(const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty())
    throw ConfigError("not an integer: '" + text + "'");
  return v;
}

int to_int(const std::string& text) {
  const long long v = to_integer(text);
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError("integer out of range: '" + text + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("not a boolean: '" + text + "'");
}

std::optional<double> to_optional(const std::string& text) {
  if (trim(text) == "auto") return std::nullopt;
  return to_double(text);
}

std::vector<double> to_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format(const std::optional<double>& v) { return v ? format(*v) : "auto"; }

std::string format(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format(v[i]);
  }
  return out;
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(Config&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

#define CB_DOUBLE(sec, key, field) \
  Key{sec, key, [](Config& c, const std::string& v) { c.field = to_double(v); }, \
      [](const Config& c) { return format(c.field); }}
#define CB_INT(sec, key, field) \
  Key{sec, key, [](Config& c, const std::string& v) { c.field = to_int(v); }, \
      [](const Config& c) { return std::to_string(c.field); }}
#define CB_OPTIONAL(sec, key, field) \
  Key{sec, key, [](Config& c, const std::string& v) { c.field = to_optional(v); }, \
      [](const Config& c) { return format(c.field); }}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      CB_DOUBLE("stack", "b_min", stack.b_min),
      CB_DOUBLE("stack", "b_max", stack.b_max),
      CB_DOUBLE("stack", "theta1", stack.theta1),
      CB_DOUBLE("stack", "e_max", stack.e_max),
      CB_DOUBLE("stack", "e_min", stack.e_min),
      CB_DOUBLE("stack", "theta2", stack.theta2),
      CB_DOUBLE("stack", "kappa", stack.kappa),
      CB_DOUBLE("stack", "xi_max", stack.xi_max),
      CB_DOUBLE("demand", "eta", eta),
      CB_DOUBLE("demand", "d_bar", d_bar),
      CB_DOUBLE("demand", "sigma_bar", sigma_bar),
      CB_DOUBLE("demand", "d0", d0),
      CB_DOUBLE("scheme", "e_cap", e_cap),
      CB_DOUBLE("scheme", "penalty", penalty),
      CB_DOUBLE("scheme", "horizon", horizon),
      CB_DOUBLE("scheme", "rate", rate),
      CB_OPTIONAL("scheme", "e_max", e_max),
      CB_OPTIONAL("scheme", "extra_penalty", extra_penalty),
      Key{"scheme", "mechanism",
          [](Config& c, const std::string& v) {
            try {
              c.mechanism = parse_mechanism(trim(v));
            } catch (const Error& e) {
              throw ConfigError(e.what());
            }
          },
          [](const Config& c) { return std::string(to_string(c.mechanism)); }},
      CB_DOUBLE("scheme.period1", "e_cap", period1.e_cap),
      CB_DOUBLE("scheme.period1", "penalty", period1.penalty),
      CB_DOUBLE("scheme.period1", "horizon", period1.horizon),
      CB_DOUBLE("scheme.period2", "e_cap", period2.e_cap),
      CB_DOUBLE("scheme.period2", "penalty", period2.penalty),
      CB_DOUBLE("scheme.period2", "horizon", period2.horizon),
      CB_INT("grid", "n_d", grid.n_d),
      CB_INT("grid", "n_e", grid.n_e),
      CB_INT("grid", "n_t", grid.n_t),
      CB_INT("grid", "price_levels", grid.price_levels),
      CB_INT("grid", "threads", grid.threads),
      Key{"grid", "align_cap", [](Config& c, const std::string& v) { c.grid.align_cap = to_bool(v); },
          [](const Config& c) { return std::string(c.grid.align_cap ? "true" : "false"); }},
      Key{"grid", "d_stencil", [](Config& c, const std::string& v) { c.grid.d_stencil = parse_d_stencil(trim(v)); },
          [](const Config& c) { return std::string(to_string(c.grid.d_stencil)); }},
      CB_INT("mc", "n_paths", n_paths),
      CB_INT("mc", "n_steps", n_steps),
      Key{"mc", "seed",
          [](Config& c, const std::string& v) {
            const long long s = to_integer(v);
            if (s < 0) throw ConfigError("seed must be >= 0");
            c.seed = static_cast<std::uint64_t>(s);
          },
          [](const Config& c) { return std::to_string(c.seed); }},
      CB_INT("mc", "threads", mc_threads),
      CB_INT("mc", "demand_cells", table_demand_cells),
      Key{"mc", "penalties", [](Config& c, const std::string& v) { c.penalties = to_list(v); },
          [](const Config& c) { return format(c.penalties); }},
      CB_DOUBLE("option", "strike", strike),
      CB_OPTIONAL("option", "maturity", maturity),
  };
  return table;
}

#undef CB_DOUBLE
#undef CB_INT
#undef CB_OPTIONAL

const Key& find_key(const std::string& section, const std::string& key) {
  for (const Key& k : keys())
    if (section == k.section && key == k.name) return k;
  throw ConfigError("unknown configuration key [" + section + "] " + key);
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format(v.get<double>());
  if (v.is_null()) return "auto";
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",";
      out += json_scalar(v[i]);
    }
    return out;
  }
  throw ConfigError("unsupported JSON value " + v.dump());
}

void apply_json_section(Config& cfg, const std::string& section, const nlohmann::json& obj) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object())
      apply_json_section(cfg, section + "." + key, value);
    else
      cfg.set(section, key, json_scalar(value));
  }
}

}  // namespace

double physical_e_max(const StackParams& stack, double horizon) {
  return ParametricStack(stack).emission_integral(0.0, stack.xi_max) * stack.kappa * horizon;
}

JacobiParams Config::demand() const { return {eta, d_bar, sigma_bar, stack.xi_max, d0}; }

SchemeParams Config::scheme() const {
  SchemeParams s{e_cap, penalty, horizon, rate, e_max ? *e_max : physical_e_max(stack, horizon)};
  if (grid.align_cap) {
    const double caps[] = {s.e_cap};
    s.e_max = align_e_max(caps, s.e_max, grid.n_e);
  }
  return s;
}

Grid Config::allowance_grid() const {
  const SchemeParams s = scheme();
  return Grid::make(grid.n_d, grid.n_e, grid.n_t, stack.xi_max, s.e_max, s.horizon);
}

TwoPeriodScheme Config::two_period() const {
  const double horizon_max = std::max(period1.horizon, period2.horizon);
  double bound = e_max ? *e_max : physical_e_max(stack, horizon_max);
  if (grid.align_cap) {
    const double caps[] = {period1.e_cap, period2.e_cap};
    bound = align_e_max(caps, bound, grid.n_e);
  }
  TwoPeriodScheme s;
  s.period1 = {period1.e_cap, period1.penalty, period1.horizon, rate, bound};
  s.period2 = {period2.e_cap, period2.penalty, period2.horizon, rate, bound};
  s.extra_penalty = extra_penalty ? *extra_penalty : period2.penalty;
  s.mechanism = mechanism;
  return s;
}

Grid Config::two_period_grid() const {
  const TwoPeriodScheme s = two_period();
  return Grid::make(grid.n_d, grid.n_e, grid.n_t, stack.xi_max, s.period1.e_max, s.period1.horizon);
}

SolveOptions Config::solve_options() const {
  SolveOptions o;
  o.price_levels = grid.price_levels;
  o.threads = grid.threads;
  o.d_stencil = grid.d_stencil;
  return o;
}

PathConfig Config::paths() const {
  PathConfig p;
  p.n_paths = n_paths;
  p.n_steps = n_steps;
  p.seed = seed;
  p.d0 = d0;
  p.threads = mc_threads;
  p.table_demand_cells = table_demand_cells;
  p.table_price_levels = grid.price_levels;
  return p;
}

OptionSpec Config::option() const { return {maturity ? *maturity : 0.5 * horizon, strike}; }

void Config::validate() const {
  std::vector<std::string> problems;
  auto attempt = [&](const char* where, auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      problems.push_back(std::string(where) + ": " + e.what());
    }
  };
  attempt("stack", [&] { stack.validate(); });
  for (const std::string& v : carbon::validate(demand()).violations) problems.push_back("demand: " + v);
  attempt("scheme", [&] {
    scheme().validate();
    allowance_grid();
  });
  attempt("scheme.period", [&] {
    two_period().validate();
    two_period_grid();
  });
  attempt("grid", [&] {
    if (grid.price_levels < 1) throw ConfigError("price_levels must be >= 1");
    if (grid.threads < 1) throw ConfigError("threads must be >= 1");
  });
  attempt("mc", [&] {
    paths().validate(stack.xi_max);
    for (double p : penalties)
      if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("penalties must be finite and >= 0");
  });
  attempt("option", [&] { option().validate(horizon); });
  if (!problems.empty()) {
    std::string msg = "invalid configuration";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  const Key& k = find_key(section, key);
  try {
    k.set(*this, value);
  } catch (const ConfigError& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what());
  }
}

std::string Config::get(const std::string& section, const std::string& key) const {
  return find_key(section, key).get(*this);
}

Config parse_ini(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("ini: ") + e.what());
  }
  Config cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [key, value] : body) cfg.set(section, key, value.data());
  }
  return cfg;
}

Config parse_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("json: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("json: top level must be an object");
  Config cfg;
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object()) throw ConfigError("json: section '" + section + "' must be an object");
    apply_json_section(cfg, section, body);
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return path.extension() == ".json" ? parse_json(buf.str()) : parse_ini(buf.str());
}

nlohmann::json echo(const Config& cfg) {
  using nlohmann::json;
  const StackParams& st = cfg.stack;
  const SchemeParams s = cfg.scheme();
  const TwoPeriodScheme tp = cfg.two_period();
  const Grid g = cfg.allowance_grid();
  const OptionSpec opt = cfg.option();
  json out;
  out["stack"] = {{"b_min", st.b_min},   {"b_max", st.b_max},   {"theta1", st.theta1},
                  {"e_max", st.e_max},   {"e_min", st.e_min},   {"theta2", st.theta2},
                  {"kappa", st.kappa},   {"xi_max", st.xi_max}};
  out["demand"] = {{"eta", cfg.eta}, {"d_bar", cfg.d_bar}, {"sigma_bar", cfg.sigma_bar}, {"d0", cfg.d0}};
  out["scheme"] = {{"e_cap", s.e_cap},     {"penalty", s.penalty}, {"horizon", s.horizon},
                   {"rate", s.rate},       {"e_max", s.e_max},
                   {"extra_penalty", tp.extra_penalty},
                   {"mechanism", std::string(to_string(tp.mechanism))},
                   {"period1", {{"e_cap", tp.period1.e_cap}, {"penalty", tp.period1.penalty},
                                {"horizon", tp.period1.horizon}, {"e_max", tp.period1.e_max}}},
                   {"period2", {{"e_cap", tp.period2.e_cap}, {"penalty", tp.period2.penalty},
                                {"horizon", tp.period2.horizon}, {"e_max", tp.period2.e_max}}}};
  out["grid"] = {{"n_d", g.n_d},
                 {"n_e", g.n_e},
                 {"n_t", g.n_t},
                 {"delta_d", g.delta_d()},
                 {"delta_e", g.delta_e()},
                 {"delta_t", g.delta_t()},
                 {"price_levels", cfg.grid.price_levels},
                 {"align_cap", cfg.grid.align_cap},
                 {"d_stencil", to_string(cfg.grid.d_stencil)},
                 {"threads", cfg.grid.threads}};
  out["mc"] = {{"n_paths", cfg.n_paths}, {"n_steps", cfg.n_steps},
               {"seed", cfg.seed},       {"threads", cfg.mc_threads},
               {"demand_cells", cfg.table_demand_cells}, {"penalties", cfg.penalties}};
  out["option"] = {{"strike", opt.strike}, {"maturity", opt.maturity}};
  return out;
}

}  // namespace carbon
