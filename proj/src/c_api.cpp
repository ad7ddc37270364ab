#include "carbon/carbon.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "carbon/config.hpp"
#include "carbon/convergence.hpp"
#include "carbon/export.hpp"
#include "carbon/monte_carlo.hpp"
#include "carbon/option_pricer.hpp"
#include "carbon/pde_engine.hpp"

struct cb_config {
  carbon::Config cfg;
};

struct cb_history {
  carbon::SurfaceHistory history;
};

namespace {

thread_local std::string last_error;

cb_status fail(cb_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Runs f, translating engine exceptions into status codes.
template <class F>
cb_status guard(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const carbon::DomainError& e) {
    return fail(CB_ERR_DOMAIN, e.what());
  } catch (const carbon::ConfigError& e) {
    return fail(CB_ERR_CONFIG, e.what());
  } catch (const carbon::ConvergenceError& e) {
    return fail(CB_ERR_CONVERGENCE, e.what());
  } catch (const carbon::InstabilityError& e) {
    return fail(CB_ERR_INSTABILITY, e.what());
  } catch (const carbon::MechanismError& e) {
    return fail(CB_ERR_MECHANISM, e.what());
  } catch (const carbon::MissingAllowanceError& e) {
    return fail(CB_ERR_MISSING_ALLOWANCE, e.what());
  } catch (const carbon::GridMismatchError& e) {
    return fail(CB_ERR_GRID_MISMATCH, e.what());
  } catch (const carbon::Error& e) {
    return fail(CB_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CB_ERR_INTERNAL, "unknown error");
  }
}

cb_status copy_out(const std::string& value, char* buf, std::size_t len, std::size_t* needed) {
  if (needed) *needed = value.size() + 1;
  if (!buf) return needed ? CB_OK : fail(CB_ERR_ARGUMENT, "null output buffer");
  if (len < value.size() + 1) return fail(CB_ERR_ARGUMENT, "output buffer too small");
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return CB_OK;
}

cb_history* wrap(carbon::SurfaceHistory h) { return new cb_history{std::move(h)}; }

carbon::SurfaceHistory single_level(const carbon::ValueSurface& s) {
  carbon::SurfaceHistory h(s.grid, s.grid.n_t);
  h.append(s);
  h.finish();
  return h;
}

#define CB_REQUIRE(cond, msg) \
  do {                        \
    if (!(cond)) return fail(CB_ERR_ARGUMENT, msg); \
  } while (0)

}  // namespace

extern "C" {

const char* cb_last_error(void) { return last_error.c_str(); }

const char* cb_status_name(cb_status status) {
  switch (status) {
    case CB_OK: return "ok";
    case CB_ERR_DOMAIN: return "domain error";
    case CB_ERR_CONFIG: return "configuration error";
    case CB_ERR_CONVERGENCE: return "convergence error";
    case CB_ERR_INSTABILITY: return "instability";
    case CB_ERR_MECHANISM: return "mechanism mismatch";
    case CB_ERR_MISSING_ALLOWANCE: return "missing allowance surfaces";
    case CB_ERR_GRID_MISMATCH: return "grid mismatch";
    case CB_ERR_IO: return "i/o error";
    case CB_ERR_ARGUMENT: return "invalid argument";
    case CB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

cb_status cb_config_default(cb_config** out) {
  CB_REQUIRE(out, "null output handle");
  return guard([&] {
    *out = new cb_config{};
    return CB_OK;
  });
}

cb_status cb_config_load(const char* path, cb_config** out) {
  CB_REQUIRE(path && out, "null argument");
  return guard([&] {
    std::ifstream probe(path);
    if (!probe) return fail(CB_ERR_IO, std::string("cannot open ") + path);
    *out = new cb_config{carbon::load_config(path)};
    return CB_OK;
  });
}

cb_status cb_config_parse(const char* text, const char* format, cb_config** out) {
  CB_REQUIRE(text && format && out, "null argument");
  return guard([&] {
    const std::string f = format;
    if (f == "ini") {
      *out = new cb_config{carbon::parse_ini(text)};
    } else if (f == "json") {
      *out = new cb_config{carbon::parse_json(text)};
    } else {
      return fail(CB_ERR_ARGUMENT, "format must be \"ini\" or \"json\"");
    }
    return CB_OK;
  });
}

cb_status cb_config_clone(const cb_config* cfg, cb_config** out) {
  CB_REQUIRE(cfg && out, "null argument");
  return guard([&] {
    *out = new cb_config{*cfg};
    return CB_OK;
  });
}

void cb_config_free(cb_config* cfg) { delete cfg; }

cb_status cb_config_set(cb_config* cfg, const char* section, const char* key, const char* value) {
  CB_REQUIRE(cfg && section && key && value, "null argument");
  return guard([&] {
    cfg->cfg.set(section, key, value);
    return CB_OK;
  });
}

cb_status cb_config_get(const cb_config* cfg, const char* section, const char* key, char* buf,
                        size_t len, size_t* needed) {
  CB_REQUIRE(cfg && section && key, "null argument");
  return guard([&] { return copy_out(cfg->cfg.get(section, key), buf, len, needed); });
}

cb_status cb_config_validate(const cb_config* cfg) {
  CB_REQUIRE(cfg, "null config");
  return guard([&] {
    cfg->cfg.validate();
    return CB_OK;
  });
}

cb_status cb_config_echo_json(const cb_config* cfg, char* buf, size_t len, size_t* needed) {
  CB_REQUIRE(cfg, "null config");
  return guard([&] { return copy_out(carbon::echo(cfg->cfg).dump(2), buf, len, needed); });
}

cb_status cb_active_set(const cb_config* cfg, double a, double d, double* lo, double* hi) {
  CB_REQUIRE(cfg && lo && hi, "null argument");
  return guard([&] {
    cfg->cfg.stack.validate();
    const carbon::ActiveSet s = carbon::active_set(cfg->cfg.stack, a, d);
    *lo = s.lo;
    *hi = s.hi;
    return CB_OK;
  });
}

cb_status cb_electricity_price(const cb_config* cfg, double a, double d, double* out) {
  CB_REQUIRE(cfg && out, "null argument");
  return guard([&] {
    cfg->cfg.stack.validate();
    *out = carbon::electricity_price(cfg->cfg.stack, a, d);
    return CB_OK;
  });
}

cb_status cb_emissions_rate(const cb_config* cfg, double a, double d, double* out) {
  CB_REQUIRE(cfg && out, "null argument");
  return guard([&] {
    cfg->cfg.stack.validate();
    *out = carbon::emissions_rate(cfg->cfg.stack, a, d);
    return CB_OK;
  });
}

cb_status cb_bau_emissions_rate(const cb_config* cfg, double d, double* out) {
  CB_REQUIRE(cfg && out, "null argument");
  return guard([&] {
    cfg->cfg.stack.validate();
    *out = carbon::bau_emissions_rate(cfg->cfg.stack, d);
    return CB_OK;
  });
}

cb_status cb_price_allowance(const cb_config* cfg, int stride, cb_history** out) {
  CB_REQUIRE(cfg && out, "null argument");
  CB_REQUIRE(stride >= 1, "stride must be >= 1");
  return guard([&] {
    const carbon::Config& c = cfg->cfg;
    c.validate();
    carbon::SolveOptions o = c.solve_options();
    o.stride = stride;
    *out = wrap(carbon::solve_single_period(c.scheme(), c.demand(), c.stack, c.allowance_grid(), o));
    return CB_OK;
  });
}

cb_status cb_price_allowance_2p(const cb_config* cfg, int stride, cb_history** alpha1,
                                cb_history** alpha2_at_t1) {
  CB_REQUIRE(cfg, "null config");
  CB_REQUIRE(stride >= 1, "stride must be >= 1");
  return guard([&] {
    const carbon::Config& c = cfg->cfg;
    c.validate();
    carbon::SolveOptions o = c.solve_options();
    o.stride = stride;
    carbon::TwoPeriodSolution sol =
        carbon::solve_two_period(c.two_period(), c.demand(), c.stack, c.two_period_grid(), o);
    if (alpha1) *alpha1 = wrap(std::move(sol.alpha1));
    if (alpha2_at_t1) *alpha2_at_t1 = wrap(single_level(sol.alpha2_at_T1));
    return CB_OK;
  });
}

cb_status cb_price_call(const cb_config* cfg, int stride, cb_history** call, cb_history** allowance) {
  CB_REQUIRE(cfg && call, "null argument");
  CB_REQUIRE(stride >= 1, "stride must be >= 1");
  return guard([&] {
    const carbon::Config& c = cfg->cfg;
    c.validate();
    const carbon::SchemeParams scheme = c.scheme();
    const carbon::Grid grid = c.allowance_grid();
    carbon::SolveOptions full = c.solve_options();
    carbon::SurfaceHistory alpha =
        carbon::solve_single_period(scheme, c.demand(), c.stack, grid, full);
    carbon::SolveOptions o = full;
    o.stride = stride;
    *call = wrap(carbon::solve_call(c.option(), alpha, scheme, c.demand(), c.stack, grid, o));
    if (allowance) *allowance = wrap(std::move(alpha));
    return CB_OK;
  });
}

cb_status cb_history_info(const cb_history* h, cb_grid_info* out) {
  CB_REQUIRE(h && out, "null argument");
  const carbon::Grid& g = h->history.grid();
  *out = {g.n_d, g.n_e, g.n_t, g.xi_max, g.e_max, g.horizon, h->history.size()};
  last_error.clear();
  return CB_OK;
}

cb_status cb_history_level_time(const cb_history* h, size_t level, double* t) {
  CB_REQUIRE(h && t, "null argument");
  CB_REQUIRE(level < h->history.size(), "level out of range");
  *t = h->history.level(level).time;
  last_error.clear();
  return CB_OK;
}

cb_status cb_history_value(const cb_history* h, size_t level, int i, int j, double* out) {
  CB_REQUIRE(h && out, "null argument");
  CB_REQUIRE(level < h->history.size(), "level out of range");
  const carbon::Grid& g = h->history.grid();
  CB_REQUIRE(i >= 0 && i <= g.n_d && j >= 0 && j <= g.n_e, "node out of range");
  *out = h->history.level(level)(i, j);
  last_error.clear();
  return CB_OK;
}

cb_status cb_history_evaluate(const cb_history* h, double t, double d, double e, double* out) {
  CB_REQUIRE(h && out, "null argument");
  return guard([&] {
    *out = h->history.evaluate(t, d, e);
    return CB_OK;
  });
}

cb_status cb_history_write_csv(const cb_history* h, const char* path, const double* times,
                               size_t n_times) {
  CB_REQUIRE(h && path, "null argument");
  return guard([&] {
    std::vector<const carbon::ValueSurface*> levels;
    if (times) {
      levels = carbon::select_levels(h->history, std::span<const double>(times, n_times));
    } else {
      for (const carbon::ValueSurface& s : h->history.levels()) levels.push_back(&s);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) return fail(CB_ERR_IO, std::string("cannot write ") + path);
    carbon::write_surfaces_csv(out, levels);
    out.flush();
    if (!out) return fail(CB_ERR_IO, std::string("write failed: ") + path);
    return CB_OK;
  });
}

cb_status cb_history_write_grid_json(const cb_history* h, const char* path) {
  CB_REQUIRE(h && path, "null argument");
  return guard([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) return fail(CB_ERR_IO, std::string("cannot write ") + path);
    nlohmann::json doc = carbon::grid_json(h->history.grid());
    nlohmann::json times = nlohmann::json::array();
    for (const carbon::ValueSurface& s : h->history.levels()) times.push_back(s.time);
    doc["stride"] = h->history.stride();
    doc["times"] = times;
    out << doc.dump(2) << '\n';
    if (!out) return fail(CB_ERR_IO, std::string("write failed: ") + path);
    return CB_OK;
  });
}

void cb_history_free(cb_history* h) { delete h; }

cb_status cb_simulate_emissions(const cb_config* cfg, const double* penalties, size_t n,
                                cb_mc_result* out) {
  CB_REQUIRE(cfg && penalties && out, "null argument");
  CB_REQUIRE(n >= 1, "need at least one penalty");
  return guard([&] {
    const carbon::Config& c = cfg->cfg;
    c.validate();
    const std::vector<carbon::McResult> r =
        carbon::penalty_sweep(std::span<const double>(penalties, n), c.paths(), c.demand(), c.stack,
                              c.scheme(), c.allowance_grid(), c.solve_options());
    for (size_t k = 0; k < n; ++k) out[k] = {r[k].penalty, r[k].mean_emissions, r[k].std_error};
    return CB_OK;
  });
}

cb_status cb_convergence_study(const cb_config* cfg, int first_level, int last_level,
                               cb_convergence* out) {
  CB_REQUIRE(cfg && out, "null argument");
  CB_REQUIRE(first_level >= 1 && last_level > first_level, "need 1 <= first < last");
  CB_REQUIRE(last_level - first_level < CB_MAX_LEVELS, "too many levels");
  return guard([&] {
    carbon::Config c = cfg->cfg;
    c.validate();
    const std::vector<carbon::RefinementLevel> levels =
        carbon::reference_levels(first_level, last_level);
    // Align e_max on the coarsest mesh; the nested finer meshes inherit it.
    c.grid.n_e = levels.front().n_e;
    const carbon::SchemeParams scheme = c.scheme();
    const carbon::ErrorReport r = carbon::allowance_refinement_study(
        levels, scheme, c.demand(), c.stack, c.solve_options());
    *out = {};
    out->e_max = scheme.e_max;
    out->first_level = first_level;
    out->last_level = last_level;
    out->n_pairs = static_cast<int>(r.err_inf.size());
    for (int k = 0; k < out->n_pairs; ++k) {
      out->mesh_width[k] = r.mesh_width[k];
      out->err_inf[k] = r.err_inf[k];
      out->err_one[k] = r.err_one[k];
    }
    out->rate_inf = r.rate_inf;
    return CB_OK;
  });
}

}  // extern "C"
