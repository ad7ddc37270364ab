#include "carbon/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace carbon {

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void write_surfaces_csv(std::ostream& out, std::span<const ValueSurface* const> surfaces) {
  out << "t,D,E,value\n";
  for (const ValueSurface* s : surfaces) {
    const Grid& g = s->grid;
    for (int i = 0; i <= g.n_d; ++i) {
      for (int j = 0; j <= g.n_e; ++j) {
        put(out, s->time);
        out << ',';
        put(out, g.d(i));
        out << ',';
        put(out, g.e(j));
        out << ',';
        put(out, (*s)(i, j));
        out << '\n';
      }
    }
  }
}

void write_surface_csv(std::ostream& out, const ValueSurface& surface) {
  const ValueSurface* one[] = {&surface};
  write_surfaces_csv(out, one);
}

std::vector<const ValueSurface*> select_levels(const SurfaceHistory& history,
                                               std::span<const double> times) {
  if (history.empty()) throw MissingAllowanceError("select_levels: empty history");
  std::vector<const ValueSurface*> out;
  for (double t : times) {
    const ValueSurface* best = &history.front();
    for (const ValueSurface& s : history.levels())
      if (std::abs(s.time - t) < std::abs(best->time - t)) best = &s;
    out.push_back(best);
  }
  std::sort(out.begin(), out.end(),
            [](const ValueSurface* a, const ValueSurface* b) { return a->time < b->time; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

nlohmann::json grid_json(const Grid& g) {
  return {{"n_d", g.n_d},         {"n_e", g.n_e},         {"n_t", g.n_t},
          {"xi_max", g.xi_max},   {"e_max", g.e_max},     {"horizon", g.horizon},
          {"delta_d", g.delta_d()}, {"delta_e", g.delta_e()}, {"delta_t", g.delta_t()},
          {"layout", "rows D_i = i delta_d, columns E_j = j delta_e"}};
}

void write_sweep_csv(std::ostream& out, std::span<const McResult> results) {
  out << "penalty,mean,std_error\n";
  for (const McResult& r : results) {
    put(out, r.penalty);
    out << ',';
    put(out, r.mean_emissions);
    out << ',';
    put(out, r.std_error);
    out << '\n';
  }
}

nlohmann::json report_json(const ErrorReport& report) {
  nlohmann::json levels = nlohmann::json::array();
  for (const RefinementLevel& l : report.levels)
    levels.push_back({{"level", l.label}, {"n_d", l.n_d}, {"n_e", l.n_e}, {"n_t", l.n_t}});
  return {{"levels", levels},
          {"mesh_width", report.mesh_width},
          {"err_inf", report.err_inf},
          {"err_one", report.err_one},
          {"rate_inf", report.rate_inf}};
}

}  // namespace carbon
