#pragma once

#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "carbon/convergence.hpp"
#include "carbon/grid.hpp"
#include "carbon/monte_carlo.hpp"

namespace carbon {

// Header `t,D,E,value`, one row per node, 17 significant digits, LF endings.
void write_surfaces_csv(std::ostream& out, std::span<const ValueSurface* const> surfaces);
void write_surface_csv(std::ostream& out, const ValueSurface& surface);

// Retained levels of `history` closest to each requested time (duplicates
// removed, increasing time).
std::vector<const ValueSurface*> select_levels(const SurfaceHistory& history,
                                               std::span<const double> times);

nlohmann::json grid_json(const Grid& grid);

// Header `penalty,mean,std_error`.
void write_sweep_csv(std::ostream& out, std::span<const McResult> results);

nlohmann::json report_json(const ErrorReport& report);

}  // namespace carbon
