#pragma once

#include "carbon/convergence.hpp"
#include "carbon/grid.hpp"
#include "carbon/market_scheme.hpp"

namespace fixture {

// Reference scheme with e_max aligned so the cap sits on an E node of the
// level-1 mesh (and therefore of every finer reference level).
inline carbon::SchemeParams reference_scheme() {
  carbon::SchemeParams s;
  const double caps[] = {s.e_cap};
  s.e_max = carbon::align_e_max(caps, s.e_max, 100);
  return s;
}

inline carbon::Grid reference_grid(int level, const carbon::SchemeParams& s = reference_scheme()) {
  const carbon::RefinementLevel l = carbon::reference_levels(level, level).front();
  return carbon::Grid::make(l.n_d, l.n_e, l.n_t, 30000.0, s.e_max, s.horizon);
}

}  // namespace fixture
