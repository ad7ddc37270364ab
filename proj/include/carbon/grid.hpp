#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "carbon/errors.hpp"

namespace carbon {

// Uniform mesh on [0, horizon] x [0, xi_max] x [0, e_max] with nodes
// D_i = i dD, E_j = j dE, t_k = k dt. Counts are cells, so there are n_d + 1
// demand nodes and n_e + 1 emission nodes.
struct Grid {
  int n_d = 0;
  int n_e = 0;
  int n_t = 0;
  double xi_max = 0.0;
  double e_max = 0.0;
  double horizon = 0.0;

  static Grid make(int n_d, int n_e, int n_t, double xi_max, double e_max, double horizon);

  double delta_d() const { return xi_max / n_d; }
  double delta_e() const { return e_max / n_e; }
  double delta_t() const { return horizon / n_t; }
  double d(int i) const { return i == n_d ? xi_max : i * delta_d(); }
  double e(int j) const { return j == n_e ? e_max : j * delta_e(); }
  double t(int k) const { return k == n_t ? horizon : k * delta_t(); }

  int rows() const { return n_d + 1; }
  int cols() const { return n_e + 1; }
  std::size_t size() const { return static_cast<std::size_t>(rows()) * cols(); }
  // E is the contiguous direction.
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * cols() + j; }

  // True when e lies on an E node to within relative rounding.
  bool on_e_node(double e) const;
  // Index of the time level t, which must be a mesh time to within rounding.
  int time_index(double t) const;

  bool operator==(const Grid&) const = default;
};

// Smallest extent >= e_max for which the first positive cap lands on an E
// node of an n_e-cell mesh. Throws ConfigError if any other cap is then
// off-node. Refining n_e by integer factors keeps every cap on a node.
double align_e_max(std::span<const double> caps, double e_max, int n_e);

// Node values at one time level.
struct ValueSurface {
  Grid grid;
  double time = 0.0;
  std::vector<double> values;

  ValueSurface() = default;
  ValueSurface(const Grid& g, double t) : grid(g), time(t), values(g.size(), 0.0) {}

  double& operator()(int i, int j) { return values[grid.index(i, j)]; }
  double operator()(int i, int j) const { return values[grid.index(i, j)]; }
};

// Bilinear interpolation in (d, e). e above e_max reads the top face.
double interpolate(const ValueSurface& s, double d, double e);

// Time levels of a backward solve, kept in increasing time order. A solve
// may retain only every stride-th level; the first and last level are always
// kept.
class SurfaceHistory {
 public:
  SurfaceHistory() = default;
  SurfaceHistory(const Grid& grid, int stride) : grid_(grid), stride_(stride) {}

  const Grid& grid() const { return grid_; }
  int stride() const { return stride_; }
  std::size_t size() const { return levels_.size(); }
  bool empty() const { return levels_.empty(); }
  const ValueSurface& level(std::size_t n) const { return levels_.at(n); }
  const ValueSurface& front() const { return levels_.front(); }
  const ValueSurface& back() const { return levels_.back(); }
  const std::vector<ValueSurface>& levels() const { return levels_; }

  // Latest retained level with time <= t (within rounding).
  const ValueSurface& at_or_below(double t) const;
  // Exact level at time t, or MissingAllowanceError.
  const ValueSurface& exactly_at(double t) const;
  // Bilinear in (d, e) on the level at_or_below(t).
  double evaluate(double t, double d, double e) const;

  // Levels may arrive in either time order; finish() sorts them.
  void append(ValueSurface s) { levels_.push_back(std::move(s)); }
  void finish();

 private:
  Grid grid_;
  int stride_ = 1;
  std::vector<ValueSurface> levels_;
};

}  // namespace carbon
