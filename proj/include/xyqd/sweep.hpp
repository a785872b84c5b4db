#pragma once

#include <utility>
#include <vector>

#include "xyqd/gqd.hpp"

namespace xyqd {

struct SweepPoint {
  double h = 0.0;
  double total_gqd = 0.0;
  double nn_pair_sum = 0.0;
  double residual = 0.0;
  double ground_energy = 0.0;
  double fidelity_to_prev = 1.0;
  bool degenerate = false;
};

/// Chain parameters with the field left free.
struct ChainShape {
  int num_sites = 0;
  double coupling = 1.0;
  double anisotropy = 0.0;

  ChainParams at(double h) const { return {num_sites, coupling, anisotropy, h}; }
  friend bool operator==(const ChainShape&, const ChainShape&) = default;
};

struct SweepSeries {
  ChainShape params;
  std::vector<double> grid;
  std::vector<SweepPoint> points;
};

enum class Quantity { total_gqd, nn_pair_sum, residual, ground_energy, fidelity_to_prev };

double value_of(const SweepPoint& p, Quantity q);

/// Uniform grid min, min + step, ..., up to max inclusive (half-step slack).
std::vector<double> make_grid(double min, double max, double step);

/// One full evaluation at a single field value.
struct PointEvaluation {
  GroundStateResult ground;
  CorrelationTriple triple;
};

PointEvaluation evaluate_point(const ChainParams& p, const OptimizerConfig& opt, const CorrelationOptions& copts = {},
                               Execution exec = Execution::parallel);

/// Field sweep. Grid points run concurrently under Execution::parallel; the
/// adjacent-state fidelities are filled in a sequential pass afterwards.
SweepSeries sweep_field(const ChainShape& params, const std::vector<double>& grid, const OptimizerConfig& opt,
                        const CorrelationOptions& copts = {}, Execution exec = Execution::parallel);

/// Central differences inside, one-sided at the ends.
std::vector<std::pair<double, double>> numerical_derivative(const SweepSeries& series, Quantity q);

struct SuddenChange {
  double h_left = 0.0;
  double h_right = 0.0;
  double jump = 0.0;
  double fidelity_drop = 0.0;
};

struct SuddenChangeThresholds {
  double jump_factor = 5.0;
  double absolute_floor = 1e-3;
  double fidelity_threshold = 0.99;
};

/// Adjacent pairs whose jump is both large relative to the median step and
/// accompanied by a ground-state fidelity collapse. Sorted by h.
std::vector<SuddenChange> detect_sudden_changes(const SweepSeries& series, Quantity q,
                                                const SuddenChangeThresholds& t = {});

struct MaximumEstimate {
  double h_max = 0.0;
  double value = 0.0;
  bool at_boundary = false;
};

/// Global maximum grid point refined by a parabola through it and its neighbours.
MaximumEstimate find_maximum(const SweepSeries& series, Quantity q);
MaximumEstimate find_maximum(const std::vector<double>& h, const std::vector<double>& y);

}  // namespace xyqd
