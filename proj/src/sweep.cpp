#include "xyqd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

namespace xyqd {

double value_of(const SweepPoint& p, Quantity q) {
  switch (q) {
    case Quantity::total_gqd: return p.total_gqd;
    case Quantity::nn_pair_sum: return p.nn_pair_sum;
    case Quantity::residual: return p.residual;
    case Quantity::ground_energy: return p.ground_energy;
    case Quantity::fidelity_to_prev: return p.fidelity_to_prev;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> make_grid(double min, double max, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::domain_error("grid step must be positive");
  if (!(max >= min)) throw std::domain_error("grid max must be >= min");
  const auto count = static_cast<long>(std::floor((max - min) / step + 0.5)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) grid.push_back(min + static_cast<double>(i) * step);
  return grid;
}

PointEvaluation evaluate_point(const ChainParams& p, const OptimizerConfig& opt, const CorrelationOptions& copts,
                               Execution exec) {
  PointEvaluation out;
  out.ground = ground_state(build_xy_hamiltonian(p));
  out.triple = correlation_triple(out.ground.state, opt, copts, exec);
  return out;
}

SweepSeries sweep_field(const ChainShape& params, const std::vector<double>& grid, const OptimizerConfig& opt,
                        const CorrelationOptions& copts, Execution exec) {
  if (grid.empty()) throw std::domain_error("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::domain_error("sweep grid must be strictly increasing");
  params.at(grid.front()).validate();
  opt.validate();

  const auto n = static_cast<long>(grid.size());
  std::vector<PointEvaluation> evals(grid.size());

  // Points own their solves, so the inner optimizer always runs serially.
  auto run = [&](long i) {
    try {
      evals[static_cast<std::size_t>(i)] = evaluate_point(params.at(grid[i]), opt, copts, Execution::serial);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "sweep failed at h = " << grid[i] << ": " << e.what();
      throw NumericError(msg.str());
    }
  };

  if (exec == Execution::parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
      try {
        run(i);
      } catch (...) {
#pragma omp critical(xyqd_sweep_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (long i = 0; i < n; ++i) run(i);
  }

  SweepSeries series{params, grid, {}};
  series.points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& e = evals[i];
    SweepPoint p;
    p.h = grid[i];
    p.total_gqd = e.triple.total_gqd;
    p.nn_pair_sum = e.triple.nn_pair_sum;
    p.residual = e.triple.residual;
    p.ground_energy = e.ground.energy;
    p.degenerate = e.ground.degenerate;
    p.fidelity_to_prev = i == 0 ? 1.0 : state_fidelity(evals[i - 1].ground.state, e.ground.state);
    series.points.push_back(p);
  }
  return series;
}

std::vector<std::pair<double, double>> numerical_derivative(const SweepSeries& series, Quantity q) {
  const auto& h = series.grid;
  const std::size_t n = h.size();
  if (n < 3 || series.points.size() != n) throw std::domain_error("derivative needs at least three grid points");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = value_of(series.points[i], q);
  std::vector<std::pair<double, double>> out(n);
  out[0] = {h[0], (y[1] - y[0]) / (h[1] - h[0])};
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = {h[i], (y[i + 1] - y[i - 1]) / (h[i + 1] - h[i - 1])};
  out[n - 1] = {h[n - 1], (y[n - 1] - y[n - 2]) / (h[n - 1] - h[n - 2])};
  return out;
}

std::vector<SuddenChange> detect_sudden_changes(const SweepSeries& series, Quantity q,
                                                const SuddenChangeThresholds& t) {
  const std::size_t n = series.points.size();
  if (n < 4) throw std::domain_error("sudden-change detection needs at least four grid points");
  std::vector<double> steps;
  steps.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = value_of(series.points[i + 1], q) - value_of(series.points[i], q);
    if (std::isfinite(d)) steps.push_back(std::abs(d));
  }
  if (steps.empty()) return {};
  std::vector<double> sorted = steps;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  const double threshold = std::max(t.jump_factor * median, t.absolute_floor);

  std::vector<SuddenChange> out;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& right = series.points[i + 1];
    const double d = value_of(right, q) - value_of(series.points[i], q);
    if (!std::isfinite(d)) continue;
    if (std::abs(d) > threshold && right.fidelity_to_prev < t.fidelity_threshold)
      out.push_back({series.points[i].h, right.h, d, 1.0 - right.fidelity_to_prev});
  }
  return out;
}

MaximumEstimate find_maximum(const std::vector<double>& h, const std::vector<double>& y) {
  const std::size_t n = h.size();
  if (n < 3 || y.size() != n) throw std::domain_error("maximum search needs at least three points");
  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i)
    if (std::isfinite(y[i]) && (best == n || y[i] > y[best])) best = i;
  if (best == n) throw std::domain_error("series has no finite values");
  if (best == 0 || best == n - 1) return {h[best], y[best], true};
  if (!std::isfinite(y[best - 1]) || !std::isfinite(y[best + 1])) return {h[best], y[best], false};

  const double x0 = h[best - 1], x1 = h[best], x2 = h[best + 1];
  const double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (den == 0.0) return {x1, y1, false};
  const double xs = std::clamp(x1 - 0.5 * num / den, x0, x2);
  // Lagrange form of the same parabola.
  const double value = y0 * (xs - x1) * (xs - x2) / ((x0 - x1) * (x0 - x2)) +
                       y1 * (xs - x0) * (xs - x2) / ((x1 - x0) * (x1 - x2)) +
                       y2 * (xs - x0) * (xs - x1) / ((x2 - x0) * (x2 - x1));
  return {xs, value, false};
}

MaximumEstimate find_maximum(const SweepSeries& series, Quantity q) {
  std::vector<double> y;
  y.reserve(series.points.size());
  for (const auto& p : series.points) y.push_back(value_of(p, q));
  return find_maximum(series.grid, y);
}

}  // namespace xyqd
