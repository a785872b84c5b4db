#include "xyqd/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace xyqd {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double diameter(const std::vector<std::vector<double>>& simplex) {
  double d = 0.0;
  for (std::size_t i = 0; i < simplex.size(); ++i)
    for (std::size_t j = i + 1; j < simplex.size(); ++j) d = std::max(d, distance(simplex[i], simplex[j]));
  return d;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead needs at least one parameter");
  if (opts.max_evals < static_cast<int>(n) + 1) throw std::invalid_argument("max_evals too small for simplex");

  // Gao & Han adaptive parameters.
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 1.0 / (2.0 * dn);
  const double delta = 1.0 - 1.0 / dn;

  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(std::span<const double>(x));
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opts.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  bool converged = false;

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<std::vector<double>> s2(n + 1);
      std::vector<double> v2(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        s2[i] = std::move(simplex[order[i]]);
        v2[i] = values[order[i]];
      }
      simplex = std::move(s2);
      values = std::move(v2);
    }

    double spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i) spread = std::max(spread, distance(simplex[0], simplex[i]));
    if (spread < opts.diameter_tolerance && diameter(simplex) < opts.diameter_tolerance) {
      converged = true;
      break;
    }
    if (evals >= opts.max_evals) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k];
    for (double& c : centroid) c /= dn;

    const auto& worst = simplex[n];
    for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + alpha * (centroid[k] - worst[k]);
    const double fr = eval(trial);

    if (fr < values[0]) {
      for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + beta * (trial[k] - centroid[k]);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[n] = trial2;
        values[n] = fe;
      } else {
        simplex[n] = trial;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = trial;
      values[n] = fr;
      continue;
    }
    const bool outside = fr < values[n];
    for (std::size_t k = 0; k < n; ++k)
      trial2[k] = outside ? centroid[k] + gamma * (trial[k] - centroid[k]) : centroid[k] - gamma * (centroid[k] - worst[k]);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : values[n])) {
      simplex[n] = trial2;
      values[n] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[0][k] + delta * (simplex[i][k] - simplex[0][k]);
      values[i] = eval(simplex[i]);
    }
  }

  return {simplex[0], values[0], evals, converged};
}

}  // namespace xyqd
