#pragma once

#include <functional>
#include <span>
#include <vector>

namespace xyqd {

struct NelderMeadOptions {
  double initial_step = 0.35;
  double diameter_tolerance = 1e-9;
  int max_evals = 5000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization with dimension-adaptive coefficients.
/// Converges when the simplex diameter falls below the tolerance.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opts);

}  // namespace xyqd
