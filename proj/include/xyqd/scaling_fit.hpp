#pragma once

#include <vector>

#include "xyqd/types.hpp"

namespace xyqd {

struct SizePoint {
  int size = 0;
  double h_c = 0.0;
};

/// h_c(L) = amplitude * exp(-L / decay_length) + asymptote.
struct ScalingFit {
  double amplitude = 0.0;
  double decay_length = 0.0;
  double asymptote = 0.0;
  double rms_residual = 0.0;
  int iterations = 0;
  std::vector<SizePoint> points_used;

  double evaluate(double size) const;
};

class FitError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Damped Gauss-Newton (Levenberg) least squares over (a, b, c).
/// Needs at least four distinct sizes.
ScalingFit fit_exponential_scaling(std::vector<SizePoint> points);

inline double extrapolate_critical_point(const ScalingFit& fit) { return fit.asymptote; }

}  // namespace xyqd
