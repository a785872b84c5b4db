#include "xyqd/scaling_fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace xyqd {

double ScalingFit::evaluate(double size) const { return amplitude * std::exp(-size / decay_length) + asymptote; }

namespace {

constexpr int kMaxIterations = 200;
constexpr double kGradientTolerance = 1e-12;

struct Model {
  const std::vector<SizePoint>& pts;

  double cost(const Eigen::Vector3d& p) const {
    double s = 0.0;
    for (const auto& q : pts) {
      const double r = p[0] * std::exp(-q.size / p[1]) + p[2] - q.h_c;
      s += r * r;
    }
    return 0.5 * s;
  }

  void linearize(const Eigen::Vector3d& p, Eigen::MatrixXd& jac, Eigen::VectorXd& res) const {
    const auto m = static_cast<Eigen::Index>(pts.size());
    jac.resize(m, 3);
    res.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double size = pts[static_cast<std::size_t>(i)].size;
      const double e = std::exp(-size / p[1]);
      res[i] = p[0] * e + p[2] - pts[static_cast<std::size_t>(i)].h_c;
      jac(i, 0) = e;
      jac(i, 1) = p[0] * e * size / (p[1] * p[1]);
      jac(i, 2) = 1.0;
    }
  }
};

}  // namespace

ScalingFit fit_exponential_scaling(std::vector<SizePoint> points) {
  if (points.size() < 4) throw std::domain_error("exponential fit needs at least four points");
  std::sort(points.begin(), points.end(), [](const SizePoint& a, const SizePoint& b) { return a.size < b.size; });
  std::set<int> sizes;
  for (const auto& p : points) {
    if (!std::isfinite(p.h_c)) throw std::domain_error("non-finite critical point in fit input");
    if (!sizes.insert(p.size).second) throw std::domain_error("fit input sizes must be distinct");
  }

  const Model model{points};
  const double b0 = 2.0;
  const double c0 = points.back().h_c;
  const double a0 = (points.front().h_c - c0) * std::exp(points.front().size / b0);
  Eigen::Vector3d p(a0, b0, c0);

  Eigen::MatrixXd jac;
  Eigen::VectorXd res;
  model.linearize(p, jac, res);
  double cost = 0.5 * res.squaredNorm();
  Eigen::Matrix3d jtj = jac.transpose() * jac;
  double lambda = 1e-3 * std::max(jtj.diagonal().maxCoeff(), 1e-12);

  int it = 0;
  for (; it < kMaxIterations; ++it) {
    const Eigen::Vector3d grad = jac.transpose() * res;
    if (grad.norm() < kGradientTolerance) break;

    bool accepted = false;
    while (lambda < 1e20) {
      const Eigen::Matrix3d damped = jtj + lambda * Eigen::Matrix3d::Identity();
      const Eigen::LDLT<Eigen::Matrix3d> ldlt(damped);
      if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        std::ostringstream msg;
        msg << "singular normal equations (lambda " << lambda << ", reciprocal condition " << ldlt.rcond() << ")";
        throw FitError(msg.str());
      }
      const Eigen::Vector3d step = -ldlt.solve(grad);
      if (!step.allFinite()) throw FitError("non-finite Gauss-Newton step");
      const Eigen::Vector3d trial = p + step;
      if (trial[1] > 0.0) {
        const double trial_cost = model.cost(trial);
        if (trial_cost < cost) {
          p = trial;
          cost = trial_cost;
          lambda = std::max(lambda / 3.0, 1e-15);
          accepted = true;
          break;
        }
      }
      lambda *= 4.0;
    }
    if (!accepted) break;  // no descent direction left at machine precision
    model.linearize(p, jac, res);
    jtj = jac.transpose() * jac;
  }

  ScalingFit fit;
  fit.amplitude = p[0];
  fit.decay_length = p[1];
  fit.asymptote = p[2];
  fit.iterations = it;
  model.linearize(p, jac, res);
  fit.rms_residual = std::sqrt(res.squaredNorm() / static_cast<double>(res.size()));
  fit.points_used = std::move(points);
  return fit;
}

}  // namespace xyqd
