#include <doctest.h>

#include <cmath>
#include <random>

#include "xyqd/scaling_fit.hpp"

using namespace xyqd;

namespace {

std::vector<SizePoint> model_data(double a, double b, double c, int lo = 3, int hi = 10) {
  std::vector<SizePoint> pts;
  for (int size = lo; size <= hi; ++size) pts.push_back({size, a * std::exp(-size / b) + c});
  return pts;
}

}  // namespace

TEST_CASE("recovers exact model parameters") {
  const auto fit = fit_exponential_scaling(model_data(-1.202, 2.294, 1.020));
  CHECK(std::abs(fit.amplitude + 1.202) < 1e-6);
  CHECK(std::abs(fit.decay_length - 2.294) < 1e-6);
  CHECK(std::abs(fit.asymptote - 1.020) < 1e-6);
  CHECK(fit.rms_residual < 1e-10);
  CHECK(fit.points_used.size() == 8);

  const auto f45 = fit_exponential_scaling(model_data(-1.033, 2.5666, 0.955));
  CHECK(extrapolate_critical_point(f45) == doctest::Approx(0.955).epsilon(1e-9));
}

TEST_CASE("noiseless recovery over the parameter box") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> mag(0.2, 2.0), decay(0.5, 10.0), asym(0.0, 2.0), sign(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = (sign(rng) < 0 ? -1.0 : 1.0) * mag(rng);
    const double b = decay(rng);
    const double c = asym(rng);
    const auto fit = fit_exponential_scaling(model_data(a, b, c));
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(c);
    CHECK(std::abs(fit.amplitude - a) < 1e-6);
    CHECK(std::abs(fit.decay_length - b) < 1e-6);
    CHECK(std::abs(fit.asymptote - c) < 1e-6);
  }
}

TEST_CASE("constant data") {
  std::vector<SizePoint> pts;
  for (int size = 3; size <= 10; ++size) pts.push_back({size, 0.8});
  const auto fit = fit_exponential_scaling(pts);
  CHECK(extrapolate_critical_point(fit) == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(std::abs(fit.amplitude * std::exp(-3.0 / fit.decay_length)) < 1e-8);
}

TEST_CASE("rms residual is the root mean square of the fit residuals") {
  auto pts = model_data(-1.0, 2.0, 1.0);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i].h_c += (i % 2 ? 1.0 : -1.0) * 0.003;
  const auto fit = fit_exponential_scaling(pts);
  double s = 0.0;
  for (const auto& p : pts) s += std::pow(fit.evaluate(p.size) - p.h_c, 2);
  CHECK(fit.rms_residual == doctest::Approx(std::sqrt(s / pts.size())).epsilon(1e-12));
  CHECK(fit.rms_residual < 0.004);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(fit_exponential_scaling(model_data(-1.0, 2.0, 1.0, 3, 5)), std::domain_error);
  auto dup = model_data(-1.0, 2.0, 1.0, 3, 6);
  dup[1].size = 3;
  CHECK_THROWS_AS(fit_exponential_scaling(dup), std::domain_error);
}
