#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>

#include "xyqd/sweep.hpp"

using namespace xyqd;

namespace {

SweepSeries synthetic(const std::vector<double>& h, const std::vector<double>& y,
                      const std::vector<double>& fidelity = {}) {
  SweepSeries s;
  s.params = {3, 1.0, 0.5};
  s.grid = h;
  for (std::size_t i = 0; i < h.size(); ++i) {
    SweepPoint p;
    p.h = h[i];
    p.total_gqd = y[i];
    p.nn_pair_sum = y[i];
    p.residual = 0.0;
    p.fidelity_to_prev = fidelity.empty() ? 1.0 : fidelity[i];
    s.points.push_back(p);
  }
  return s;
}

OptimizerConfig quick(int starts = 8) {
  OptimizerConfig o;
  o.starts = starts;
  return o;
}

}  // namespace

TEST_CASE("grid construction") {
  const auto g = make_grid(0.0, 1.5, 0.01);
  CHECK(g.size() == 151);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(1.5));
  CHECK(make_grid(0.2, 0.2, 0.1).size() == 1);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("single-point sweep") {
  const auto s = sweep_field({3, 1.0, 0.5}, {0.3}, quick());
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].fidelity_to_prev == 1.0);
  CHECK(s.points[0].residual == s.points[0].total_gqd - s.points[0].nn_pair_sum);
}

TEST_CASE("sweep rejects bad grids") {
  CHECK_THROWS_AS(sweep_field({3, 1.0, 0.5}, {}, quick()), std::domain_error);
  CHECK_THROWS_AS(sweep_field({3, 1.0, 0.5}, {0.2, 0.2}, quick()), std::domain_error);
  CHECK_THROWS_AS(sweep_field({3, 1.0, 0.5}, {0.3, 0.1}, quick()), std::domain_error);
}

TEST_CASE("sweep records and reproducibility") {
  const ChainShape shape{4, 1.0, std::sin(std::numbers::pi / 3)};
  const auto grid = make_grid(0.3, 0.7, 0.05);
  const auto serial = sweep_field(shape, grid, quick(), {}, Execution::serial);
  for (const auto& p : serial.points) {
    CHECK(p.residual == p.total_gqd - p.nn_pair_sum);
    CHECK(p.fidelity_to_prev >= 0.0);
    CHECK(p.fidelity_to_prev <= 1.0);
  }
  for (int threads : {1, 3}) {
    omp_set_num_threads(threads);
    const auto par = sweep_field(shape, grid, quick(), {}, Execution::parallel);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(par.points[i].total_gqd == serial.points[i].total_gqd);
      CHECK(par.points[i].nn_pair_sum == serial.points[i].nn_pair_sum);
      CHECK(par.points[i].ground_energy == serial.points[i].ground_energy);
      CHECK(par.points[i].fidelity_to_prev == serial.points[i].fidelity_to_prev);
    }
  }
}

TEST_CASE("numerical derivative") {
  const auto h = make_grid(0.0, 1.0, 0.1);
  std::vector<double> lin, quad;
  for (double x : h) {
    lin.push_back(2.0 * x);
    quad.push_back(x * x);
  }
  for (const auto& [x, d] : numerical_derivative(synthetic(h, lin), Quantity::total_gqd))
    CHECK(d == doctest::Approx(2.0).epsilon(1e-12));
  const auto dq = numerical_derivative(synthetic(h, quad), Quantity::total_gqd);
  CHECK(dq[5].first == 0.5);
  CHECK(std::abs(dq[5].second - 1.0) < 1e-12);
  CHECK_THROWS_AS(numerical_derivative(synthetic({0.0, 0.1}, {1.0, 2.0}), Quantity::total_gqd), std::domain_error);
}

TEST_CASE("sudden changes need a jump and a fidelity collapse") {
  const auto h = make_grid(0.0, 1.0, 0.05);
  std::vector<double> y, fid(h.size(), 1.0);
  for (double x : h) y.push_back(0.1 * x + (x > 0.62 ? 0.5 : 0.0) + (x > 0.32 ? 0.3 : 0.0));
  fid[7] = 0.0;   // jump at 0.35 with crossing
  fid[13] = 0.1;  // jump at 0.65 with crossing
  auto found = detect_sudden_changes(synthetic(h, y, fid), Quantity::total_gqd);
  REQUIRE(found.size() == 2);
  CHECK(found[0].h_left == doctest::Approx(0.30));
  CHECK(found[1].h_right == doctest::Approx(0.65));
  CHECK(found[1].jump == doctest::Approx(0.505));
  CHECK(found[1].fidelity_drop == doctest::Approx(0.9));

  // Jump without a crossing is ignored.
  fid[13] = 1.0;
  CHECK(detect_sudden_changes(synthetic(h, y, fid), Quantity::total_gqd).size() == 1);

  // Crossing without a jump is ignored.
  std::vector<double> smooth;
  for (double x : h) smooth.push_back(0.1 * x);
  CHECK(detect_sudden_changes(synthetic(h, smooth, fid), Quantity::total_gqd).empty());

  CHECK(detect_sudden_changes(synthetic(h, std::vector<double>(h.size(), 0.4), fid), Quantity::total_gqd).empty());
  CHECK_THROWS_AS(detect_sudden_changes(synthetic({0, 1, 2}, {0, 1, 2}), Quantity::total_gqd), std::domain_error);
}

TEST_CASE("sudden-change detection is shift invariant") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = make_grid(0.0, 1.0, 0.04);
    std::vector<double> y, fid;
    for (std::size_t i = 0; i < h.size(); ++i) {
      y.push_back(u(rng) < 0.1 ? 2.0 * u(rng) : 0.01 * u(rng));
      fid.push_back(u(rng) < 0.3 ? u(rng) : 1.0);
    }
    std::vector<double> shifted = y;
    const double shift = 10.0 * u(rng) - 5.0;
    for (double& v : shifted) v += shift;
    const auto a = detect_sudden_changes(synthetic(h, y, fid), Quantity::total_gqd);
    const auto b = detect_sudden_changes(synthetic(h, shifted, fid), Quantity::total_gqd);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].h_left == b[i].h_left);
  }
}

TEST_CASE("Ising line has no sudden changes") {
  const auto s = sweep_field({4, 1.0, 1.0}, make_grid(0.2, 2.0, 0.05), quick());
  for (std::size_t i = 1; i < s.points.size(); ++i) REQUIRE(s.points[i].fidelity_to_prev > 0.999);
  CHECK(detect_sudden_changes(s, Quantity::total_gqd).empty());
  CHECK(detect_sudden_changes(s, Quantity::nn_pair_sum).empty());
}

TEST_CASE("find_maximum") {
  const auto h = make_grid(0.0, 1.5, 0.1);
  std::vector<double> y;
  for (double x : h) y.push_back(-(x - 0.7) * (x - 0.7));
  const auto m = find_maximum(h, y);
  CHECK(std::abs(m.h_max - 0.7) < 1e-12);
  CHECK_FALSE(m.at_boundary);

  std::vector<double> mono;
  for (double x : h) mono.push_back(x);
  const auto b = find_maximum(h, mono);
  CHECK(b.at_boundary);
  CHECK(b.h_max == h.back());

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> r;
    for (std::size_t i = 0; i < h.size(); ++i) r.push_back(u(rng));
    const auto e = find_maximum(h, r);
    const auto best = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    if (e.at_boundary) continue;
    CHECK(e.h_max >= h[best - 1]);
    CHECK(e.h_max <= h[best + 1]);
  }
  CHECK_THROWS_AS(find_maximum(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 2.0}), std::domain_error);
}

TEST_CASE("derivative of the pair sum peaks at level crossings") {
  // gamma = sin 15 deg, L = 3: the ground state switches parity at the
  // crossings, the rightmost one on h = cos 15 deg.
  const double th = 15.0 * std::numbers::pi / 180.0;
  const auto s = sweep_field({3, 1.0, std::sin(th)}, make_grid(0.0, 1.5, 0.01), quick());
  std::vector<double> crossings;
  for (std::size_t i = 1; i < s.points.size(); ++i)
    if (s.points[i].fidelity_to_prev < 0.5) crossings.push_back(s.grid[i]);
  REQUIRE_FALSE(crossings.empty());
  CHECK(std::abs(crossings.back() - std::cos(th)) <= 0.011);

  const auto d = numerical_derivative(s, Quantity::nn_pair_sum);
  double peak_h = 0.0, peak = 0.0;
  for (const auto& [x, v] : d)
    if (std::abs(v) > peak) peak = std::abs(v), peak_h = x;
  CAPTURE(peak_h);
  bool at_crossing = false;
  for (double c : crossings) at_crossing |= std::abs(peak_h - c) <= 0.011;
  CHECK(at_crossing);
}
