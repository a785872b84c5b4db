#include "xyqd/gqd.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "xyqd/nelder_mead.hpp"

namespace xyqd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kReportClamp = 1e-9;

void check_arity(int num_qubits, const MeasurementBasis& basis) {
  if (basis.num_qubits() != num_qubits)
    throw std::domain_error("basis has " + std::to_string(basis.num_qubits()) + " angle pairs for a " +
                            std::to_string(num_qubits) + "-qubit state");
}

// v <- U v on `qubit`.
void apply_to_vector(ComplexVector& v, int n, int qubit, const Eigen::Matrix2cd& u) {
  const std::size_t stride = bit_of(n, qubit);
  const std::size_t dim = static_cast<std::size_t>(v.size());
  for (std::size_t k = 0; k < dim; ++k) {
    if (k & stride) continue;
    const Complex a = v[k];
    const Complex b = v[k | stride];
    v[k] = u(0, 0) * a + u(0, 1) * b;
    v[k | stride] = u(1, 0) * a + u(1, 1) * b;
  }
}

// m <- U^dagger m U on `qubit`.
void conjugate_matrix(ComplexMatrix& m, int n, int qubit, const Eigen::Matrix2cd& u) {
  const std::size_t stride = bit_of(n, qubit);
  const auto dim = static_cast<std::size_t>(m.rows());
  const Eigen::Matrix2cd ud = u.adjoint();
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t k = 0; k < dim; ++k) {
      if (k & stride) continue;
      const Complex a = m(k, c);
      const Complex b = m(k | stride, c);
      m(k, c) = ud(0, 0) * a + ud(0, 1) * b;
      m(k | stride, c) = ud(1, 0) * a + ud(1, 1) * b;
    }
  }
  for (std::size_t k = 0; k < dim; ++k) {
    if (k & stride) continue;
    for (std::size_t r = 0; r < dim; ++r) {
      const Complex a = m(r, k);
      const Complex b = m(r, k | stride);
      m(r, k) = a * u(0, 0) + b * u(1, 0);
      m(r, k | stride) = a * u(0, 1) + b * u(1, 1);
    }
  }
}

double plogp_sum(const double* p, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (p[i] > 0.0) s += p[i] * std::log2(p[i]);
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

}  // namespace

MeasurementBasis MeasurementBasis::from_flat(std::span<const double> flat) {
  if (flat.size() % 2 != 0) throw std::domain_error("flat angle vector must have even length");
  std::vector<AnglePair> a(flat.size() / 2);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = {flat[2 * j], flat[2 * j + 1]};
  return MeasurementBasis(std::move(a));
}

MeasurementBasis MeasurementBasis::uniform(int num_qubits, double theta, double phi) {
  return MeasurementBasis(std::vector<AnglePair>(static_cast<std::size_t>(num_qubits), {theta, phi}));
}

std::vector<double> MeasurementBasis::flat() const {
  std::vector<double> f;
  f.reserve(2 * angles_.size());
  for (const auto& a : angles_) {
    f.push_back(a.theta);
    f.push_back(a.phi);
  }
  return f;
}

MeasurementBasis MeasurementBasis::canonical() const {
  std::vector<AnglePair> out = angles_;
  for (auto& a : out) {
    a.theta = wrap(a.theta, kPi);
    a.phi = wrap(a.phi, 2.0 * kPi);
  }
  return MeasurementBasis(std::move(out));
}

void OptimizerConfig::validate() const {
  if (starts < 1) throw std::domain_error("optimizer starts must be >= 1");
  if (max_evals < 32) throw std::domain_error("optimizer max_evals must be >= 32");
  if (!(simplex_tolerance > 0.0)) throw std::domain_error("optimizer simplex_tolerance must be > 0");
}

Eigen::Matrix2cd rotation_for_qubit(double theta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  Eigen::Matrix2cd r;
  r << Complex{c, 0.0}, s * e, -s * std::conj(e), Complex{c, 0.0};
  return r;
}

ComplexMatrix rotation_operator(const MeasurementBasis& basis) {
  const int n = basis.num_qubits();
  std::vector<Eigen::Matrix2cd> r;
  for (const auto& a : basis.angles()) r.push_back(rotation_for_qubit(a.theta, a.phi));
  const std::size_t dim = dimension_of(n);
  ComplexMatrix out(dim, dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t row = 0; row < dim; ++row) {
      Complex v{1.0, 0.0};
      for (int q = 0; q < n; ++q) {
        const std::size_t b = bit_of(n, q);
        v *= r[q]((row & b) ? 1 : 0, (c & b) ? 1 : 0);
      }
      out(row, c) = v;
    }
  return out;
}

DensityMatrix dephase(const DensityMatrix& rho, const MeasurementBasis& basis) {
  check_arity(rho.num_qubits(), basis);
  const ComplexMatrix r = rotation_operator(basis);
  const ComplexMatrix rotated = r.adjoint() * rho.matrix() * r;
  const ComplexVector diag = rotated.diagonal().real().cast<Complex>();
  ComplexMatrix out = r * diag.asDiagonal() * r.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(rho.num_qubits(), std::move(out));
}

GqdObjective::GqdObjective(const DensityMatrix& rho) : num_qubits_(rho.num_qubits()), rho_(rho.matrix()) {
  double sum_local = 0.0;
  for (int q = 0; q < num_qubits_; ++q) {
    const int keep[] = {q};
    const DensityMatrix local = partial_trace(rho, keep);
    site_states_.push_back(local.matrix());
    sum_local += von_neumann_entropy(local);
  }
  entropy_offset_ = sum_local - von_neumann_entropy(rho);
}

GqdObjective::GqdObjective(const StateVector& psi)
    : num_qubits_(psi.num_qubits()), pure_(true), state_(psi.amplitudes()) {
  double sum_local = 0.0;
  for (int q = 0; q < num_qubits_; ++q) {
    const int keep[] = {q};
    const DensityMatrix local = reduced_state(psi, keep);
    site_states_.push_back(local.matrix());
    sum_local += von_neumann_entropy(local);
  }
  entropy_offset_ = sum_local;
}

double GqdObjective::operator()(std::span<const double> flat) const {
  if (flat.size() != 2 * static_cast<std::size_t>(num_qubits_))
    throw std::domain_error("angle vector length does not match 2 * num_qubits");
  const int n = num_qubits_;
  double local_term = 0.0;  // sum_j sum_l p log p of the rotated single-site diagonals
  std::vector<Eigen::Matrix2cd> rot(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    rot[j] = rotation_for_qubit(flat[2 * j], flat[2 * j + 1]);
    const Eigen::Matrix2cd t = rot[j].adjoint() * site_states_[j] * rot[j];
    const double p[2] = {t(0, 0).real(), t(1, 1).real()};
    local_term += plogp_sum(p, 2);
  }

  double global_term = 0.0;  // sum_k q log q of the rotated global diagonal
  if (pure_) {
    ComplexVector v = state_;
    for (int j = 0; j < n; ++j) apply_to_vector(v, n, j, rot[j].adjoint());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const double p = std::norm(v[k]);
      if (p > 0.0) global_term += p * std::log2(p);
    }
  } else {
    ComplexMatrix m = rho_;
    for (int j = 0; j < n; ++j) conjugate_matrix(m, n, j, rot[j]);
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      const double p = m(k, k).real();
      if (p > 0.0) global_term += p * std::log2(p);
    }
  }
  return local_term - global_term + entropy_offset_;
}

double gqd_objective(const DensityMatrix& rho, const MeasurementBasis& basis) {
  check_arity(rho.num_qubits(), basis);
  return GqdObjective(rho)(basis);
}

double gqd_objective(const StateVector& psi, const MeasurementBasis& basis) {
  check_arity(psi.num_qubits(), basis);
  return GqdObjective(psi)(basis);
}

double gqd_objective_reference(const DensityMatrix& rho, const MeasurementBasis& basis) {
  check_arity(rho.num_qubits(), basis);
  return multipartite_mutual_information(rho) - multipartite_mutual_information(dephase(rho, basis));
}

std::vector<double> start_point(int num_qubits, int index, std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(num_qubits);
  std::vector<double> x(2 * n);
  const AnglePair z{0.0, 0.0};
  const AnglePair xb{kPi / 4.0, 0.0};
  const AnglePair yb{kPi / 4.0, kPi / 2.0};
  const AnglePair tilt{kPi / 8.0, kPi / 4.0};
  auto fill = [&](AnglePair even, AnglePair odd) {
    for (std::size_t j = 0; j < n; ++j) {
      const AnglePair& a = (j % 2 == 0) ? even : odd;
      x[2 * j] = a.theta;
      x[2 * j + 1] = a.phi;
    }
  };
  switch (index) {
    case 0: fill(z, z); break;
    case 1: fill(xb, xb); break;
    case 2: fill(yb, yb); break;
    case 3: fill(z, xb); break;
    case 4: fill(xb, z); break;
    case 5: fill(xb, yb); break;
    case 6: fill(yb, xb); break;
    case 7: fill(tilt, tilt); break;
    default: {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index))));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t j = 0; j < n; ++j) {
        x[2 * j] = kPi * unit(rng);
        x[2 * j + 1] = 2.0 * kPi * unit(rng);
      }
    }
  }
  return x;
}

GQDResult minimize_objective(const GqdObjective& objective, const OptimizerConfig& opt, Execution exec) {
  opt.validate();
  struct Outcome {
    MeasurementBasis basis;
    double value = std::numeric_limits<double>::infinity();
    bool converged = false;
  };
  const int starts = opt.starts;
  std::vector<Outcome> outcomes(static_cast<std::size_t>(starts));
  const NelderMeadOptions nm{0.35, opt.simplex_tolerance, opt.max_evals};
  const Objective f = [&objective](std::span<const double> x) { return objective(x); };

  auto run_start = [&](int s) {
    const auto r = nelder_mead(f, start_point(objective.num_qubits(), s, opt.seed), nm);
    Outcome o;
    o.basis = MeasurementBasis::from_flat(r.x).canonical();
    o.value = objective(o.basis);
    o.converged = r.converged;
    outcomes[static_cast<std::size_t>(s)] = std::move(o);
  };

  if (exec == Execution::parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < starts; ++s) {
      try {
        run_start(s);
      } catch (...) {
#pragma omp critical(xyqd_multistart_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (int s = 0; s < starts; ++s) run_start(s);
  }

  GQDResult result;
  result.starts_used = starts;
  std::size_t best = 0;
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    if (outcomes[s].value < outcomes[best].value) best = s;
    result.best_objective_history.push_back(outcomes[best].value);
  }
  if (!std::isfinite(outcomes[best].value)) throw NumericError("discord objective is not finite");
  result.value = outcomes[best].value;
  if (result.value < 0.0 && result.value > -kReportClamp) result.value = 0.0;
  result.optimal_basis = outcomes[best].basis;
  result.converged = outcomes[best].converged;
  return result;
}

GQDResult global_gqd(const DensityMatrix& rho, const OptimizerConfig& opt, Execution exec) {
  return minimize_objective(GqdObjective(rho), opt, exec);
}

GQDResult global_gqd(const StateVector& psi, const OptimizerConfig& opt, Execution exec) {
  return minimize_objective(GqdObjective(psi), opt, exec);
}

double pairwise_gqd(const StateVector& psi, int i, int j, const OptimizerConfig& opt, Execution exec) {
  if (i == j) throw std::domain_error("pairwise discord needs two distinct qubits");
  const int keep[] = {std::min(i, j), std::max(i, j)};
  return global_gqd(reduced_state(psi, keep), opt, exec).value;
}

CorrelationTriple correlation_triple(const StateVector& psi, const OptimizerConfig& opt,
                                     const CorrelationOptions& copts, Execution exec) {
  const int n = psi.num_qubits();
  if (n < 2) throw std::domain_error("correlation triple needs at least two qubits");
  CorrelationTriple t;
  for (int i = 0; i + 1 < n; ++i) t.nn_pair_sum += pairwise_gqd(psi, i, i + 1, opt, exec);
  if (copts.wrap_pair && n > 2) t.nn_pair_sum += pairwise_gqd(psi, n - 1, 0, opt, exec);
  if (copts.include_total) {
    t.total_gqd = global_gqd(psi, opt, exec).value;
    t.residual = t.total_gqd - t.nn_pair_sum;
  } else {
    t.total_gqd = std::numeric_limits<double>::quiet_NaN();
    t.residual = std::numeric_limits<double>::quiet_NaN();
  }
  return t;
}

}  // namespace xyqd
