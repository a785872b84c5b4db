#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "xyqd/quantum_core.hpp"

namespace xyqd {

/// Local measurement direction of one qubit.
struct AnglePair {
  double theta = 0.0;
  double phi = 0.0;
  friend bool operator==(const AnglePair&, const AnglePair&) = default;
};

/// One rotation per measured qubit; projectors are R|k><k|R^dagger with
/// R the tensor product of the per-qubit rotations.
class MeasurementBasis {
 public:
  MeasurementBasis() = default;
  explicit MeasurementBasis(std::vector<AnglePair> angles) : angles_(std::move(angles)) {}

  /// Flat (theta_0, phi_0, theta_1, phi_1, ...) layout used by the optimizer.
  static MeasurementBasis from_flat(std::span<const double> flat);
  static MeasurementBasis uniform(int num_qubits, double theta, double phi);

  int num_qubits() const { return static_cast<int>(angles_.size()); }
  const std::vector<AnglePair>& angles() const { return angles_; }
  std::vector<double> flat() const;

  /// theta into [0, pi), phi into [0, 2 pi). R(theta + pi) = -R(theta), so
  /// the projectors are unchanged.
  MeasurementBasis canonical() const;

 private:
  std::vector<AnglePair> angles_;
};

struct OptimizerConfig {
  int starts = 24;
  std::uint64_t seed = 1;
  int max_evals = 5000;
  double simplex_tolerance = 1e-9;

  void validate() const;
  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

/// Number of deterministic starts placed before the seeded random ones.
inline constexpr int kStructuredStarts = 8;

struct GQDResult {
  double value = 0.0;
  MeasurementBasis optimal_basis;
  int starts_used = 0;
  /// Running minimum after each start, in start order.
  std::vector<double> best_objective_history;
  bool converged = false;
};

struct CorrelationTriple {
  double total_gqd = 0.0;
  double nn_pair_sum = 0.0;
  double residual = 0.0;
};

struct CorrelationOptions {
  /// Adds D(A_L : A_1) to the nearest-neighbour sum.
  bool wrap_pair = false;
  /// When false only the pair sum is evaluated; total and residual are NaN.
  bool include_total = true;
};

/// cos(t) I + i sin(t) cos(p) sigma_y + i sin(t) sin(p) sigma_x.
Eigen::Matrix2cd rotation_for_qubit(double theta, double phi);

/// Dense tensor product of the per-qubit rotations (test and reference use).
ComplexMatrix rotation_operator(const MeasurementBasis& basis);

/// Phi(rho) = sum_k Pi_k rho Pi_k.
DensityMatrix dephase(const DensityMatrix& rho, const MeasurementBasis& basis);

/// Rotated-diagonal evaluation of the discord objective for a fixed basis.
double gqd_objective(const DensityMatrix& rho, const MeasurementBasis& basis);
/// Pure-state path: O(L 2^L) per evaluation.
double gqd_objective(const StateVector& psi, const MeasurementBasis& basis);
/// I(rho) - I(Phi(rho)) through explicit dephasing and eigendecompositions.
double gqd_objective_reference(const DensityMatrix& rho, const MeasurementBasis& basis);

/// Precomputed objective. The basis-independent entropies are evaluated once.
class GqdObjective {
 public:
  explicit GqdObjective(const DensityMatrix& rho);
  explicit GqdObjective(const StateVector& psi);

  int num_qubits() const { return num_qubits_; }
  double operator()(std::span<const double> flat_angles) const;
  double operator()(const MeasurementBasis& basis) const { return (*this)(basis.flat()); }

 private:
  int num_qubits_ = 0;
  bool pure_ = false;
  ComplexVector state_;
  ComplexMatrix rho_;
  std::vector<Eigen::Matrix2cd> site_states_;
  double entropy_offset_ = 0.0;  // sum_j S(rho_j) - S(rho_T)
};

/// Start point `index` of the multistart schedule (structured, then random).
std::vector<double> start_point(int num_qubits, int index, std::uint64_t seed);

/// Multistart minimization of the objective over all 2L angles.
GQDResult minimize_objective(const GqdObjective& objective, const OptimizerConfig& opt,
                             Execution exec = Execution::parallel);

GQDResult global_gqd(const DensityMatrix& rho, const OptimizerConfig& opt, Execution exec = Execution::parallel);
GQDResult global_gqd(const StateVector& psi, const OptimizerConfig& opt, Execution exec = Execution::parallel);

/// Discord of the two-qubit reduced state on (i, j).
double pairwise_gqd(const StateVector& psi, int i, int j, const OptimizerConfig& opt,
                    Execution exec = Execution::parallel);

CorrelationTriple correlation_triple(const StateVector& psi, const OptimizerConfig& opt,
                                     const CorrelationOptions& copts = {}, Execution exec = Execution::parallel);

}  // namespace xyqd
