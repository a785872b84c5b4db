#pragma once

#include <span>
#include <vector>

#include "xyqd/spin_model.hpp"

namespace xyqd {

/// Normalized pure state of `num_qubits` qubits.
class StateVector {
 public:
  StateVector() = default;
  /// Throws std::domain_error if the length is not a power of two or the
  /// norm differs from one by more than 1e-10.
  explicit StateVector(ComplexVector amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  /// Computational basis state |bits>, bits[0] being qubit 0.
  static StateVector basis(std::span<const int> bits);

 private:
  int num_qubits_ = 0;
  ComplexVector amplitudes_;
};

/// Dense density matrix. Construction checks shape, Hermiticity and trace;
/// positivity is checked by validate() or lazily by the entropy routines.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(int num_qubits, ComplexMatrix entries);

  static DensityMatrix from_pure(const StateVector& psi);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& matrix() const { return entries_; }

  /// Full invariant check including eigenvalues >= -1e-10.
  void validate() const;

 private:
  int num_qubits_ = 0;
  ComplexMatrix entries_;
};

inline constexpr double kDegeneracyTolerance = 1e-9;
inline constexpr double kNegativeEigenvalueTolerance = 1e-10;

struct GroundStateResult {
  double energy = 0.0;
  StateVector state;
  double gap_to_next = 0.0;
  bool degenerate = false;
};

/// Lowest eigenpair from a full dense eigendecomposition.
///
/// Operators that commute with the global sigma^z parity are diagonalized
/// sector by sector, which yields a ground state of definite parity even at
/// exact crossings; the even sector wins exact ties. Real operators go
/// through the real symmetric solver. The global phase is fixed so the
/// largest-magnitude amplitude is real and positive.
GroundStateResult ground_state(const HermitianOperator& h);

/// Full ascending spectrum (used for crossing and degeneracy diagnostics).
std::vector<double> spectrum(const HermitianOperator& h);

/// Reduced state on `keep` (strictly increasing qubit indices), order preserved.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Same as partial_trace(from_pure(psi), keep) without forming |psi><psi|.
DensityMatrix reduced_state(const StateVector& psi, std::span<const int> keep);

/// Entropy in bits of a probability vector; 0 log 0 = 0.
double shannon_entropy(std::span<const double> probabilities);

/// Von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho);

/// I = sum_k S(rho_k) - S(rho) with single-qubit parts.
double multipartite_mutual_information(const DensityMatrix& rho);

/// |<psi|phi>|.
double state_fidelity(const StateVector& psi, const StateVector& phi);

}  // namespace xyqd
