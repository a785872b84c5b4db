#pragma once

#include "xyqd/types.hpp"

namespace xyqd {

inline constexpr int kMinSites = 2;
inline constexpr int kMaxSites = 12;

/// Physical instance of the periodic XY chain.
struct ChainParams {
  int num_sites = 0;
  double coupling = 1.0;
  double anisotropy = 0.0;
  double field = 0.0;

  /// Throws std::domain_error naming the offending field.
  void validate() const;

  friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

enum class Axis { x, y, z };

/// Dense Hermitian operator on a register of qubits.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  HermitianOperator(int num_qubits, ComplexMatrix entries);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& matrix() const { return entries_; }

  /// Largest entrywise |A - A^dagger|.
  double hermiticity_defect() const;

 private:
  int num_qubits_ = 0;
  ComplexMatrix entries_;
};

/// sigma^axis on `site`, identity elsewhere.
HermitianOperator pauli_site_operator(int num_qubits, int site, Axis axis);

/// H = -sum_i { J/2 [(1+g) X_i X_{i+1} + (1-g) Y_i Y_{i+1}] + h Z_i }, i+1 mod L.
///
/// The bond sum runs over all L values of i exactly as written, so for L = 2
/// the single pair is counted twice.
HermitianOperator build_xy_hamiltonian(const ChainParams& p);

/// Product of sigma^z over all sites; diagonal with entries (-1)^popcount(k).
HermitianOperator parity_operator(int num_qubits);

}  // namespace xyqd
