#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace xyqd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Computational basis convention used everywhere: qubit 0 is the most
// significant bit of the basis index, and sigma_z|0> = +|0>.
inline std::size_t bit_of(int num_qubits, int qubit) {
  return std::size_t{1} << (num_qubits - 1 - qubit);
}

inline std::size_t dimension_of(int num_qubits) { return std::size_t{1} << num_qubits; }

/// Serial paths are the reference implementations; parallel paths must
/// reproduce them bit for bit.
enum class Execution { serial, parallel };

// Raised when a solver cannot produce a trustworthy result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xyqd
