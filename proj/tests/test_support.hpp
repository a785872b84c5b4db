#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "xyqd/gqd.hpp"

namespace xyqd::testing {

inline StateVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(static_cast<Eigen::Index>(dimension_of(n)));
  for (auto& a : v) a = Complex{g(rng), g(rng)};
  v.normalize();
  return StateVector(v);
}

/// Haar-ish unitary from the QR of a complex Gaussian matrix.
inline ComplexMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex{g(rng), g(rng)};
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

/// Mixed state of rank `rank` on n qubits.
inline DensityMatrix random_density(int n, int rank, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  double total = 0.0;
  std::vector<double> w(static_cast<std::size_t>(rank));
  for (auto& x : w) total += (x = u(rng));
  for (int r = 0; r < rank; ++r) {
    const auto psi = random_state(n, rng).amplitudes();
    rho += (w[static_cast<std::size_t>(r)] / total) * psi * psi.adjoint();
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(n, rho);
}

inline MeasurementBasis random_basis(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<AnglePair> a(static_cast<std::size_t>(n));
  for (auto& p : a) p = {std::numbers::pi * u(rng), 2.0 * std::numbers::pi * u(rng)};
  return MeasurementBasis(a);
}

inline StateVector ghz(int n) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dimension_of(n)));
  v[0] = v[v.size() - 1] = 1.0 / std::sqrt(2.0);
  return StateVector(v);
}

inline StateVector bell() { return ghz(2); }

/// Kronecker product, first argument is the more significant factor.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace xyqd::testing
