#include "xyqd/spin_model.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace xyqd {

void ChainParams::validate() const {
  if (num_sites < kMinSites || num_sites > kMaxSites)
    throw std::domain_error("num_sites must lie in [" + std::to_string(kMinSites) + ", " +
                            std::to_string(kMaxSites) + "], got " + std::to_string(num_sites));
  if (!(anisotropy >= 0.0 && anisotropy <= 1.0))
    throw std::domain_error("anisotropy must lie in [0, 1], got " + std::to_string(anisotropy));
  if (!(field >= 0.0) || !std::isfinite(field))
    throw std::domain_error("field must be finite and >= 0, got " + std::to_string(field));
  if (!std::isfinite(coupling)) throw std::domain_error("coupling must be finite");
}

HermitianOperator::HermitianOperator(int num_qubits, ComplexMatrix entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  if (num_qubits < 1) throw std::domain_error("operator needs at least one qubit");
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  if (entries_.rows() != d || entries_.cols() != d)
    throw std::domain_error("operator shape does not match 2^num_qubits");
}

double HermitianOperator::hermiticity_defect() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator pauli_site_operator(int num_qubits, int site, Axis axis) {
  if (num_qubits < 1) throw std::domain_error("num_qubits must be >= 1");
  if (site < 0 || site >= num_qubits)
    throw std::domain_error("site " + std::to_string(site) + " out of range for " +
                            std::to_string(num_qubits) + " qubits");
  const std::size_t dim = dimension_of(num_qubits);
  const std::size_t mask = bit_of(num_qubits, site);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  const Complex i{0.0, 1.0};
  for (std::size_t k = 0; k < dim; ++k) {
    const bool up = (k & mask) == 0;  // qubit in |0>
    switch (axis) {
      case Axis::z:
        m(k, k) = up ? 1.0 : -1.0;
        break;
      case Axis::x:
        m(k ^ mask, k) = 1.0;
        break;
      case Axis::y:
        // sigma_y|0> = i|1>, sigma_y|1> = -i|0>
        m(k ^ mask, k) = up ? i : -i;
        break;
    }
  }
  return HermitianOperator(num_qubits, std::move(m));
}

HermitianOperator build_xy_hamiltonian(const ChainParams& p) {
  p.validate();
  const int n = p.num_sites;
  const std::size_t dim = dimension_of(n);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  // XX + YY on a bond flips both spins; on |ab> the YY term contributes -1
  // for aligned spins and +1 for anti-aligned ones.
  const double aligned = -0.5 * p.coupling * ((1.0 + p.anisotropy) - (1.0 - p.anisotropy));
  const double anti = -0.5 * p.coupling * ((1.0 + p.anisotropy) + (1.0 - p.anisotropy));
  for (int i = 0; i < n; ++i) {
    const std::size_t a = bit_of(n, i);
    const std::size_t b = bit_of(n, (i + 1) % n);
    for (std::size_t k = 0; k < dim; ++k) {
      const bool same = ((k & a) != 0) == ((k & b) != 0);
      m((k ^ a) ^ b, k) += same ? aligned : anti;
      m(k, k) += -p.field * ((k & a) ? -1.0 : 1.0);
    }
  }
  return HermitianOperator(n, std::move(m));
}

HermitianOperator parity_operator(int num_qubits) {
  if (num_qubits < 1) throw std::domain_error("num_qubits must be >= 1");
  const std::size_t dim = dimension_of(num_qubits);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) m(k, k) = (std::popcount(k) % 2 == 0) ? 1.0 : -1.0;
  return HermitianOperator(num_qubits, std::move(m));
}

}  // namespace xyqd
