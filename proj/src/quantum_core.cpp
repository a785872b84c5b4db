#include "xyqd/quantum_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace xyqd {

namespace {

int log2_exact(std::size_t n) {
  if (n == 0 || !std::has_single_bit(n)) return -1;
  return std::countr_zero(n);
}

void check_keep(int num_qubits, std::span<const int> keep) {
  if (keep.empty()) throw std::domain_error("keep set must be nonempty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= num_qubits)
      throw std::domain_error("qubit index " + std::to_string(keep[i]) + " out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::domain_error("keep set must be strictly increasing");
  }
}

// Splits a full basis index into (kept index, traced-out index).
struct IndexSplit {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> rest;
};

IndexSplit split_indices(int n, std::span<const int> keep) {
  const std::size_t dim = dimension_of(n);
  std::vector<bool> is_kept(n, false);
  for (int q : keep) is_kept[q] = true;
  IndexSplit s{std::vector<std::size_t>(dim), std::vector<std::size_t>(dim)};
  for (std::size_t k = 0; k < dim; ++k) {
    std::size_t a = 0, b = 0;
    for (int q = 0; q < n; ++q) {
      const std::size_t bit = (k & bit_of(n, q)) ? 1 : 0;
      if (is_kept[q]) {
        a = (a << 1) | bit;
      } else {
        b = (b << 1) | bit;
      }
    }
    s.kept[k] = a;
    s.rest[k] = b;
  }
  return s;
}

double entropy_from_eigenvalues(const Eigen::VectorXd& evals) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    double p = evals[i];
    if (p < -kNegativeEigenvalueTolerance)
      throw std::domain_error("density matrix has eigenvalue " + std::to_string(p));
    p = std::clamp(p, 0.0, 1.0);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return std::max(s, 0.0);
}

bool is_real(const ComplexMatrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

bool commutes_with_parity(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (((std::popcount(static_cast<std::size_t>(r)) ^ std::popcount(static_cast<std::size_t>(c))) & 1) &&
          m(r, c) != Complex{0.0, 0.0})
        return false;
  return true;
}

// Eigenpairs of a Hermitian block; eigenvalues ascending.
struct Eigenpairs {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
};

Eigenpairs eigh(const ComplexMatrix& m, bool want_vectors) {
  const int opts = want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  Eigenpairs out;
  if (is_real(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), opts);
    if (es.info() != Eigen::Success)
      throw NumericError("real symmetric eigensolver failed for dimension " + std::to_string(m.rows()));
    out.values = es.eigenvalues();
    if (want_vectors) out.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, opts);
    if (es.info() != Eigen::Success)
      throw NumericError("Hermitian eigensolver failed for dimension " + std::to_string(m.rows()));
    out.values = es.eigenvalues();
    if (want_vectors) out.vectors = es.eigenvectors();
  }
  return out;
}

void fix_phase(ComplexVector& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs + 1e-12) {
      best_abs = a;
      best = i;
    }
  }
  v *= std::conj(v[best]) / std::abs(v[best]);
  v[best] = Complex{std::abs(v[best]), 0.0};
  v.normalize();
}

}  // namespace

StateVector::StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  num_qubits_ = log2_exact(static_cast<std::size_t>(amplitudes_.size()));
  if (num_qubits_ < 1) throw std::domain_error("state length must be a power of two >= 2");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-10)
    throw std::domain_error("state is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
}

StateVector StateVector::basis(std::span<const int> bits) {
  const int n = static_cast<int>(bits.size());
  std::size_t index = 0;
  for (int q = 0; q < n; ++q)
    if (bits[q]) index |= bit_of(n, q);
  ComplexVector v = ComplexVector::Zero(dimension_of(n));
  v[index] = 1.0;
  return StateVector(std::move(v));
}

DensityMatrix::DensityMatrix(int num_qubits, ComplexMatrix entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  if (num_qubits < 1) throw std::domain_error("density matrix needs at least one qubit");
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  if (entries_.rows() != d || entries_.cols() != d)
    throw std::domain_error("density matrix shape does not match 2^num_qubits");
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::domain_error("density matrix is not Hermitian");
  if (std::abs(entries_.trace() - Complex{1.0, 0.0}) > 1e-10)
    throw std::domain_error("density matrix trace differs from 1");
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const auto& a = psi.amplitudes();
  return DensityMatrix(psi.num_qubits(), a * a.adjoint());
}

void DensityMatrix::validate() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed during validation");
  if (es.eigenvalues().minCoeff() < -kNegativeEigenvalueTolerance)
    throw std::domain_error("density matrix is not positive semidefinite");
}

GroundStateResult ground_state(const HermitianOperator& h) {
  const ComplexMatrix& m = h.matrix();
  const std::size_t dim = h.dim();

  GroundStateResult out;
  if (dim >= 4 && commutes_with_parity(m)) {
    std::vector<std::size_t> sector[2];
    for (std::size_t k = 0; k < dim; ++k) sector[std::popcount(k) & 1].push_back(k);
    Eigenpairs pairs[2];
    for (int s = 0; s < 2; ++s) {
      const auto n = static_cast<Eigen::Index>(sector[s].size());
      ComplexMatrix block(n, n);
      for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) block(r, c) = m(sector[s][r], sector[s][c]);
      pairs[s] = eigh(block, true);
    }
    const int win = pairs[1].values[0] < pairs[0].values[0] ? 1 : 0;
    const int lose = 1 - win;
    out.energy = pairs[win].values[0];
    double next = pairs[lose].values[0];
    if (pairs[win].values.size() > 1) next = std::min(next, pairs[win].values[1]);
    out.gap_to_next = std::max(0.0, next - out.energy);
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < sector[win].size(); ++r) v[sector[win][r]] = pairs[win].vectors(r, 0);
    fix_phase(v);
    out.state = StateVector(std::move(v));
  } else {
    Eigenpairs all = eigh(m, true);
    out.energy = all.values[0];
    out.gap_to_next = all.values.size() > 1 ? std::max(0.0, all.values[1] - all.values[0]) : 0.0;
    ComplexVector v = all.vectors.col(0);
    fix_phase(v);
    out.state = StateVector(std::move(v));
  }
  if (!std::isfinite(out.energy)) throw NumericError("ground energy is not finite");
  out.degenerate = out.gap_to_next < kDegeneracyTolerance;
  return out;
}

std::vector<double> spectrum(const HermitianOperator& h) {
  Eigenpairs all = eigh(h.matrix(), false);
  return {all.values.data(), all.values.data() + all.values.size()};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  check_keep(n, keep);
  const std::size_t dim = rho.dim();
  const auto split = split_indices(n, keep);
  const std::size_t dk = dimension_of(static_cast<int>(keep.size()));
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  const ComplexMatrix& m = rho.matrix();
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r)
      if (split.rest[r] == split.rest[c]) out(split.kept[r], split.kept[c]) += m(r, c);
  // Symmetrize away rounding so the Hermiticity check is exact.
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(static_cast<int>(keep.size()), std::move(out));
}

DensityMatrix reduced_state(const StateVector& psi, std::span<const int> keep) {
  const int n = psi.num_qubits();
  check_keep(n, keep);
  const auto split = split_indices(n, keep);
  const int nk = static_cast<int>(keep.size());
  const std::size_t dk = dimension_of(nk);
  const std::size_t dr = dimension_of(n - nk);
  // Arrange amplitudes as a dk x dr matrix; rho = M M^dagger.
  ComplexMatrix amp = ComplexMatrix::Zero(dk, dr);
  const auto& a = psi.amplitudes();
  for (std::size_t k = 0; k < psi.dim(); ++k) amp(split.kept[k], split.rest[k]) = a[k];
  ComplexMatrix out = amp * amp.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(nk, std::move(out));
}

double shannon_entropy(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities)
    if (p > 0.0) s -= p * std::log2(p);
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigenpairs e = eigh(rho.matrix(), false);
  return entropy_from_eigenvalues(e.values);
}

double multipartite_mutual_information(const DensityMatrix& rho) {
  double sum = 0.0;
  for (int q = 0; q < rho.num_qubits(); ++q) {
    const int keep[] = {q};
    sum += von_neumann_entropy(partial_trace(rho, keep));
  }
  return sum - von_neumann_entropy(rho);
}

double state_fidelity(const StateVector& psi, const StateVector& phi) {
  if (psi.dim() != phi.dim()) throw std::domain_error("state dimensions differ");
  return std::min(1.0, std::abs(psi.amplitudes().dot(phi.amplitudes())));
}

}  // namespace xyqd
