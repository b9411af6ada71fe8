// Copyright 2026 The depofold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEPOFOLD_DENSITY_MATRIX_HPP_
#define DEPOFOLD_DENSITY_MATRIX_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "depofold/linalg.hpp"
#include "depofold/noise.hpp"

namespace depofold {

/// Dense 2^n x 2^n state. Qubit k is bit k of the basis index (qubit 0 least significant).
template <typename Scalar>
class DensityMatrix {
 public:
  using Complex = std::complex<Scalar>;
  using Matrix = MatrixXc<Scalar>;

  explicit DensityMatrix(int n_qubits) : n_(n_qubits), rho_(Matrix::Zero(dim(), dim())) { rho_(0, 0) = 1; }
  DensityMatrix(int n_qubits, Matrix rho) : n_(n_qubits), rho_(std::move(rho)) {
    if (rho_.rows() != dim() || rho_.cols() != dim()) throw std::invalid_argument("DensityMatrix: wrong size");
  }

  static DensityMatrix maximally_mixed(int n_qubits) {
    DensityMatrix d(n_qubits);
    d.rho_ = Matrix::Identity(d.dim(), d.dim()) / Scalar(d.dim());
    return d;
  }

  static DensityMatrix pure(int n_qubits, const VectorXc<Scalar>& psi) {
    return DensityMatrix(n_qubits, psi * psi.adjoint());
  }

  int n_qubits() const { return n_; }
  Eigen::Index dim() const { return Eigen::Index(1) << n_; }
  const Matrix& matrix() const { return rho_; }

  Complex trace() const { return rho_.trace(); }

  /// Hermitian, unit-trace and eigenvalues above -eig_tol.
  bool is_valid(Scalar tol = Scalar(1e-10), Scalar eig_tol = Scalar(1e-9)) const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(trace() - Complex(1)) > tol) return false;
    return min_eigenvalue() >= -eig_tol;
  }

  Scalar min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// rho -> U rho U^dag on one qubit.
  void apply_unitary(const Matrix2c<Scalar>& u, int q) {
    const Eigen::Index bit = Eigen::Index(1) << q;
    const Eigen::Index d = dim();
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index r0 = 0; r0 < d; ++r0) {
        if (r0 & bit) continue;
        const Complex a = rho_(r0, c), b = rho_(r0 | bit, c);
        rho_(r0, c) = u(0, 0) * a + u(0, 1) * b;
        rho_(r0 | bit, c) = u(1, 0) * a + u(1, 1) * b;
      }
    const Complex u00 = std::conj(u(0, 0)), u01 = std::conj(u(0, 1));
    const Complex u10 = std::conj(u(1, 0)), u11 = std::conj(u(1, 1));
    for (Eigen::Index c0 = 0; c0 < d; ++c0) {
      if (c0 & bit) continue;
      for (Eigen::Index r = 0; r < d; ++r) {
        const Complex a = rho_(r, c0), b = rho_(r, c0 | bit);
        rho_(r, c0) = a * u00 + b * u01;
        rho_(r, c0 | bit) = a * u10 + b * u11;
      }
    }
  }

  /// Diagonal two-qubit unitary; `diag` is indexed by b_qa + 2 b_qb.
  void apply_diagonal(const std::array<std::complex<double>, 4>& diag, int qa, int qb) {
    const Eigen::Index d = dim();
    std::vector<Complex> phase(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
      const int local = int((i >> qa) & 1) | (int((i >> qb) & 1) << 1);
      phase[static_cast<std::size_t>(i)] = Complex(diag[static_cast<std::size_t>(local)]);
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      const Complex pc = std::conj(phase[static_cast<std::size_t>(c)]);
      for (Eigen::Index r = 0; r < d; ++r) rho_(r, c) *= phase[static_cast<std::size_t>(r)] * pc;
    }
  }

  void apply_channel(const Channel& ch, std::span<const int> qubits) {
    if (static_cast<int>(qubits.size()) != ch.arity) throw std::invalid_argument("apply_channel: arity mismatch");
    if (ch.arity == 1)
      apply_superop_1q(ch.superop.template cast<Complex>(), qubits[0]);
    else
      apply_superop_2q(ch.superop.template cast<Complex>(), qubits[0], qubits[1]);
  }

  /// Probability of each basis state of the `measured` qubits; bit j of the
  /// pattern is the outcome of measured[j].
  std::vector<Scalar> marginal_probabilities(std::span<const int> measured) const {
    std::vector<Scalar> p(std::size_t(1) << measured.size(), Scalar(0));
    for (Eigen::Index i = 0; i < dim(); ++i) {
      std::size_t pattern = 0;
      for (std::size_t j = 0; j < measured.size(); ++j)
        pattern |= static_cast<std::size_t>((i >> measured[j]) & 1) << j;
      p[pattern] += std::real(rho_(i, i));
    }
    for (auto& v : p) v = std::max(v, Scalar(0));
    return p;
  }

 private:
  void apply_superop_1q(const Matrix& s, int q) {
    const Eigen::Index bit = Eigen::Index(1) << q;
    const Eigen::Index d = dim();
    Eigen::Matrix<Complex, 4, 1> v;
    const Eigen::Matrix<Complex, 4, 4> s4 = s;
    for (Eigen::Index c0 = 0; c0 < d; ++c0) {
      if (c0 & bit) continue;
      for (Eigen::Index r0 = 0; r0 < d; ++r0) {
        if (r0 & bit) continue;
        v << rho_(r0, c0), rho_(r0, c0 | bit), rho_(r0 | bit, c0), rho_(r0 | bit, c0 | bit);
        const Eigen::Matrix<Complex, 4, 1> w = s4 * v;
        rho_(r0, c0) = w(0);
        rho_(r0, c0 | bit) = w(1);
        rho_(r0 | bit, c0) = w(2);
        rho_(r0 | bit, c0 | bit) = w(3);
      }
    }
  }

  void apply_superop_2q(const Matrix& s, int qa, int qb) {
    const Eigen::Index ba = Eigen::Index(1) << qa, bb = Eigen::Index(1) << qb;
    const Eigen::Index d = dim();
    const std::array<Eigen::Index, 4> off{0, ba, bb, ba | bb};
    const Eigen::Matrix<Complex, 16, 16> s16 = s;
    Eigen::Matrix<Complex, 16, 1> v;
    for (Eigen::Index c0 = 0; c0 < d; ++c0) {
      if (c0 & (ba | bb)) continue;
      for (Eigen::Index r0 = 0; r0 < d; ++r0) {
        if (r0 & (ba | bb)) continue;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) v(a * 4 + b) = rho_(r0 | off[a], c0 | off[b]);
        const Eigen::Matrix<Complex, 16, 1> w = s16 * v;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) rho_(r0 | off[a], c0 | off[b]) = w(a * 4 + b);
      }
    }
  }

  int n_;
  Matrix rho_;
};

/// Pure-state counterpart used for noiseless expectation values.
template <typename Scalar>
class StateVector {
 public:
  using Complex = std::complex<Scalar>;

  explicit StateVector(int n_qubits) : n_(n_qubits), psi_(VectorXc<Scalar>::Zero(Eigen::Index(1) << n_qubits)) {
    psi_(0) = 1;
  }

  int n_qubits() const { return n_; }
  const VectorXc<Scalar>& amplitudes() const { return psi_; }

  void apply_unitary(const Matrix2c<Scalar>& u, int q) {
    const Eigen::Index bit = Eigen::Index(1) << q;
    for (Eigen::Index i = 0; i < psi_.size(); ++i) {
      if (i & bit) continue;
      const Complex a = psi_(i), b = psi_(i | bit);
      psi_(i) = u(0, 0) * a + u(0, 1) * b;
      psi_(i | bit) = u(1, 0) * a + u(1, 1) * b;
    }
  }

  void apply_diagonal(const std::array<std::complex<double>, 4>& diag, int qa, int qb) {
    for (Eigen::Index i = 0; i < psi_.size(); ++i) {
      const int local = int((i >> qa) & 1) | (int((i >> qb) & 1) << 1);
      psi_(i) *= Complex(diag[static_cast<std::size_t>(local)]);
    }
  }

  /// <Z_q>.
  Scalar expectation_z(int q) const {
    Scalar e = 0;
    for (Eigen::Index i = 0; i < psi_.size(); ++i) e += ((i >> q) & 1 ? -1 : 1) * std::norm(psi_(i));
    return e;
  }

  /// <P_q> for a single-qubit Pauli matrix.
  Scalar expectation(const Matrix2c<Scalar>& pauli, int q) const {
    const Eigen::Index bit = Eigen::Index(1) << q;
    Complex e = 0;
    for (Eigen::Index i = 0; i < psi_.size(); ++i) {
      if (i & bit) continue;
      const Complex a = psi_(i), b = psi_(i | bit);
      e += std::conj(a) * (pauli(0, 0) * a + pauli(0, 1) * b) + std::conj(b) * (pauli(1, 0) * a + pauli(1, 1) * b);
    }
    return std::real(e);
  }

 private:
  int n_;
  VectorXc<Scalar> psi_;
};

using DensityMatrixd = DensityMatrix<double>;
using StateVectord = StateVector<double>;

}  // namespace depofold

#endif  // DEPOFOLD_DENSITY_MATRIX_HPP_
