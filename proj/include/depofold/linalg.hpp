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

#ifndef DEPOFOLD_LINALG_HPP_
#define DEPOFOLD_LINALG_HPP_

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace depofold {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using Matrix4c = Eigen::Matrix<Complex<Scalar>, 4, 4>;

template <typename Scalar>
using MatrixXc = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorXc = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

using Matrix2cd = Matrix2c<double>;
using Matrix4cd = Matrix4c<double>;
using MatrixXcd = MatrixXc<double>;
using VectorXcd = VectorXc<double>;

// Single-qubit gate matrices, using the convention RZ(t) = diag(e^{-it/2}, e^{it/2}).

template <typename Scalar>
Matrix2c<Scalar> rx_matrix(Scalar theta) {
  const Scalar c = std::cos(theta / 2);
  const Scalar s = std::sin(theta / 2);
  Matrix2c<Scalar> m;
  m << Complex<Scalar>(c, 0), Complex<Scalar>(0, -s), Complex<Scalar>(0, -s), Complex<Scalar>(c, 0);
  return m;
}

template <typename Scalar>
Matrix2c<Scalar> ry_matrix(Scalar theta) {
  const Scalar c = std::cos(theta / 2);
  const Scalar s = std::sin(theta / 2);
  Matrix2c<Scalar> m;
  m << c, -s, s, c;
  return m;
}

template <typename Scalar>
Matrix2c<Scalar> rz_matrix(Scalar theta) {
  Matrix2c<Scalar> m = Matrix2c<Scalar>::Zero();
  m(0, 0) = std::polar<Scalar>(1, -theta / 2);
  m(1, 1) = std::polar<Scalar>(1, theta / 2);
  return m;
}

template <typename Scalar>
Matrix2c<Scalar> sx_matrix() {
  const Complex<Scalar> a(0.5, 0.5);
  const Complex<Scalar> b(0.5, -0.5);
  Matrix2c<Scalar> m;
  m << a, b, b, a;
  return m;
}

template <typename Scalar>
Matrix2c<Scalar> pauli_x() {
  Matrix2c<Scalar> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar>
Matrix2c<Scalar> pauli_y() {
  Matrix2c<Scalar> m;
  m << Complex<Scalar>(0, 0), Complex<Scalar>(0, -1), Complex<Scalar>(0, 1), Complex<Scalar>(0, 0);
  return m;
}

template <typename Scalar>
Matrix2c<Scalar> pauli_z() {
  Matrix2c<Scalar> m;
  m << 1, 0, 0, -1;
  return m;
}

/// Kronecker product with `hi` acting on the more significant bit.
template <typename Scalar>
Matrix4c<Scalar> kron2(const Matrix2c<Scalar>& hi, const Matrix2c<Scalar>& lo) {
  Matrix4c<Scalar> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(2 * a + c, 2 * b + d) = hi(a, b) * lo(c, d);
  return out;
}

/// Frobenius distance between a and b after removing the best global phase.
template <typename Derived1, typename Derived2>
auto phase_free_distance(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  using std::abs;
  const auto overlap = (b.adjoint() * a).trace();
  auto phase = abs(overlap) > 0 ? overlap / abs(overlap) : decltype(overlap)(1);
  return (a - phase * b).norm();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol) {
  const auto n = u.rows();
  if (n != u.cols()) return false;
  return (u.adjoint() * u - Derived::Identity(n, n)).norm() <= tol;
}

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi_v<Scalar>) a += two_pi;
  if (a > std::numbers::pi_v<Scalar>) a -= two_pi;
  return a;
}

}  // namespace depofold

#endif  // DEPOFOLD_LINALG_HPP_
