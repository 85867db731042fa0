// Copyright 2026 The holo-refocus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra over small labeled Hilbert spaces.
//
// Every Hilbert space in this library has at most kMaxDim levels, so states
// and operators use Eigen types with a fixed upper bound on their size and
// never touch the heap for their entries.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "holo/errors.hpp"

namespace holo {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 8;
inline constexpr Complex kI{0.0, 1.0};

using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat2 = Eigen::Matrix2cd;

/// Ordered, uniquely labeled set of levels.
class LevelBasis {
 public:
  explicit LevelBasis(std::vector<std::string> labels);

  int dim() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(int index) const { return labels_.at(static_cast<std::size_t>(index)); }

  bool contains(std::string_view label) const noexcept;
  /// Throws LookupError for unknown labels.
  int index(std::string_view label) const;

  bool operator==(const LevelBasis& other) const noexcept { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
};

using BasisPtr = std::shared_ptr<const LevelBasis>;

BasisPtr make_basis(std::vector<std::string> labels);

/// True when both pointers denote the same labels (shared or equal).
bool same_basis(const BasisPtr& a, const BasisPtr& b) noexcept;

/// Amplitude vector over a basis. Conditional (no-jump) states may be
/// sub-normalized.
class QState {
 public:
  QState(BasisPtr basis, CVector amplitudes);

  static QState basis_state(BasisPtr basis, std::string_view label);
  static QState zero(BasisPtr basis);
  /// Builds a state from (label, amplitude) pairs; unlisted levels are zero.
  static QState from_components(BasisPtr basis,
                                std::initializer_list<std::pair<std::string_view, Complex>> parts);

  const BasisPtr& basis() const noexcept { return basis_; }
  const CVector& amplitudes() const noexcept { return amps_; }
  int dim() const noexcept { return static_cast<int>(amps_.size()); }

  Complex amplitude(std::string_view label) const;
  double norm_squared() const noexcept { return amps_.squaredNorm(); }
  bool is_finite() const noexcept;
  /// Throws NumericalInstabilityError when the norm vanishes.
  QState normalized() const;

  Complex inner(const QState& other) const;  // <this|other>

 private:
  BasisPtr basis_;
  CVector amps_;
};

/// Dense operator over a basis (Hamiltonian, jump operator, gate, projector).
class QOperator {
 public:
  QOperator(BasisPtr basis, CMatrix entries);

  static QOperator identity(BasisPtr basis);
  static QOperator zero(BasisPtr basis);
  /// |to><from|
  static QOperator transition(BasisPtr basis, std::string_view to, std::string_view from);
  static QOperator projector(BasisPtr basis, std::string_view label);
  static QOperator outer(const QState& ket, const QState& bra);

  const BasisPtr& basis() const noexcept { return basis_; }
  const CMatrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }

  Complex entry(std::string_view row, std::string_view col) const;
  bool is_finite() const noexcept;
  /// Largest entry of |A - A^dagger|.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() < tol; }
  Complex trace() const { return m_.trace(); }

  QOperator operator+(const QOperator& rhs) const;
  QOperator operator-(const QOperator& rhs) const;
  QOperator operator*(const QOperator& rhs) const;
  QOperator operator*(Complex scale) const;
  friend QOperator operator*(Complex scale, const QOperator& op) { return op * scale; }

 private:
  BasisPtr basis_;
  CMatrix m_;
};

QOperator adjoint(const QOperator& op);
QState apply(const QOperator& op, const QState& s);

/// G[i][j] = <comp_i|U|comp_j>.
Mat2 project_gate(const QOperator& u, const std::array<std::string, 2>& comp);

namespace pauli {
/// Two-level Pauli matrices in the (up, down) ordering, sigma_z = diag(1, -1).
Mat2 x();
Mat2 y();
Mat2 z();
Mat2 identity();
/// Embeds a 2x2 matrix on a two-level basis.
QOperator on(BasisPtr basis, const Mat2& m);
}  // namespace pauli

/// Singular values of a 2x2 matrix, largest first.
std::array<double, 2> singular_values(const Mat2& m);

/// Unitary factor W of the polar decomposition m = W P.
Mat2 polar_unitary(const Mat2& m);
CMatrix polar_unitary(const CMatrix& m);

/// Frobenius norm of [a, b].
double commutator_norm(const Mat2& a, const Mat2& b);

/// 0.5 * || a - b ||_1 for Hermitian a, b.
double trace_distance(const CMatrix& a, const CMatrix& b);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix& hermitian);

}  // namespace holo
