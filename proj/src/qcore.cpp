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

#include "holo/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace holo {
namespace {

void require_same(const BasisPtr& a, const BasisPtr& b, const char* what) {
  if (!same_basis(a, b)) {
    throw DimensionError(std::string(what) + ": basis mismatch");
  }
}

}  // namespace

LevelBasis::LevelBasis(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty() || static_cast<int>(labels_.size()) > kMaxDim) {
    throw DimensionError("basis must have between 1 and " + std::to_string(kMaxDim) + " levels");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw DimensionError("duplicate level label '" + l + "'");
  }
}

bool LevelBasis::contains(std::string_view label) const noexcept {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int LevelBasis::index(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw LookupError("unknown level '" + std::string(label) + "'");
  return static_cast<int>(it - labels_.begin());
}

BasisPtr make_basis(std::vector<std::string> labels) {
  return std::make_shared<const LevelBasis>(std::move(labels));
}

bool same_basis(const BasisPtr& a, const BasisPtr& b) noexcept {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------------------

QState::QState(BasisPtr basis, CVector amplitudes) : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
  if (!basis_ || amps_.size() != basis_->dim()) throw DimensionError("state dimension does not match basis");
}

QState QState::basis_state(BasisPtr basis, std::string_view label) {
  CVector v = CVector::Zero(basis->dim());
  v(basis->index(label)) = 1.0;
  return QState(std::move(basis), std::move(v));
}

QState QState::zero(BasisPtr basis) {
  const int d = basis->dim();
  return QState(std::move(basis), CVector::Zero(d));
}

QState QState::from_components(BasisPtr basis,
                               std::initializer_list<std::pair<std::string_view, Complex>> parts) {
  CVector v = CVector::Zero(basis->dim());
  for (const auto& [label, amp] : parts) v(basis->index(label)) += amp;
  return QState(std::move(basis), std::move(v));
}

Complex QState::amplitude(std::string_view label) const { return amps_(basis_->index(label)); }

bool QState::is_finite() const noexcept { return amps_.allFinite(); }

QState QState::normalized() const {
  const double n = amps_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalInstabilityError("cannot normalize a zero or non-finite state");
  return QState(basis_, amps_ / n);
}

Complex QState::inner(const QState& other) const {
  require_same(basis_, other.basis_, "inner product");
  return amps_.dot(other.amps_);
}

// ---------------------------------------------------------------------------

QOperator::QOperator(BasisPtr basis, CMatrix entries) : basis_(std::move(basis)), m_(std::move(entries)) {
  if (!basis_ || m_.rows() != basis_->dim() || m_.cols() != basis_->dim()) {
    throw DimensionError("operator dimension does not match basis");
  }
}

QOperator QOperator::identity(BasisPtr basis) {
  const int d = basis->dim();
  return QOperator(std::move(basis), CMatrix::Identity(d, d));
}

QOperator QOperator::zero(BasisPtr basis) {
  const int d = basis->dim();
  return QOperator(std::move(basis), CMatrix::Zero(d, d));
}

QOperator QOperator::transition(BasisPtr basis, std::string_view to, std::string_view from) {
  const int d = basis->dim();
  CMatrix m = CMatrix::Zero(d, d);
  m(basis->index(to), basis->index(from)) = 1.0;
  return QOperator(std::move(basis), std::move(m));
}

QOperator QOperator::projector(BasisPtr basis, std::string_view label) {
  return transition(std::move(basis), label, label);
}

QOperator QOperator::outer(const QState& ket, const QState& bra) {
  require_same(ket.basis(), bra.basis(), "outer product");
  return QOperator(ket.basis(), ket.amplitudes() * bra.amplitudes().adjoint());
}

Complex QOperator::entry(std::string_view row, std::string_view col) const {
  return m_(basis_->index(row), basis_->index(col));
}

bool QOperator::is_finite() const noexcept { return m_.allFinite(); }

double QOperator::hermiticity_defect() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

QOperator QOperator::operator+(const QOperator& rhs) const {
  require_same(basis_, rhs.basis_, "operator sum");
  return QOperator(basis_, m_ + rhs.m_);
}

QOperator QOperator::operator-(const QOperator& rhs) const {
  require_same(basis_, rhs.basis_, "operator difference");
  return QOperator(basis_, m_ - rhs.m_);
}

QOperator QOperator::operator*(const QOperator& rhs) const {
  require_same(basis_, rhs.basis_, "operator product");
  return QOperator(basis_, m_ * rhs.m_);
}

QOperator QOperator::operator*(Complex scale) const { return QOperator(basis_, m_ * scale); }

QOperator adjoint(const QOperator& op) { return QOperator(op.basis(), op.matrix().adjoint()); }

QState apply(const QOperator& op, const QState& s) {
  require_same(op.basis(), s.basis(), "apply");
  return QState(op.basis(), op.matrix() * s.amplitudes());
}

Mat2 project_gate(const QOperator& u, const std::array<std::string, 2>& comp) {
  const std::array<int, 2> idx{u.basis()->index(comp[0]), u.basis()->index(comp[1])};
  Mat2 g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = u.matrix()(idx[i], idx[j]);
  return g;
}

namespace pauli {

Mat2 x() {
  Mat2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Mat2 y() {
  Mat2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}

Mat2 z() {
  Mat2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Mat2 identity() { return Mat2::Identity(); }

QOperator on(BasisPtr basis, const Mat2& m) {
  if (basis->dim() != 2) throw DimensionError("Pauli embedding needs a two-level basis");
  return QOperator(std::move(basis), CMatrix(m));
}

}  // namespace pauli

std::array<double, 2> singular_values(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m);
  const auto& s = svd.singularValues();
  return {s(0), s(1)};
}

Mat2 polar_unitary(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix polar_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double commutator_norm(const Mat2& a, const Mat2& b) { return (a * b - b * a).norm(); }

double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("trace_distance: size mismatch");
  CMatrix d = a - b;
  CMatrix h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const CMatrix& hermitian) {
  CMatrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace holo
