// Copyright 2026 The qdspin Authors
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

#include "qdspin/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qdspin/errors.hpp"

namespace qdspin {

HilbertSpace::HilbertSpace(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InvalidDimension("Hilbert space needs at least one subsystem");
    total_ = 1;
    for (auto d : dims_) {
        if (d == 0) throw InvalidDimension("subsystem dimension must be >= 1");
        total_ *= d;
    }
}

HilbertSpace HilbertSpace::cavity_qd(std::size_t fock_cutoff) {
    if (fock_cutoff == 0) throw InvalidDimension("fock cutoff must be >= 1");
    return HilbertSpace{fock_cutoff, fock_cutoff, kQdLevels};
}

bool HilbertSpace::is_cavity_qd() const {
    return dims_.size() == 3 && dims_[0] == dims_[1] && dims_[2] == kQdLevels;
}

std::vector<std::size_t> HilbertSpace::unflatten(std::size_t index) const {
    std::vector<std::size_t> digits(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
        digits[k] = index % dims_[k];
        index /= dims_[k];
    }
    return digits;
}

std::size_t HilbertSpace::flatten(const std::vector<std::size_t>& digits) const {
    std::size_t index = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) index = index * dims_[k] + digits[k];
    return index;
}

Operator::Operator(Matrix m, HilbertSpace s) : matrix(std::move(m)), space(std::move(s)) {
    if (matrix.rows() != matrix.cols() ||
        static_cast<std::size_t>(matrix.rows()) != space.total())
        throw InvalidDimension("operator matrix is " + std::to_string(matrix.rows()) + "x" +
                               std::to_string(matrix.cols()) + ", space dimension is " +
                               std::to_string(space.total()));
}

Operator::Operator(Matrix m)
    : Operator(m, HilbertSpace{static_cast<std::size_t>(std::max<Eigen::Index>(m.rows(), 1))}) {}

Operator Operator::zero(const HilbertSpace& s) {
    const auto n = static_cast<Eigen::Index>(s.total());
    return {Matrix::Zero(n, n), s};
}

Operator Operator::identity(const HilbertSpace& s) {
    const auto n = static_cast<Eigen::Index>(s.total());
    return {Matrix::Identity(n, n), s};
}

bool Operator::is_hermitian(double tol) const {
    return (matrix - matrix.adjoint()).norm() <= tol;
}

Operator& Operator::operator+=(const Operator& o) {
    if (!(space == o.space)) throw InvalidDimension("operator spaces differ");
    matrix += o.matrix;
    return *this;
}

Operator& Operator::operator-=(const Operator& o) {
    if (!(space == o.space)) throw InvalidDimension("operator spaces differ");
    matrix -= o.matrix;
    return *this;
}

Operator& Operator::operator*=(cplx s) {
    matrix *= s;
    return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }

Operator operator*(const Operator& a, const Operator& b) {
    if (!(a.space == b.space)) throw InvalidDimension("operator spaces differ");
    return {a.matrix * b.matrix, a.space};
}

Operator operator*(cplx s, Operator a) { return a *= s; }
Operator operator*(double s, Operator a) { return a *= cplx(s, 0.0); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix m, HilbertSpace s, bool) : m_(std::move(m)), space_(std::move(s)) {
    if (m_.rows() != m_.cols() || static_cast<std::size_t>(m_.rows()) != space_.total())
        throw InvalidDimension("density matrix does not match its space");
}

DensityMatrix::DensityMatrix(Matrix m, HilbertSpace s, double tol)
    : DensityMatrix(std::move(m), std::move(s), true) {
    validate(tol);
}

DensityMatrix DensityMatrix::unchecked(Matrix m, HilbertSpace s) {
    return DensityMatrix(std::move(m), std::move(s), true);
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi, const HilbertSpace& s) {
    const double n = psi.norm();
    if (n == 0.0) throw InvalidArgument("zero state vector");
    Eigen::VectorXcd v = psi / n;
    return DensityMatrix(v * v.adjoint(), s);
}

double DensityMatrix::trace_deviation() const { return std::abs(m_.trace() - cplx(1.0, 0.0)); }

double DensityMatrix::hermiticity_error() const { return (m_ - m_.adjoint()).norm(); }

double DensityMatrix::min_eigenvalue() const {
    Matrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double tol) const {
    if (hermiticity_error() > tol)
        throw InvalidArgument("density matrix is not Hermitian (error " +
                              std::to_string(hermiticity_error()) + ")");
    if (trace_deviation() > tol)
        throw InvalidArgument("density matrix trace deviates from 1 by " +
                              std::to_string(trace_deviation()));
    if (min_eigenvalue() < -tol)
        throw InvalidArgument("density matrix has negative eigenvalue " +
                              std::to_string(min_eigenvalue()));
}

// ---------------------------------------------------------------------------

Operator fock_annihilation(std::size_t cutoff) {
    if (cutoff == 0) throw InvalidDimension("fock cutoff must be >= 1");
    const auto n = static_cast<Eigen::Index>(cutoff);
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return Operator(std::move(a));
}

Operator qd_transition(int i, int j) {
    if (i < 1 || i > 4 || j < 1 || j > 4)
        throw InvalidLevel("QD level indices must be in 1..4, got (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
    Matrix s = Matrix::Zero(4, 4);
    s(i - 1, j - 1) = 1.0;
    return Operator(std::move(s));
}

Operator embed(const Operator& op, std::size_t slot, const HilbertSpace& space) {
    if (slot >= space.size()) throw InvalidDimension("slot out of range");
    if (op.dim() != space.dim(slot))
        throw InvalidDimension("operator of dimension " + std::to_string(op.dim()) +
                               " cannot act on slot " + std::to_string(slot) + " of dimension " +
                               std::to_string(space.dim(slot)));
    // I_left (x) op (x) I_right with slot 0 most significant.
    std::size_t left = 1, right = 1;
    for (std::size_t k = 0; k < slot; ++k) left *= space.dim(k);
    for (std::size_t k = slot + 1; k < space.size(); ++k) right *= space.dim(k);
    const auto d = static_cast<Eigen::Index>(op.dim());
    const auto n = static_cast<Eigen::Index>(space.total());
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t l = 0; l < left; ++l)
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c) {
                const cplx v = op.matrix(r, c);
                if (v == cplx(0.0, 0.0)) continue;
                const auto row0 = static_cast<Eigen::Index>((l * d + r) * right);
                const auto col0 = static_cast<Eigen::Index>((l * d + c) * right);
                for (std::size_t q = 0; q < right; ++q)
                    out(row0 + static_cast<Eigen::Index>(q), col0 + static_cast<Eigen::Index>(q)) = v;
            }
    return {std::move(out), space};
}

Matrix partial_trace(const Matrix& op, const HilbertSpace& space, std::vector<std::size_t> keep) {
    if (keep.empty()) throw InvalidArgument("partial trace needs a non-empty keep set");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.back() >= space.size()) throw InvalidArgument("keep index out of range");
    if (static_cast<std::size_t>(op.rows()) != space.total())
        throw InvalidDimension("operator does not match space");

    std::vector<std::size_t> kept_dims;
    for (auto k : keep) kept_dims.push_back(space.dim(k));
    const HilbertSpace reduced(kept_dims);
    std::vector<bool> is_kept(space.size(), false);
    for (auto k : keep) is_kept[k] = true;

    const auto n = static_cast<Eigen::Index>(space.total());
    const auto m = static_cast<Eigen::Index>(reduced.total());
    Matrix out = Matrix::Zero(m, m);
    // Precompute (kept index, traced index) per basis state; contract where traced parts agree.
    std::vector<std::size_t> kept_idx(n), traced_idx(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto digits = space.unflatten(static_cast<std::size_t>(i));
        std::size_t ki = 0, ti = 0;
        for (std::size_t s = 0; s < space.size(); ++s) {
            if (is_kept[s]) ki = ki * space.dim(s) + digits[s];
            else ti = ti * space.dim(s) + digits[s];
        }
        kept_idx[i] = ki;
        traced_idx[i] = ti;
    }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (traced_idx[i] == traced_idx[j])
                out(static_cast<Eigen::Index>(kept_idx[i]), static_cast<Eigen::Index>(kept_idx[j])) +=
                    op(i, j);
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
    if (keep.empty()) throw InvalidArgument("partial trace needs a non-empty keep set");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.back() >= rho.space().size()) throw InvalidArgument("keep index out of range");
    std::vector<std::size_t> kept_dims;
    for (auto k : keep) kept_dims.push_back(rho.space().dim(k));
    return DensityMatrix::unchecked(partial_trace(rho.matrix(), rho.space(), keep),
                                    HilbertSpace(kept_dims));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    std::vector<std::size_t> dims = a.space().dims();
    dims.insert(dims.end(), b.space().dims().begin(), b.space().dims().end());
    const auto na = a.matrix().rows(), nb = b.matrix().rows();
    Matrix out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
    return DensityMatrix::unchecked(std::move(out), HilbertSpace(dims));
}

}  // namespace qdspin
