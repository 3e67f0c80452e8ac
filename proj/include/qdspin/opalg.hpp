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

// Dense operator algebra over tensor-product spaces.
//
// The production space is (mode a, mode b, QD) with dims (N, N, 4); that slot
// order is fixed everywhere. Generic spaces are allowed so small test systems
// can share the same machinery.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace qdspin {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kSlotModeA = 0;
inline constexpr std::size_t kSlotModeB = 1;
inline constexpr std::size_t kSlotQd = 2;
inline constexpr std::size_t kQdLevels = 4;

inline constexpr double kDefaultStateTol = 1e-9;

class HilbertSpace {
public:
    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<std::size_t> dims);
    HilbertSpace(std::initializer_list<std::size_t> dims)
        : HilbertSpace(std::vector<std::size_t>(dims)) {}

    /// (N, N, 4): two cavity modes truncated at `fock_cutoff` photons levels and the QD.
    static HilbertSpace cavity_qd(std::size_t fock_cutoff);

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t size() const { return dims_.size(); }
    std::size_t dim(std::size_t slot) const { return dims_.at(slot); }
    std::size_t total() const { return total_; }

    /// True for the (N, N, 4) layout.
    bool is_cavity_qd() const;

    /// Basis index -> per-slot indices (slot 0 most significant).
    std::vector<std::size_t> unflatten(std::size_t index) const;
    std::size_t flatten(const std::vector<std::size_t>& digits) const;

    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

private:
    std::vector<std::size_t> dims_;
    std::size_t total_ = 0;
};

struct Operator {
    Matrix matrix;
    HilbertSpace space;

    Operator() = default;
    Operator(Matrix m, HilbertSpace s);
    /// Single-subsystem operator (space is {rows}).
    explicit Operator(Matrix m);

    static Operator zero(const HilbertSpace& s);
    static Operator identity(const HilbertSpace& s);

    std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
    Operator adjoint() const { return {matrix.adjoint(), space}; }
    bool is_hermitian(double tol = 1e-12) const;

    Operator& operator+=(const Operator& o);
    Operator& operator-=(const Operator& o);
    Operator& operator*=(cplx s);
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(cplx s, Operator a);
Operator operator*(double s, Operator a);
Operator commutator(const Operator& a, const Operator& b);

/// Trace-one Hermitian positive-semidefinite operator. The checked constructor validates;
/// `unchecked` skips validation for solver internals that verify separately.
class DensityMatrix {
public:
    DensityMatrix(Matrix m, HilbertSpace s, double tol = kDefaultStateTol);
    static DensityMatrix unchecked(Matrix m, HilbertSpace s);

    /// |psi><psi| for a (normalized here) state vector.
    static DensityMatrix pure(const Eigen::VectorXcd& psi, const HilbertSpace& s);

    const Matrix& matrix() const { return m_; }
    const HilbertSpace& space() const { return space_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

    double trace_deviation() const;        // |tr rho - 1|
    double hermiticity_error() const;      // ||rho - rho^dag||_F
    double min_eigenvalue() const;
    /// Throws InvalidArgument naming the first violated invariant.
    void validate(double tol = kDefaultStateTol) const;

private:
    DensityMatrix(Matrix m, HilbertSpace s, bool);
    Matrix m_;
    HilbertSpace space_;
};

/// Annihilation operator a on a Fock space truncated to `cutoff` levels.
Operator fock_annihilation(std::size_t cutoff);

/// sigma_ij = |i><j| on the QD, levels 1..4.
Operator qd_transition(int i, int j);

/// Kronecker product of `op` at `slot` with identities on the other slots.
Operator embed(const Operator& op, std::size_t slot, const HilbertSpace& space);

/// Reduced state on the subsystems listed in `keep` (kept in ascending slot order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep);

/// Same contraction on an arbitrary operator (linear, trace preserving).
Matrix partial_trace(const Matrix& op, const HilbertSpace& space, std::vector<std::size_t> keep);

/// Tensor product of two density matrices (spaces concatenated).
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qdspin
