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

#include <cmath>
#include <string>

#include "qdspin/dynamics.hpp"
#include "qdspin/errors.hpp"
#include "qdspin/kernels.hpp"

namespace qdspin {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Entry {
    int row, col;
    cplx val;
};

std::vector<Entry> nonzeros(const Matrix& m) {
    std::vector<Entry> out;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != cplx(0.0, 0.0))
                out.push_back({static_cast<int>(i), static_cast<int>(j), m(i, j)});
    return out;
}

using Triplets = std::vector<Eigen::Triplet<cplx, int>>;

// scale * (A (x) B) with A given by its nonzeros; B likewise. d is the dimension of B.
void add_kron(Triplets& t, const std::vector<Entry>& a, const std::vector<Entry>& b, int d, cplx scale) {
    for (const auto& ea : a)
        for (const auto& eb : b)
            t.emplace_back(ea.row * d + eb.row, ea.col * d + eb.col, scale * ea.val * eb.val);
}

std::vector<Entry> identity_entries(int d) {
    std::vector<Entry> out;
    for (int i = 0; i < d; ++i) out.push_back({i, i, 1.0});
    return out;
}

kernels::CsrView view(const SparseMatrix& m) {
    const auto nnz = static_cast<std::size_t>(m.nonZeros());
    return {static_cast<std::size_t>(m.rows()),
            {m.outerIndexPtr(), static_cast<std::size_t>(m.rows()) + 1},
            {m.innerIndexPtr(), nnz},
            {m.valuePtr(), nnz}};
}

}  // namespace

Liouvillian::Liouvillian(SparseMatrix super, HilbertSpace space)
    : super_(std::move(super)), space_(std::move(space)) {
    super_.makeCompressed();
    const auto d = space_.total();
    if (static_cast<std::size_t>(super_.rows()) != d * d || super_.rows() != super_.cols())
        throw InvalidDimension("superoperator dimension does not match the Hilbert space");
}

void Liouvillian::apply(std::span<const cplx> x, std::span<cplx> y) const {
    if (x.size() != dim()) throw InvalidDimension("vector length does not match Liouvillian");
    kernels::csr_matvec(view(super_), x, y);
}

void Liouvillian::apply_add(cplx alpha, std::span<const cplx> x, std::span<cplx> y) const {
    if (x.size() != dim()) throw InvalidDimension("vector length does not match Liouvillian");
    kernels::csr_matvec_acc(view(super_), alpha, x, y);
}

double Liouvillian::norm_inf() const {
    double best = 0.0;
    for (int r = 0; r < super_.outerSize(); ++r) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(super_, r); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

Liouvillian& Liouvillian::operator+=(const Liouvillian& o) {
    if (!(space_ == o.space_)) throw InvalidDimension("Liouvillian spaces differ");
    super_ = (super_ + o.super_).eval();
    super_.makeCompressed();
    return *this;
}

Liouvillian build_liouvillian(const Operator& H, const std::vector<Operator>& c_ops, double herm_tol) {
    const double herm_err = (H.matrix - H.matrix.adjoint()).norm();
    if (herm_err > herm_tol)
        throw InvalidHamiltonian("Hamiltonian is not Hermitian (||H - H^dag||_F = " +
                                 std::to_string(herm_err) + ")");
    const int d = static_cast<int>(H.dim());
    for (const auto& c : c_ops)
        if (!(c.space == H.space))
            throw InvalidDimension("collapse operator acts on a different space than H");

    const auto id = identity_entries(d);
    Triplets t;
    // -i (I (x) H) + i (H^T (x) I)
    const auto h = nonzeros(H.matrix);
    const auto ht = nonzeros(H.matrix.transpose());
    add_kron(t, id, h, d, -kI);
    add_kron(t, ht, id, d, kI);
    for (const auto& c : c_ops) {
        const Matrix cdc = c.matrix.adjoint() * c.matrix;
        const auto cc = nonzeros(c.matrix);
        if (cc.empty()) continue;
        add_kron(t, nonzeros(c.matrix.conjugate()), cc, d, 2.0);
        add_kron(t, id, nonzeros(cdc), d, -1.0);
        add_kron(t, nonzeros(cdc.transpose()), id, d, -1.0);
    }
    SparseMatrix s(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
    s.setFromTriplets(t.begin(), t.end());
    s.prune(cplx(0.0, 0.0), 0.0);
    return Liouvillian(std::move(s), H.space);
}

TimeDependentLiouvillian::TimeDependentLiouvillian(Liouvillian static_part, std::vector<DriveTerm> terms)
    : static_(std::move(static_part)), terms_(std::move(terms)) {
    for (const auto& term : terms_) {
        if (!(term.generator.space() == static_.space()))
            throw InvalidDimension("drive generator acts on a different space");
        if (!term.envelope) throw InvalidArgument("drive term needs an envelope");
    }
}

void TimeDependentLiouvillian::apply(double t, std::span<const cplx> x, std::span<cplx> y) const {
    static_.apply(x, y);
    for (const auto& term : terms_) {
        const double f = term.envelope(t);
        if (f != 0.0) term.generator.apply_add(f, x, y);
    }
}

double liouvillian_residual(const Liouvillian& L, const Matrix& rho) {
    std::vector<cplx> out(L.dim());
    L.apply({rho.data(), static_cast<std::size_t>(rho.size())}, out);
    double s = 0.0;
    for (const auto& v : out) s += std::norm(v);
    return std::sqrt(s);
}

cplx expectation(const Matrix& rho, const Matrix& op) {
    if (rho.rows() != op.rows() || rho.cols() != op.cols())
        throw InvalidDimension("operator and state dimensions differ");
    // tr(op rho) = sum_ij op_ij rho_ji
    return (op.transpose().cwiseProduct(rho)).sum();
}

cplx expectation(const DensityMatrix& rho, const Operator& op) {
    if (!(rho.space() == op.space)) throw InvalidDimension("operator and state spaces differ");
    return expectation(rho.matrix(), op.matrix);
}

std::array<double, 4> qd_populations(const Matrix& rho, const HilbertSpace& space) {
    if (!space.is_cavity_qd()) throw InvalidDimension("expected a (N, N, 4) cavity-QD space");
    std::array<double, 4> pop{};
    const auto n = static_cast<Eigen::Index>(space.total());
    for (Eigen::Index i = 0; i < n; ++i) pop[static_cast<std::size_t>(i % 4)] += rho(i, i).real();
    return pop;
}

Eigen::Matrix2cd spin_block(const Matrix& rho, const HilbertSpace& space) {
    if (!space.is_cavity_qd()) throw InvalidDimension("expected a (N, N, 4) cavity-QD space");
    const Matrix qd = partial_trace(rho, space, {kSlotQd});
    return qd.topLeftCorner<2, 2>();
}

double spin_subspace_purity(const Matrix& rho, const HilbertSpace& space) {
    const Eigen::Matrix2cd blk = spin_block(rho, space);
    return (blk * blk).trace().real();
}

double spin_subspace_purity(const DensityMatrix& rho) {
    return spin_subspace_purity(rho.matrix(), rho.space());
}

double top_fock_population(const Matrix& rho, const HilbertSpace& space) {
    if (!space.is_cavity_qd()) throw InvalidDimension("expected a (N, N, 4) cavity-QD space");
    const std::size_t nc = space.dim(kSlotModeA);
    double pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < space.total(); ++i) {
        const auto dg = space.unflatten(i);
        const double p = rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        if (dg[kSlotModeA] == nc - 1) pa += p;
        if (dg[kSlotModeB] == nc - 1) pb += p;
    }
    return std::max(pa, pb);
}

}  // namespace qdspin
