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

#include <Eigen/Eigenvalues>
#include <Eigen/OrderingMethods>
#include <Eigen/QR>
#include <Eigen/SparseLU>

#include "qdspin/dynamics.hpp"
#include "qdspin/errors.hpp"

namespace qdspin {

namespace {

using ColSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;

Matrix unvec(const Eigen::VectorXcd& x, std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return Eigen::Map<const Matrix>(x.data(), n, n);
}

}  // namespace

std::size_t null_space_dimension(const Liouvillian& L, double rel_tol) {
    const auto n = static_cast<Eigen::Index>(L.dim());
    const double scale = std::max(L.norm_inf(), 1.0);
    const double cut = rel_tol * scale;
    if (n <= 400) {
        Eigen::ComplexEigenSolver<Matrix> es(L.dense(), false);
        return static_cast<std::size_t>((es.eigenvalues().array().abs() <= cut).count());
    }
    // Shift-invert subspace iteration: eigenvalues near zero dominate
    // (L - sigma)^-1 for a shift sigma > 0, which lies off the spectrum.
    const double sigma = 1e-3 * scale;
    ColSparse m(L.superoperator());
    for (Eigen::Index i = 0; i < n; ++i) m.coeffRef(i, i) -= sigma;
    m.makeCompressed();
    Eigen::SparseLU<ColSparse, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) return 0;
    const Eigen::Index k = std::min<Eigen::Index>(n, 16);
    Matrix q(n, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            q(i, j) = cplx(std::sin(0.37 * static_cast<double>(i + 1) * static_cast<double>(j + 1)),
                           std::cos(0.91 * static_cast<double>(i) + static_cast<double>(j)));
    for (int it = 0; it < 12; ++it) {
        const Matrix w = lu.solve(q);
        Eigen::HouseholderQR<Matrix> qr(w);
        q = qr.householderQ() * Matrix::Identity(n, k);
    }
    const Matrix t = q.adjoint() * Matrix(lu.solve(q));
    Eigen::ComplexEigenSolver<Matrix> es(t, false);
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const cplx mu = es.eigenvalues()(i);
        if (std::abs(mu) > 0.0 && std::abs(sigma + 1.0 / mu) <= cut) ++count;
    }
    return count;
}

DensityMatrix steadystate(const Liouvillian& L) {
    const std::size_t d = L.space().total();
    const auto n = static_cast<Eigen::Index>(L.dim());
    const double scale = std::max(L.norm_inf(), 1.0);

    // Replace the row of the rho_00 equation by the trace condition. Trace
    // preservation makes that row redundant, so a unique fixed point leaves
    // the system nonsingular.
    std::vector<Eigen::Triplet<cplx, int>> t;
    t.reserve(static_cast<std::size_t>(L.superoperator().nonZeros()) + d);
    const SparseMatrix& s = L.superoperator();
    for (int r = 1; r < s.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(s, r); it; ++it) t.emplace_back(r, it.col(), it.value());
    for (std::size_t i = 0; i < d; ++i) t.emplace_back(0, static_cast<int>(i * (d + 1)), scale);
    ColSparse m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();

    Eigen::SparseLU<ColSparse, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(m);
    lu.factorize(m);
    if (lu.info() != Eigen::Success) throw NonUniqueSteadyState(null_space_dimension(L));

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    rhs(0) = scale;
    Eigen::VectorXcd x = lu.solve(rhs);
    // one step of iterative refinement
    const Eigen::VectorXcd r = rhs - m * x;
    x += lu.solve(r);

    if (!x.allFinite() || x.norm() > 1e6) throw NonUniqueSteadyState(null_space_dimension(L));

    // A degenerate fixed-point space leaves the bordered system singular, which
    // LU may not flag. Inverse iteration on a fixed probe exposes it through
    // the growth of the solution.
    Eigen::VectorXcd probe(n);
    for (Eigen::Index i = 0; i < n; ++i)
        probe(i) = cplx(std::cos(0.7 * static_cast<double>(i)), std::sin(1.3 * static_cast<double>(i)));
    const Eigen::VectorXcd z = lu.solve(probe);
    const double growth = scale * z.cwiseAbs().maxCoeff() / probe.cwiseAbs().maxCoeff();
    if (!z.allFinite() || growth > 1e12) throw NonUniqueSteadyState(null_space_dimension(L));

    Matrix rho = unvec(x, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    return DensityMatrix::unchecked(std::move(rho), L.space());
}

DensityMatrix asymptotic_state(const Liouvillian& L, const DensityMatrix& rho0, double max_time) {
    try {
        return steadystate(L);
    } catch (const NonUniqueSteadyState&) {
    }
    const double tol = 1e-10 * std::max(L.norm_inf(), 1.0);
    if (liouvillian_residual(L, rho0.matrix()) <= tol) return rho0;
    // Non-unique fixed points: follow rho0 until it stops moving.
    DensityMatrix cur = rho0;
    double horizon = 1.0 / std::max(L.norm_inf(), 1e-12);
    double elapsed = 0.0;
    EvolveOptions opts;
    opts.store_states = true;
    while (elapsed < max_time) {
        auto traj = evolve(cur, L, {0.0, horizon}, opts);
        cur = DensityMatrix::unchecked(traj.states.back(), L.space());
        elapsed += horizon;
        if (liouvillian_residual(L, cur.matrix()) <= tol) break;
        horizon *= 2.0;
    }
    return cur;
}

}  // namespace qdspin
