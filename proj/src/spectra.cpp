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

#include "qdspin/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <lapacke.h>

#include "qdspin/errors.hpp"

namespace qdspin {

namespace {

using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Sector {
    std::vector<int> members;  // vec indices i + j*d
    std::vector<int> position; // vec index -> position in members, or -1
};

// Coherences |i><j| with n_i - n_j = -1.
Sector emission_sector(const HilbertSpace& space) {
    const Operator n_op = excitation_number(space);
    const auto d = static_cast<int>(space.total());
    std::vector<int> n(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) n[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(n_op.matrix(i, i).real()));
    Sector s;
    s.position.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), -1);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            if (n[static_cast<std::size_t>(i)] - n[static_cast<std::size_t>(j)] == -1) {
                const int v = i + j * d;
                s.position[static_cast<std::size_t>(v)] = static_cast<int>(s.members.size());
                s.members.push_back(v);
            }
    return s;
}

Matrix sector_block(const Liouvillian& L, const Sector& s) {
    const auto m = static_cast<Eigen::Index>(s.members.size());
    Matrix block = Matrix::Zero(m, m);
    const SparseMatrix& sup = L.superoperator();
    for (int r = 0; r < sup.outerSize(); ++r) {
        const int pr = s.position[static_cast<std::size_t>(r)];
        for (SparseMatrix::InnerIterator it(sup, r); it; ++it) {
            const int pc = s.position[static_cast<std::size_t>(it.col())];
            if ((pr < 0) != (pc < 0)) {
                if (std::abs(it.value()) > 1e-12 * std::max(1.0, L.norm_inf()))
                    throw InvalidHamiltonian("Liouvillian does not conserve the excitation number");
                continue;
            }
            if (pr >= 0) block(pr, pc) = it.value();
        }
    }
    return block;
}

Eigen::VectorXcd restrict(const Matrix& m, const Sector& s) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(s.members.size()));
    const cplx* data = m.data();
    for (std::size_t k = 0; k < s.members.size(); ++k) out(static_cast<Eigen::Index>(k)) = data[s.members[k]];
    return out;
}

// Tr[A^dag Y] as a bilinear form w^T vec(Y) on the sector.
Eigen::VectorXcd trace_functional(const Matrix& a, const Sector& s) {
    return restrict(a.conjugate(), s);
}

// Solves (z I - H) X = R in place for an upper Hessenberg H, with adjacent-row
// partial pivoting. `work` receives a copy of H and is overwritten.
void hessenberg_solve(const RowMatrix& h, cplx z, RowMatrix& work, Eigen::MatrixXcd& rhs) {
    const Eigen::Index n = h.rows();
    work = -h;
    work.diagonal().array() += z;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (std::abs(work(k + 1, k)) > std::abs(work(k, k))) {
            work.row(k).tail(n - k).swap(work.row(k + 1).tail(n - k));
            rhs.row(k).swap(rhs.row(k + 1));
        }
        const cplx pivot = work(k, k);
        if (pivot == cplx(0.0, 0.0)) continue;
        const cplx l = work(k + 1, k) / pivot;
        if (l == cplx(0.0, 0.0)) continue;
        work.row(k + 1).tail(n - k) -= l * work.row(k).tail(n - k);
        rhs.row(k + 1) -= l * rhs.row(k);
    }
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        if (k + 1 < n) rhs.row(k) -= work.row(k).tail(n - k - 1) * rhs.bottomRows(n - k - 1);
        rhs.row(k) /= work(k, k);
    }
}

lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

// A = Q H Q^dag with H upper Hessenberg.
void hessenberg(const Matrix& a, RowMatrix& h, Matrix& q) {
    const auto n = static_cast<lapack_int>(a.rows());
    Matrix w = a;
    std::vector<cplx> tau(static_cast<std::size_t>(std::max(n - 1, 1)));
    if (LAPACKE_zgehrd(LAPACK_COL_MAJOR, n, 1, n, lp(w.data()), n, lp(tau.data())) != 0)
        throw std::runtime_error("Hessenberg reduction failed");
    h = w.triangularView<Eigen::Upper>();
    for (Eigen::Index i = 1; i < w.rows(); ++i) h(i, i - 1) = w(i, i - 1);
    q = w;
    if (LAPACKE_zunghr(LAPACK_COL_MAJOR, n, 1, n, lp(q.data()), n, lp(tau.data())) != 0)
        throw std::runtime_error("Hessenberg basis construction failed");
}

// Eigenvalues and right eigenvectors of a general complex matrix.
void eigen_decompose(const Matrix& a, Eigen::VectorXcd& values, Matrix& vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    Matrix w = a;
    values.resize(a.rows());
    vectors.resize(a.rows(), a.rows());
    if (LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, lp(w.data()), n, lp(values.data()), nullptr, 1,
                      lp(vectors.data()), n) != 0)
        throw std::runtime_error("eigen-decomposition of the emission sector failed");
}

double min_positive_gamma(const SystemParams& p) {
    double g = std::numeric_limits<double>::infinity();
    for (double v : {p.gamma_41, p.gamma_42, p.gamma_31, p.gamma_32})
        if (v > 0.0) g = std::min(g, v);
    return g;
}

}  // namespace

Spectrum emission_spectrum(const SystemParams& params, double pump, const std::vector<double>& omega_grid,
                           const SpectrumOptions& opts) {
    params.validate();
    if (!(pump > 0.0) || !std::isfinite(pump)) throw InvalidArgument("pump rate must be positive");
    if (!(params.kappa_a > 0.0) || !(params.kappa_b > 0.0))
        throw InvalidArgument("emission spectrum needs kappa_a, kappa_b > 0");
    if (omega_grid.empty()) throw InvalidArgument("frequency grid is empty");

    const HilbertSpace space = params.space();
    const Operator h = rotating_frame(build_h0(params) + build_hint(params), params.omega_o);
    auto c_ops = collapse_operators(params);
    for (auto& c : pump_operators(pump, space)) c_ops.push_back(std::move(c));
    const Liouvillian L = build_liouvillian(h, c_ops);
    const DensityMatrix rho = steadystate(L);

    const Matrix a = embed(fock_annihilation(params.fock_cutoff), kSlotModeA, space).matrix;
    const Matrix b = embed(fock_annihilation(params.fock_cutoff), kSlotModeB, space).matrix;

    const Sector sector = emission_sector(space);
    const Matrix block = sector_block(L, sector);
    const auto m = block.rows();

    // columns: a-channel, b-channel
    Eigen::MatrixXcd x(m, 2), w(m, 2);
    x.col(0) = restrict(a * rho.matrix(), sector);
    x.col(1) = restrict(b * rho.matrix(), sector);
    w.col(0) = trace_functional(a, sector);
    w.col(1) = trace_functional(b, sector);

    RowMatrix hm;
    Matrix q;
    hessenberg(block, hm, q);
    const Eigen::MatrixXcd u = q.adjoint() * x;
    const Eigen::MatrixXcd v = q.transpose() * w;

    Spectrum out;
    out.omegas = omega_grid;
    out.values.resize(omega_grid.size());
    out.params = params;
    out.pump = pump;

    RowMatrix work(m, m);
    Eigen::MatrixXcd rhs(m, 2);
    double peak = 0.0;
    for (std::size_t k = 0; k < omega_grid.size(); ++k) {
        rhs = u;
        hessenberg_solve(hm, cplx(0.0, omega_grid[k]), work, rhs);
        const cplx r = v.cwiseProduct(rhs).sum();
        out.values[k] = 2.0 * r.real();
        peak = std::max(peak, out.values[k]);
    }
    for (double& s : out.values) {
        if (s < -1e-10 * std::max(1.0, peak)) throw std::runtime_error("emission spectrum has negative values");
        s = std::max(s, 0.0);
    }

    auto& diag = out.diagnostics;
    diag.sector_dim = static_cast<std::size_t>(m);
    diag.mean_photons = (expectation(rho.matrix(), a.adjoint() * a) + expectation(rho.matrix(), b.adjoint() * b)).real();
    diag.tau_max = 10.0 / std::min(std::min(params.kappa_a, params.kappa_b), min_positive_gamma(params));
    if (opts.diagnostics) {
        Eigen::VectorXcd lambda;
        Matrix vecs;
        eigen_decompose(block, lambda, vecs);
        const Eigen::PartialPivLU<Matrix> lu(vecs);
        const Eigen::MatrixXcd right = lu.solve(x);
        const Eigen::MatrixXcd left = vecs.transpose() * w;
        diag.eigenvalues.resize(static_cast<std::size_t>(m));
        diag.weights.resize(static_cast<std::size_t>(m));
        for (Eigen::Index k = 0; k < m; ++k) {
            diag.eigenvalues[static_cast<std::size_t>(k)] = lambda(k);
            diag.weights[static_cast<std::size_t>(k)] = left(k, 0) * right(k, 0) + left(k, 1) * right(k, 1);
        }
        const double c0 = std::abs(correlation(diag, 0.0));
        diag.tail_ratio = c0 > 0.0 ? std::abs(correlation(diag, diag.tau_max)) / c0 : 0.0;
    }
    return out;
}

cplx correlation(const SpectrumDiagnostics& diag, double tau) {
    cplx c{};
    for (std::size_t k = 0; k < diag.eigenvalues.size(); ++k) c += diag.weights[k] * std::exp(diag.eigenvalues[k] * tau);
    return c;
}

std::vector<cplx> slow_eigenvalues(const SpectrumDiagnostics& diag, double max_decay) {
    std::vector<cplx> out;
    for (const auto& l : diag.eigenvalues)
        if (std::abs(l.real()) <= max_decay) out.push_back(l);
    std::sort(out.begin(), out.end(), [](cplx x, cplx y) { return x.imag() < y.imag(); });
    return out;
}

std::vector<Peak> find_peaks(const std::vector<double>& omegas, const std::vector<double>& values,
                             double min_prominence) {
    if (omegas.size() != values.size()) throw InvalidArgument("find_peaks: grid and values differ in length");
    std::vector<Peak> peaks;
    const std::size_t n = values.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(values[i] > values[i - 1] && values[i] >= values[i + 1])) continue;
        // plateau: skip unless it eventually descends on the right
        std::size_t j = i;
        while (j + 1 < n && values[j + 1] == values[i]) ++j;
        if (j + 1 >= n) continue;
        double left_min = values[i];
        for (std::size_t k = i; k-- > 0;) {
            if (values[k] > values[i]) break;
            left_min = std::min(left_min, values[k]);
        }
        double right_min = values[i];
        for (std::size_t k = j + 1; k < n; ++k) {
            if (values[k] > values[i]) break;
            right_min = std::min(right_min, values[k]);
        }
        const double prom = values[i] - std::max(left_min, right_min);
        if (prom > min_prominence) peaks.push_back({0.5 * (omegas[i] + omegas[j]), values[i], prom});
        i = j;
    }
    return peaks;
}

std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence) {
    return find_peaks(s.omegas, s.values, min_prominence);
}

namespace {

struct OneExcitation {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;  // columns, basis order |1,0,1>,|0,1,1>,|1,0,2>,|0,1,2>,|0,0,3>,|0,0,4>
};

OneExcitation one_excitation(const SystemParams& params) {
    SystemParams p = params;
    p.fock_cutoff = 2;
    const HilbertSpace space = p.space();
    const Matrix h = (build_h0(p) + build_hint(p)).matrix;
    const std::array<std::vector<std::size_t>, 6> basis{{
        {1, 0, 0}, {0, 1, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}, {0, 0, 3}}};
    Matrix blk(6, 6);
    for (Eigen::Index r = 0; r < 6; ++r)
        for (Eigen::Index c = 0; c < 6; ++c)
            blk(r, c) = h(static_cast<Eigen::Index>(space.flatten(basis[static_cast<std::size_t>(r)])),
                          static_cast<Eigen::Index>(space.flatten(basis[static_cast<std::size_t>(c)])));
    Eigen::SelfAdjointEigenSolver<Matrix> es(blk);
    return {es.eigenvalues(), es.eigenvectors()};
}

// Best assignment of current eigenvectors to previous branches by total overlap.
std::vector<int> match(const Eigen::MatrixXcd& prev, const Eigen::MatrixXcd& cur) {
    const int n = static_cast<int>(prev.cols());
    const Eigen::MatrixXd ov = (prev.adjoint() * cur).cwiseAbs2();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_score = -1.0;
    do {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += ov(k, perm[static_cast<std::size_t>(k)]);
        if (s > best_score + 1e-12) {
            best_score = s;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

EigenBranches single_excitation_eigenvalues(const SystemParams& params, const std::vector<double>& b_grid,
                                            bool include_cavity) {
    params.validate();
    if (b_grid.empty()) throw InvalidArgument("field grid is empty");
    EigenBranches out;
    out.b_grid = b_grid;

    if (!include_cavity) {
        out.labels = {"w13", "w14", "w23", "w24"};
        out.branches.assign(4, std::vector<double>(b_grid.size()));
        out.energies.assign(4, std::vector<double>(b_grid.size()));
        const std::array<std::pair<int, int>, 4> lines{{{1, 3}, {1, 4}, {2, 3}, {2, 4}}};
        for (std::size_t i = 0; i < b_grid.size(); ++i) {
            SystemParams p = params;
            p.B = b_grid[i];
            for (std::size_t k = 0; k < 4; ++k) {
                out.branches[k][i] = p.transition(lines[k].first, lines[k].second) - p.omega_o;
                out.energies[k][i] = p.transition(lines[k].first, lines[k].second);
            }
        }
    } else {
        out.labels = {"e1", "e2", "e3", "e4", "e5", "e6"};
        out.branches.assign(6, std::vector<double>(b_grid.size()));
        out.energies.assign(6, std::vector<double>(b_grid.size()));
        Eigen::MatrixXcd prev;
        for (std::size_t i = 0; i < b_grid.size(); ++i) {
            SystemParams p = params;
            p.B = b_grid[i];
            const OneExcitation ex = one_excitation(p);
            std::vector<int> order(6);
            std::iota(order.begin(), order.end(), 0);
            if (i > 0) order = match(prev, ex.vectors);
            Eigen::MatrixXcd tracked(6, 6);
            const auto e = p.level_energies();
            for (std::size_t k = 0; k < 6; ++k) {
                const Eigen::Index c = order[k];
                tracked.col(static_cast<Eigen::Index>(k)) = ex.vectors.col(c);
                const auto& v = ex.vectors.col(c);
                const double w1 = std::norm(v(0)) + std::norm(v(1));
                const double w2 = std::norm(v(2)) + std::norm(v(3));
                const double ground = (w2 > w1 + 1e-12) ? e[1] : e[0];
                out.energies[k][i] = ex.energies(c);
                out.branches[k][i] = ex.energies(c) - ground - p.omega_o;
            }
            prev = tracked;
        }
    }

    out.sorted.resize(b_grid.size());
    for (std::size_t i = 0; i < b_grid.size(); ++i) {
        for (const auto& br : out.branches) out.sorted[i].push_back(br[i]);
        std::sort(out.sorted[i].begin(), out.sorted[i].end());
    }
    return out;
}

}  // namespace qdspin
