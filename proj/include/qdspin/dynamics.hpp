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

// Master-equation dynamics:
//
//   d rho/dt = -i[H, rho] + sum_j (2 c_j rho c_j^dag - c_j^dag c_j rho - rho c_j^dag c_j)
//
// Note the factor 2 on the sandwich term: sqrt(k) a empties a cavity at rate 2k.
//
// Density matrices are vectorized by column stacking, vec(rho)[i + j*d] = rho(i, j),
// which is Eigen's native column-major storage. vec(A rho B^dag) = (conj(B) (x) A) vec(rho).

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "qdspin/opalg.hpp"

namespace qdspin {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;

class Liouvillian {
public:
    Liouvillian(SparseMatrix super, HilbertSpace space);

    const SparseMatrix& superoperator() const { return super_; }
    const HilbertSpace& space() const { return space_; }
    /// d^2 for a d-dimensional Hilbert space.
    std::size_t dim() const { return static_cast<std::size_t>(super_.rows()); }
    Matrix dense() const { return Matrix(super_); }

    /// y = L x  /  y += alpha L x, through the SIMD kernels.
    void apply(std::span<const cplx> x, std::span<cplx> y) const;
    void apply_add(cplx alpha, std::span<const cplx> x, std::span<cplx> y) const;

    /// Largest absolute row sum; bounds the spectral radius.
    double norm_inf() const;

    Liouvillian& operator+=(const Liouvillian& o);

private:
    SparseMatrix super_;
    HilbertSpace space_;
};

/// -i[H, .] + sum_j D[c_j]. H must be Hermitian to `herm_tol` (Frobenius).
Liouvillian build_liouvillian(const Operator& H, const std::vector<Operator>& c_ops,
                              double herm_tol = 1e-9);

/// Generator L(t) = L_static + sum_k f_k(t) L_k.
struct DriveTerm {
    Liouvillian generator;
    std::function<double(double)> envelope;
};

class TimeDependentLiouvillian {
public:
    explicit TimeDependentLiouvillian(Liouvillian static_part, std::vector<DriveTerm> terms = {});

    const Liouvillian& static_part() const { return static_; }
    const std::vector<DriveTerm>& terms() const { return terms_; }
    const HilbertSpace& space() const { return static_.space(); }
    std::size_t dim() const { return static_.dim(); }

    void apply(double t, std::span<const cplx> x, std::span<cplx> y) const;

private:
    Liouvillian static_;
    std::vector<DriveTerm> terms_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;  // empty unless EvolveOptions::store_states
    std::map<std::string, std::vector<cplx>> observables;
};

struct EvolveOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = 0.0;     // 0: unbounded
    double initial_step = 0.0;  // 0: estimated
    std::size_t max_steps = 5'000'000;
    bool store_states = false;
    std::vector<std::pair<std::string, Operator>> observables;
    /// Called at every output time with the current state; may throw to abort.
    std::function<void(double, const Matrix&)> on_sample;
};

/// Adaptive Dormand-Prince 5(4) integration, sampled exactly at `times`
/// (monotone non-decreasing, times[0] is the initial time).
Trajectory evolve(const DensityMatrix& rho0, const TimeDependentLiouvillian& L,
                  const std::vector<double>& times, const EvolveOptions& opts = {});
Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& L, const std::vector<double>& times,
                  const EvolveOptions& opts = {});

/// Exact propagation exp(L t) vec(rho0) with a dense matrix exponential. Small systems only.
std::vector<Matrix> propagate_expm(const DensityMatrix& rho0, const Liouvillian& L,
                                   const std::vector<double>& times);

/// Unique fixed point of L. Throws NonUniqueSteadyState when the null space is degenerate.
DensityMatrix steadystate(const Liouvillian& L);

/// Number of eigenvalues of L with modulus <= rel_tol * ||L||_inf: exact
/// eigen-decomposition for small L, otherwise shift-invert subspace iteration
/// (which resolves at most 16 of them).
std::size_t null_space_dimension(const Liouvillian& L, double rel_tol = 1e-10);

/// lim t->inf exp(L t) rho0: the steady state when unique, otherwise the state
/// reached from rho0 by integrating until ||L rho|| is negligible.
DensityMatrix asymptotic_state(const Liouvillian& L, const DensityMatrix& rho0,
                               double max_time = 1e4);

/// ||L vec(rho)||_2
double liouvillian_residual(const Liouvillian& L, const Matrix& rho);

cplx expectation(const DensityMatrix& rho, const Operator& op);
cplx expectation(const Matrix& rho, const Matrix& op);

/// QD populations rho_11..rho_44 after tracing out both cavity modes.
std::array<double, 4> qd_populations(const Matrix& rho, const HilbertSpace& space);

/// 2x2 block of the QD reduced state on |1>,|2> (not renormalized).
Eigen::Matrix2cd spin_block(const Matrix& rho, const HilbertSpace& space);

/// Tr[(rho^(1,2))^2] of the unnormalized spin block.
double spin_subspace_purity(const DensityMatrix& rho);
double spin_subspace_purity(const Matrix& rho, const HilbertSpace& space);

/// Largest population found in the top Fock level of either cavity mode.
double top_fock_population(const Matrix& rho, const HilbertSpace& space);

}  // namespace qdspin
