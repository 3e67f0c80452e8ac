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

// Photoluminescence spectra and dressed-state structure.
//
// The emission spectrum is the one-sided transform of the stationary cavity
// field correlation
//
//   S(w) = 2 Re int_0^inf [<a^dag(t) a(0)> + <b^dag(t) b(0)>] e^{-i w t} dt,
//
// with <A(t) B(0)> = Tr[A exp(L t)(B rho_ss)] (quantum regression). B rho_ss
// lives in the coherence sector where the excitation number of the row index
// is one less than that of the column index; L maps that sector onto itself
// whenever H conserves excitations, so the transform reduces to a resolvent
// on that block, evaluated exactly through a Hessenberg reduction.
//
// Frequencies are detunings from omega_o (the frame rotates at omega_o).

#pragma once

#include <string>
#include <vector>

#include "qdspin/dynamics.hpp"
#include "qdspin/model.hpp"

namespace qdspin {

struct SpectrumDiagnostics {
    double mean_photons = 0.0;    // <a^dag a> + <b^dag b> in the steady state
    double tail_ratio = 0.0;      // |C(tau_max)| / |C(0)|, tau_max = 10 / min(kappa, gamma)
    double tau_max = 0.0;
    std::size_t sector_dim = 0;
    std::vector<cplx> eigenvalues;  // spectrum of L on the emission sector
    std::vector<cplx> weights;      // C(tau) = sum_k weights[k] exp(eigenvalues[k] tau)
};

struct Spectrum {
    std::vector<double> omegas;  // detuning from omega_o, rad/ns
    std::vector<double> values;
    SystemParams params;
    double pump = 0.0;
    SpectrumDiagnostics diagnostics;
};

struct SpectrumOptions {
    bool diagnostics = true;  // eigen-decomposition of the emission sector
};

Spectrum emission_spectrum(const SystemParams& params, double pump,
                           const std::vector<double>& omega_grid, const SpectrumOptions& opts = {});

/// Correlation C(tau) from the diagnostics' spectral decomposition.
cplx correlation(const SpectrumDiagnostics& diag, double tau);

/// Emission-sector eigenvalues with decay rate |Re| <= max_decay.
std::vector<cplx> slow_eigenvalues(const SpectrumDiagnostics& diag, double max_decay);

struct Peak {
    double omega;
    double height;
    double prominence;
};

/// Local maxima whose topographic prominence exceeds `min_prominence`, sorted by frequency.
std::vector<Peak> find_peaks(const std::vector<double>& omegas, const std::vector<double>& values,
                             double min_prominence);
std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence);

struct EigenBranches {
    std::vector<double> b_grid;
    /// branches[k][i]: transition energy (detuning from omega_o) of branch k at b_grid[i],
    /// continuity-tracked across the field sweep.
    std::vector<std::vector<double>> branches;
    /// energies[k][i]: the untransformed eigenvalue behind branches[k][i] (lab frame).
    std::vector<std::vector<double>> energies;
    /// sorted[i]: all branch values at b_grid[i] in ascending order.
    std::vector<std::vector<double>> sorted;
    std::vector<std::string> labels;
    std::size_t count() const { return branches.size(); }
};

/// One-excitation structure versus field. Without the cavity: the bare lines
/// w13, w14, w23, w24. With it: eigenvalues of H_o + H_int on
/// {|1,0,1>, |0,1,1>, |1,0,2>, |0,1,2>, |0,0,3>, |0,0,4>}, each minus the energy of
/// the spin ground state carrying the larger weight in its eigenvector (ties go to |1>).
EigenBranches single_excitation_eigenvalues(const SystemParams& params,
                                            const std::vector<double>& b_grid, bool include_cavity);

}  // namespace qdspin
