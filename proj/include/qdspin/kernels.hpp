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

// Inner loops of the master-equation solver: CSR complex mat-vec and the
// vector updates of the Runge-Kutta integrator.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at first use from CPUID;
// QDSPIN_SIMD=scalar in the environment forces the reference path. The two
// variants differ only in summation order, so results agree to rounding.

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qdspin::kernels {

using cplx = std::complex<double>;

/// Borrowed view of a row-major compressed sparse matrix.
struct CsrView {
    std::size_t rows = 0;
    std::span<const int> row_ptr;  // rows + 1 entries
    std::span<const int> cols;
    std::span<const cplx> vals;
};

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Override the runtime choice (tests, benchmarks). Throws if the ISA is unavailable.
void set_active_isa(Isa isa);

// y = A x
void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y);
// y += alpha * A x
void csr_matvec_acc(const CsrView& a, cplx alpha, std::span<const cplx> x, std::span<cplx> y);
// y += alpha * x
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
// out = x + sum_k coef[k] * vecs[k]   (Runge-Kutta stage combination)
void lincomb(std::span<const cplx> x, std::span<const double> coef,
             std::span<const cplx* const> vecs, std::span<cplx> out);
// sqrt(mean_i (|err_i| / (atol + rtol * max(|y0_i|, |y1_i|)))^2)
double scaled_rms(std::span<const cplx> err, std::span<const cplx> y0, std::span<const cplx> y1,
                  double atol, double rtol);

namespace scalar {
void csr_matvec_acc(const CsrView& a, cplx alpha, const cplx* x, cplx* y, bool overwrite);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
void lincomb(const cplx* x, const double* coef, const cplx* const* vecs, std::size_t nvec,
             cplx* out, std::size_t n);
double scaled_rms(const cplx* err, const cplx* y0, const cplx* y1, std::size_t n, double atol,
                  double rtol);
}  // namespace scalar

#if defined(QDSPIN_HAVE_AVX2)
namespace avx2 {
void csr_matvec_acc(const CsrView& a, cplx alpha, const cplx* x, cplx* y, bool overwrite);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
void lincomb(const cplx* x, const double* coef, const cplx* const* vecs, std::size_t nvec,
             cplx* out, std::size_t n);
double scaled_rms(const cplx* err, const cplx* y0, const cplx* y1, std::size_t n, double atol,
                  double rtol);
}  // namespace avx2
#endif

}  // namespace qdspin::kernels
