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

// AVX2 + FMA kernels. This file is the only one compiled with -mavx2 -mfma;
// callers reach it through the dispatcher after a CPUID check.
//
// Layout: std::complex<double> is [re, im], so one __m256d carries two
// complex values [re0, im0, re1, im1].

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "qdspin/kernels.hpp"

namespace qdspin::kernels::avx2 {

namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

// Sum of the two complex lanes.
inline cplx hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    double out[2];
    _mm_storeu_pd(out, s);
    return {out[0], out[1]};
}

}  // namespace

void csr_matvec_acc(const CsrView& a, cplx alpha, const cplx* x, cplx* y, bool overwrite) {
    const int* rp = a.row_ptr.data();
    const int* ci = a.cols.data();
    const cplx* v = a.vals.data();
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t r = 0; r < a.rows; ++r) {
        // s1 accumulates [vr*xr, vr*xi], s2 accumulates [vi*xi, vi*xr];
        // the row sum is addsub(s1, s2).
        __m256d s1 = _mm256_setzero_pd();
        __m256d s2 = _mm256_setzero_pd();
        int k = rp[r];
        const int end = rp[r + 1];
        for (; k + 1 < end; k += 2) {
            const __m256d vv = _mm256_loadu_pd(dp(v + k));
            const __m256d xv = _mm256_set_m128d(_mm_loadu_pd(dp(x + ci[k + 1])),
                                                _mm_loadu_pd(dp(x + ci[k])));
            const __m256d vre = _mm256_movedup_pd(vv);
            const __m256d vim = _mm256_permute_pd(vv, 0xF);
            const __m256d xsw = _mm256_permute_pd(xv, 0x5);
            s1 = _mm256_fmadd_pd(vre, xv, s1);
            s2 = _mm256_fmadd_pd(vim, xsw, s2);
        }
        cplx sum = hsum(_mm256_addsub_pd(s1, s2));
        if (k < end) {
            const cplx vv = v[k], xv = x[ci[k]];
            sum += cplx(vv.real() * xv.real() - vv.imag() * xv.imag(),
                        vv.real() * xv.imag() + vv.imag() * xv.real());
        }
        const cplx out(ar * sum.real() - ai * sum.imag(), ar * sum.imag() + ai * sum.real());
        if (overwrite) y[r] = out;
        else y[r] += out;
    }
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const __m256d are = _mm256_set1_pd(alpha.real());
    const __m256d aim = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(dp(x + i));
        const __m256d xsw = _mm256_permute_pd(xv, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(are, xv, _mm256_mul_pd(aim, xsw));
        _mm256_storeu_pd(dp(y + i), _mm256_add_pd(_mm256_loadu_pd(dp(y + i)), prod));
    }
    if (i < n) scalar::axpy(alpha, x + i, y + i, n - i);
}

void lincomb(const cplx* x, const double* coef, const cplx* const* vecs, std::size_t nvec,
             cplx* out, std::size_t n) {
    const std::size_t nd = 2 * n;
    const double* xd = dp(x);
    double* od = dp(out);
    std::size_t i = 0;
    for (; i + 4 <= nd; i += 4) {
        __m256d acc = _mm256_loadu_pd(xd + i);
        for (std::size_t k = 0; k < nvec; ++k)
            acc = _mm256_fmadd_pd(_mm256_set1_pd(coef[k]), _mm256_loadu_pd(dp(vecs[k]) + i), acc);
        _mm256_storeu_pd(od + i, acc);
    }
    for (; i < nd; ++i) {
        double acc = xd[i];
        for (std::size_t k = 0; k < nvec; ++k) acc += coef[k] * dp(vecs[k])[i];
        od[i] = acc;
    }
}

double scaled_rms(const cplx* err, const cplx* y0, const cplx* y1, std::size_t n, double atol,
                  double rtol) {
    if (n == 0) return 0.0;
    const __m256d vatol = _mm256_set1_pd(atol);
    const __m256d vrtol = _mm256_set1_pd(rtol);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        const __m256d e = _mm256_loadu_pd(dp(err + i));
        const __m256d a = _mm256_loadu_pd(dp(y0 + i));
        const __m256d b = _mm256_loadu_pd(dp(y1 + i));
        // hadd(v*v, v*v) = [|v0|^2, |v0|^2, |v1|^2, |v1|^2]
        const __m256d e2 = _mm256_hadd_pd(_mm256_mul_pd(e, e), _mm256_mul_pd(e, e));
        const __m256d a2 = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(a, a));
        const __m256d b2 = _mm256_hadd_pd(_mm256_mul_pd(b, b), _mm256_mul_pd(b, b));
        const __m256d mag = _mm256_sqrt_pd(_mm256_max_pd(a2, b2));
        const __m256d sc = _mm256_fmadd_pd(vrtol, mag, vatol);
        acc = _mm256_add_pd(acc, _mm256_div_pd(e2, _mm256_mul_pd(sc, sc)));
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    // each complex entry was counted twice
    double total = 0.5 * (lanes[0] + lanes[1] + lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        total += std::norm(err[i]) / (sc * sc);
    }
    return std::sqrt(total / static_cast<double>(n));
}

}  // namespace qdspin::kernels::avx2
