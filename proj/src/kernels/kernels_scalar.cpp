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

// Reference kernels. Plain loops; complex products are written out so the
// compiler does not route them through the NaN-checking __muldc3 helper.

#include <algorithm>
#include <cmath>

#include "qdspin/kernels.hpp"

namespace qdspin::kernels::scalar {

namespace {
inline void mul_acc(double ar, double ai, double br, double bi, double& sr, double& si) {
    sr += ar * br - ai * bi;
    si += ar * bi + ai * br;
}
}  // namespace

void csr_matvec_acc(const CsrView& a, cplx alpha, const cplx* x, cplx* y, bool overwrite) {
    const int* rp = a.row_ptr.data();
    const int* ci = a.cols.data();
    const cplx* v = a.vals.data();
    for (std::size_t r = 0; r < a.rows; ++r) {
        double sr = 0.0, si = 0.0;
        for (int k = rp[r]; k < rp[r + 1]; ++k) {
            const cplx xv = x[ci[k]];
            mul_acc(v[k].real(), v[k].imag(), xv.real(), xv.imag(), sr, si);
        }
        double outr = 0.0, outi = 0.0;
        mul_acc(alpha.real(), alpha.imag(), sr, si, outr, outi);
        if (overwrite) y[r] = cplx(outr, outi);
        else y[r] += cplx(outr, outi);
    }
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        double yr = y[i].real(), yi = y[i].imag();
        mul_acc(ar, ai, x[i].real(), x[i].imag(), yr, yi);
        y[i] = cplx(yr, yi);
    }
}

void lincomb(const cplx* x, const double* coef, const cplx* const* vecs, std::size_t nvec,
             cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double r = x[i].real(), im = x[i].imag();
        for (std::size_t k = 0; k < nvec; ++k) {
            r += coef[k] * vecs[k][i].real();
            im += coef[k] * vecs[k][i].imag();
        }
        out[i] = cplx(r, im);
    }
}

double scaled_rms(const cplx* err, const cplx* y0, const cplx* y1, std::size_t n, double atol,
                  double rtol) {
    if (n == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double e = std::norm(err[i]) / (sc * sc);
        acc += e;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace qdspin::kernels::scalar
