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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qdspin/errors.hpp"
#include "qdspin/kernels.hpp"

namespace qdspin::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(QDSPIN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("QDSPIN_SIMD")) {
        if (std::string_view(env) == "scalar") return Isa::scalar;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

void check_len(std::size_t a, std::size_t b) {
    if (a != b) throw InvalidDimension("kernel operand lengths differ");
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) throw std::runtime_error(std::string("ISA unavailable: ") + isa_name(isa));
    current().store(isa, std::memory_order_relaxed);
}

void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
    check_len(y.size(), a.rows);
#if defined(QDSPIN_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::csr_matvec_acc(a, 1.0, x.data(), y.data(), true);
#endif
    scalar::csr_matvec_acc(a, 1.0, x.data(), y.data(), true);
}

void csr_matvec_acc(const CsrView& a, cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    check_len(y.size(), a.rows);
#if defined(QDSPIN_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::csr_matvec_acc(a, alpha, x.data(), y.data(), false);
#endif
    scalar::csr_matvec_acc(a, alpha, x.data(), y.data(), false);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    check_len(x.size(), y.size());
#if defined(QDSPIN_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::axpy(alpha, x.data(), y.data(), x.size());
#endif
    scalar::axpy(alpha, x.data(), y.data(), x.size());
}

void lincomb(std::span<const cplx> x, std::span<const double> coef,
             std::span<const cplx* const> vecs, std::span<cplx> out) {
    check_len(x.size(), out.size());
    check_len(coef.size(), vecs.size());
#if defined(QDSPIN_HAVE_AVX2)
    if (active_isa() == Isa::avx2)
        return avx2::lincomb(x.data(), coef.data(), vecs.data(), vecs.size(), out.data(), x.size());
#endif
    scalar::lincomb(x.data(), coef.data(), vecs.data(), vecs.size(), out.data(), x.size());
}

double scaled_rms(std::span<const cplx> err, std::span<const cplx> y0, std::span<const cplx> y1,
                  double atol, double rtol) {
    check_len(err.size(), y0.size());
    check_len(err.size(), y1.size());
#if defined(QDSPIN_HAVE_AVX2)
    if (active_isa() == Isa::avx2)
        return avx2::scaled_rms(err.data(), y0.data(), y1.data(), err.size(), atol, rtol);
#endif
    return scalar::scaled_rms(err.data(), y0.data(), y1.data(), err.size(), atol, rtol);
}

}  // namespace qdspin::kernels
