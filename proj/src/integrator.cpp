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

// Dormand-Prince 5(4) with FSAL on vec(rho), stepping exactly onto every
// requested output time.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qdspin/dynamics.hpp"
#include "qdspin/errors.hpp"
#include "qdspin/kernels.hpp"

namespace qdspin {

namespace {

namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr std::array<double, 1> a2{1.0 / 5};
constexpr std::array<double, 2> a3{3.0 / 40, 9.0 / 40};
constexpr std::array<double, 3> a4{44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr std::array<double, 4> a5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
constexpr std::array<double, 5> a6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                   -5103.0 / 18656};
// 5th-order weights (k2 weight is zero and omitted: k1, k3, k4, k5, k6)
constexpr std::array<double, 5> b{35.0 / 384, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
// b - b* for k1, k3, k4, k5, k6, k7
constexpr std::array<double, 6> e{71.0 / 57600,      -71.0 / 16695, 71.0 / 1920,
                                  -17253.0 / 339200, 22.0 / 525,    -1.0 / 40};
}  // namespace dp

using Vec = std::vector<cplx>;

struct Stepper {
    const TimeDependentLiouvillian& L;
    std::size_t n;
    std::array<Vec, 7> k;
    Vec tmp, ynew, err, zero;

    Stepper(const TimeDependentLiouvillian& l, std::size_t n_)
        : L(l), n(n_), tmp(n_), ynew(n_), err(n_), zero(n_) {
        for (auto& v : k) v.assign(n, cplx{});
    }

    template <std::size_t M>
    void stage(const Vec& y, double h, const std::array<double, M>& a, std::size_t first_k) {
        std::array<double, M> coef{};
        std::array<const cplx*, M> vecs{};
        for (std::size_t i = 0; i < M; ++i) {
            coef[i] = h * a[i];
            vecs[i] = k[first_k + i].data();
        }
        kernels::lincomb(y, coef, vecs, tmp);
    }

    // One trial step from (t, y) with k[0] = f(t, y). Returns the scaled error norm.
    double trial(double t, const Vec& y, double h, double atol, double rtol) {
        stage(y, h, dp::a2, 0);
        L.apply(t + dp::c2 * h, tmp, k[1]);
        stage(y, h, dp::a3, 0);
        L.apply(t + dp::c3 * h, tmp, k[2]);
        stage(y, h, dp::a4, 0);
        L.apply(t + dp::c4 * h, tmp, k[3]);
        stage(y, h, dp::a5, 0);
        L.apply(t + dp::c5 * h, tmp, k[4]);
        stage(y, h, dp::a6, 0);
        L.apply(t + h, tmp, k[5]);

        const std::array<double, 5> cb{h * dp::b[0], h * dp::b[1], h * dp::b[2], h * dp::b[3],
                                       h * dp::b[4]};
        const std::array<const cplx*, 5> vb{k[0].data(), k[2].data(), k[3].data(), k[4].data(),
                                            k[5].data()};
        kernels::lincomb(y, cb, vb, ynew);
        L.apply(t + h, ynew, k[6]);

        const std::array<double, 6> ce{h * dp::e[0], h * dp::e[1], h * dp::e[2],
                                       h * dp::e[3], h * dp::e[4], h * dp::e[5]};
        const std::array<const cplx*, 6> ve{k[0].data(), k[2].data(), k[3].data(),
                                            k[4].data(), k[5].data(), k[6].data()};
        kernels::lincomb(zero, ce, ve, err);
        return kernels::scaled_rms(err, y, ynew, atol, rtol);
    }
};

double rms(const Vec& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s / static_cast<double>(std::max<std::size_t>(v.size(), 1)));
}

void record(Trajectory& traj, double t, const Vec& y, std::size_t d, const EvolveOptions& opts) {
    const Eigen::Map<const Matrix> rho(y.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    traj.times.push_back(t);
    if (opts.store_states) traj.states.emplace_back(rho);
    for (const auto& [name, op] : opts.observables) traj.observables[name].push_back(expectation(Matrix(rho), op.matrix));
    if (opts.on_sample) opts.on_sample(t, Matrix(rho));
}

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const TimeDependentLiouvillian& L,
                  const std::vector<double>& times, const EvolveOptions& opts) {
    if (!(rho0.space() == L.space())) throw InvalidDimension("state and Liouvillian spaces differ");
    if (times.empty()) throw InvalidArgument("evolve needs at least one output time");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] >= times[i - 1])) throw InvalidArgument("output times must be monotone");
    for (const auto& [name, op] : opts.observables)
        if (!(op.space == L.space())) throw InvalidDimension("observable '" + name + "' space mismatch");

    const std::size_t d = rho0.dim();
    const std::size_t n = d * d;
    Vec y(rho0.matrix().data(), rho0.matrix().data() + n);

    Trajectory traj;
    for (const auto& [name, op] : opts.observables) traj.observables[name];
    record(traj, times.front(), y, d, opts);

    Stepper st(L, n);
    double t = times.front();
    L.apply(t, y, st.k[0]);

    const double span = times.back() - times.front();
    double h = opts.initial_step;
    if (!(h > 0.0)) {
        const double d0 = rms(y), d1 = rms(st.k[0]);
        h = (d1 > 1e-12 && d0 > 1e-12) ? 0.01 * d0 / d1 : 1e-6;
        if (span > 0.0) h = std::min(h, span);
    }
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

    std::size_t steps = 0;
    for (std::size_t out = 1; out < times.size(); ++out) {
        const double t_out = times[out];
        while (t < t_out) {
            if (++steps > opts.max_steps)
                throw IntegrationFailure("maximum number of steps exceeded", t);
            const double remaining = t_out - t;
            const bool last = h >= remaining;
            const double h_try = last ? remaining : h;
            const double err = st.trial(t, y, h_try, opts.atol, opts.rtol);
            if (!std::isfinite(err)) {
                h = 0.25 * h_try;
            } else if (err <= 1.0) {
                t = last ? t_out : t + h_try;
                std::swap(y, st.ynew);
                std::swap(st.k[0], st.k[6]);
                const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                // keep the controller's step when this one was shortened to hit t_out
                const double grown = h_try * std::clamp(fac, 0.2, 5.0);
                h = last ? std::max(h, grown) : grown;
            } else {
                h = h_try * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            }
            if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
            if (h < 1e-14 * std::max(1.0, std::abs(t)))
                throw IntegrationFailure("step size underflow at t = " + std::to_string(t), t);
        }
        record(traj, t_out, y, d, opts);
    }
    return traj;
}

Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& L, const std::vector<double>& times,
                  const EvolveOptions& opts) {
    return evolve(rho0, TimeDependentLiouvillian(L), times, opts);
}

std::vector<Matrix> propagate_expm(const DensityMatrix& rho0, const Liouvillian& L,
                                   const std::vector<double>& times) {
    if (!(rho0.space() == L.space())) throw InvalidDimension("state and Liouvillian spaces differ");
    const Matrix dense = L.dense();
    const auto d = static_cast<Eigen::Index>(rho0.dim());
    const Eigen::Map<const Eigen::VectorXcd> v0(rho0.matrix().data(), d * d);
    std::vector<Matrix> out;
    out.reserve(times.size());
    for (double t : times) {
        const Matrix prop = (dense * cplx(t - times.front(), 0.0)).exp();
        Eigen::VectorXcd v = prop * v0;
        out.emplace_back(Eigen::Map<Matrix>(v.data(), d, d));
    }
    return out;
}

}  // namespace qdspin
