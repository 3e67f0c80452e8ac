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


// Shared fixtures for the unit tests: seeded random operators and states.

#pragma once

#include <random>

#include "qdspin/opalg.hpp"

namespace qdspin::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
    const Matrix m = random_matrix(rng, n);
    return 0.5 * (m + m.adjoint());
}

inline DensityMatrix random_state(std::mt19937_64& rng, const HilbertSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.total());
    const Matrix m = random_matrix(rng, n);
    Matrix rho = m * m.adjoint();
    rho /= rho.trace();
    return DensityMatrix(rho, space);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qdspin::testing
