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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdspin {

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidLevel : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidHamiltonian : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised by the adaptive integrator; carries the last time at which the state was accepted.
struct IntegrationFailure : std::runtime_error {
    IntegrationFailure(const std::string& what, double last_good_time)
        : std::runtime_error(what), last_good_time(last_good_time) {}
    double last_good_time;
};

struct NonUniqueSteadyState : std::runtime_error {
    explicit NonUniqueSteadyState(std::size_t null_dim)
        : std::runtime_error("steady state is not unique: null space dimension " +
                             std::to_string(null_dim)),
          null_space_dim(null_dim) {}
    std::size_t null_space_dim;
};

/// The truncated Fock space cannot hold the driven photon population.
struct BasisTooSmall : std::runtime_error {
    BasisTooSmall(std::size_t cutoff, double top_population)
        : std::runtime_error("Fock cutoff " + std::to_string(cutoff) +
                             " too small: top-level population " + std::to_string(top_population) +
                             "; increase params.fock_cutoff"),
          cutoff(cutoff), top_population(top_population) {}
    std::size_t cutoff;
    double top_population;
};

/// A sweep cell failed; wraps the underlying solver message with the cell coordinates.
struct SweepCellFailure : std::runtime_error {
    SweepCellFailure(std::size_t cell, const std::string& coordinates, const std::string& cause)
        : std::runtime_error("sweep cell " + std::to_string(cell) + " (" + coordinates + "): " + cause),
          cell(cell), coordinates(coordinates) {}
    std::size_t cell;
    std::string coordinates;
};

/// A scenario file or override failed to parse or validate. `line` is 0 when
/// the problem is not tied to a position in the file.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& source, std::size_t line, const std::string& field, const std::string& message)
        : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                             (field.empty() ? std::string() : field + ": ") + message),
          line(line), field(field) {}
    std::size_t line;
    std::string field;
};

}  // namespace qdspin
