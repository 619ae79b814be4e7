// SPDX-License-Identifier: Apache-2.0
//
// hsed: subspace estimation and decomposition for hybrid mmWave MIMO
// Copyright (C) 2026 The hsed authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hsed/matrix.hpp"

namespace hsed {

/// Member of the constant-modulus set S_{p,q}: entry (i, j) = e^{j·phase(i,j)} / √p.
class UnitModulusMatrix {
public:
    UnitModulusMatrix() = default;
    UnitModulusMatrix(std::size_t rows, std::size_t cols, std::vector<double> phases);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double phase(std::size_t i, std::size_t j) const { return phases_[i * cols_ + j]; }
    std::span<const double> phases() const noexcept { return phases_; }

    /// Realized complex entries.
    CMatrix matrix() const;
    CVector column(std::size_t j) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> phases_;
};

/// Euclidean projection onto S_{p,q}: keep the phase of every entry, set the
/// modulus to 1/√p. Zero entries take phase 0.
UnitModulusMatrix project_unit_modulus(const CMatrix& a);

struct DecompositionResult {
    UnitModulusMatrix analog;           ///< M x k constant-modulus factor
    CMatrix digital;                    ///< k x d digital factor
    std::vector<double> objective_trace; ///< ‖target − F G‖_F² after each round / selection
    double objective = 0.0;             ///< objective of the returned iterate
    std::size_t iterations = 0;
    bool converged = false;
    bool regularized = false;           ///< a ridge was added to an ill-conditioned solve
    std::vector<std::size_t> atoms;     ///< dictionary columns chosen (OMP only)

    CMatrix product() const { return matmul(analog.matrix(), digital); }
};

struct BcdOptions {
    std::size_t max_iters = 500;
    double tol = 1e-8;
    std::uint64_t seed = 0;  ///< seeds the random G0
    bool warm_start = false; ///< F0 = Π_S(target) followed by a G-step instead of a random G0
    /// false drops Π_S (plain BCD, a diagnostic); the result then carries an
    /// empty analog factor and only the trace and digital factor are meaningful.
    bool project = true;
    /// Called with (target, F, G) after every G-update.
    std::function<void(const CMatrix& target, const CMatrix& f, const CMatrix& g)> on_g_update;
};

/// Block coordinate descent for subspace decomposition: alternate
///   F ← Π_S[T G†(G G†)⁻¹],  G ← (F†F)⁻¹ F† T
/// until the relative change of ‖T − F G‖_F² over one round drops below tol.
/// Returns the best iterate seen. The target must have orthonormal columns.
DecompositionResult bcd_sd(const CMatrix& target, const BcdOptions& options = {});

struct BeamformResult {
    UnitModulusMatrix f; ///< M x 1
    double g = 0.0;      ///< non-negative gain
    CVector error;       ///< gamma − f g
};

/// Closed-form rank-one decomposition: f_i = e^{j arg γ_i}/√M, g = ‖γ‖₁/√M.
/// Throws DimensionError for an empty or zero vector.
BeamformResult beamform_decompose(const CVector& gamma);

/// Greedy baseline: select r dictionary columns one at a time by largest
/// ‖column† R‖² against the current residual R, re-fitting the digital factor
/// by least squares after every selection. Ties go to the lowest index.
DecompositionResult omp_decompose(const CMatrix& target, const CMatrix& dictionary, std::size_t r);

} // namespace hsed
