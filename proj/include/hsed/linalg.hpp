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

#include <vector>

#include "hsed/matrix.hpp"

namespace hsed {

struct QrResult {
    CMatrix q; ///< rows x cols, orthonormal columns
    CMatrix r; ///< cols x cols, upper triangular, real positive diagonal
};

/// Thin Householder QR of a tall matrix. The diagonal of r is made real
/// and positive, which fixes the factorization uniquely.
/// Throws DimensionError if rows < cols and RankDeficientError if a pivot
/// falls below 1e-12 times the largest column norm.
QrResult qr_thin(const CMatrix& a);

struct SvdResult {
    CMatrix left;                        ///< rows x k, orthonormal columns
    std::vector<double> singular_values; ///< length k = min(rows, cols), non-increasing
    CMatrix right;                       ///< cols x k, orthonormal columns

    /// left * diag(singular_values) * right†
    CMatrix reconstruct() const;
    /// Number of singular values above rel_tol * sigma_max.
    std::size_t numerical_rank(double rel_tol = 1e-9) const;
};

/// Thin SVD by one-sided (Hestenes) Jacobi rotations.
/// Throws NumericalFailure if the sweeps do not converge.
SvdResult svd(const CMatrix& a);

struct EigResult {
    std::vector<cplx> values; ///< sorted by modulus, descending
    CMatrix vectors;          ///< unit-norm eigenvectors as columns, matching values
};

/// Eigen-decomposition of a general square matrix: Householder reduction to
/// Hessenberg form (skipped on columns that are already reduced) followed by
/// single-shift complex QR to Schur form and back-substitution.
/// Ties in modulus are broken by larger real part, then larger imaginary part.
/// Throws NumericalFailure if the QR iteration stalls.
EigResult eig_dense(const CMatrix& a);

/// Unitary n-point DFT: entry (k, l) = exp(-2πi k l / n) / √n.
CMatrix dft_matrix(std::size_t n);

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
/// Throws NumericalFailure if a is not numerically positive definite.
CMatrix cholesky(const CMatrix& a);
/// Solves a x = b for Hermitian positive definite a.
CMatrix solve_hpd(const CMatrix& a, const CMatrix& b);
/// log det(a) for Hermitian positive definite a.
double log_det_hpd(const CMatrix& a);
/// 2-norm condition number (infinite for singular input).
double condition_number(const CMatrix& a);

} // namespace hsed
