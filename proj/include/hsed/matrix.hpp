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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hsed {

using cplx = std::complex<double>;

/// Dense complex column vector.
class CVector {
public:
    CVector() = default;
    explicit CVector(std::size_t dim);
    /// Throws DimensionError if any entry is NaN or infinite.
    explicit CVector(std::vector<cplx> entries);
    CVector(std::initializer_list<cplx> entries);

    std::size_t dim() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator[](std::size_t i) { return data_[i]; }
    const cplx& operator[](std::size_t i) const { return data_[i]; }

    std::span<cplx> entries() noexcept { return data_; }
    std::span<const cplx> entries() const noexcept { return data_; }

    /// Euclidean norm.
    double norm() const;
    /// Sum of entry moduli.
    double norm1() const;

    CVector& operator+=(const CVector& other);
    CVector& operator-=(const CVector& other);
    CVector& operator*=(cplx s);

    friend CVector operator+(CVector a, const CVector& b) { return a += b; }
    friend CVector operator-(CVector a, const CVector& b) { return a -= b; }
    friend CVector operator*(CVector a, cplx s) { return a *= s; }
    friend CVector operator*(cplx s, CVector a) { return a *= s; }

    bool operator==(const CVector&) const = default;

private:
    std::vector<cplx> data_;
};

/// a† b.
cplx dot(const CVector& a, const CVector& b);

/// Dense complex matrix, row-major storage.
class CMatrix {
public:
    CMatrix() = default;
    /// Zero matrix.
    CMatrix(std::size_t rows, std::size_t cols);
    /// Row-major entries; throws DimensionError on size mismatch or non-finite entries.
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    /// Nested row lists, e.g. {{1, 2}, {3, 4}}.
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const double> values);
    static CMatrix from_columns(std::span<const CVector> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<cplx> entries() noexcept { return data_; }
    std::span<const cplx> entries() const noexcept { return data_; }

    CVector col(std::size_t j) const;
    void set_col(std::size_t j, const CVector& v);
    /// Columns [first, first + count).
    CMatrix col_block(std::size_t first, std::size_t count) const;
    CMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator-=(const CMatrix& other);
    CMatrix& operator*=(cplx s);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
    friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

    bool operator==(const CMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Standard product; throws DimensionError unless a.cols() == b.rows().
CMatrix matmul(const CMatrix& a, const CMatrix& b);
/// Conjugate transpose.
CMatrix hermitian(const CMatrix& a);
/// a x.
CVector matvec(const CMatrix& a, const CVector& x);
/// a† x without forming a†.
CVector matvec_adjoint(const CMatrix& a, const CVector& x);
/// v as an n x 1 matrix.
CMatrix as_column(const CVector& v);

double frobenius_norm(const CMatrix& a);
double frobenius_norm_sq(const CMatrix& a);
cplx trace(const CMatrix& a);
double max_abs_diff(const CMatrix& a, const CMatrix& b);
double max_abs_diff(const CVector& a, const CVector& b);

/// ‖a†a − I‖_F.
double orthonormality_defect(const CMatrix& a);

} // namespace hsed
