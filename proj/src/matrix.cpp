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

#include "hsed/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsed/errors.hpp"

namespace hsed {

namespace {

bool all_finite(std::span<const cplx> xs)
{
    return std::all_of(xs.begin(), xs.end(), [](const cplx& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

std::string shape(const CMatrix& a)
{
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

} // namespace

// ---- CVector -----------------------------------------------------------

CVector::CVector(std::size_t dim) : data_(dim) {}

CVector::CVector(std::vector<cplx> entries) : data_(std::move(entries))
{
    if (!all_finite(data_))
        throw DimensionError("CVector: non-finite entry");
}

CVector::CVector(std::initializer_list<cplx> entries) : CVector(std::vector<cplx>(entries)) {}

double CVector::norm() const
{
    // scaled accumulation avoids overflow for large entries
    double scale = 0.0;
    for (const auto& z : data_)
        scale = std::max(scale, std::abs(z));
    if (scale == 0.0)
        return 0.0;
    double s = 0.0;
    for (const auto& z : data_)
        s += std::norm(z / scale);
    return scale * std::sqrt(s);
}

double CVector::norm1() const
{
    double s = 0.0;
    for (const auto& z : data_)
        s += std::abs(z);
    return s;
}

CVector& CVector::operator+=(const CVector& other)
{
    if (other.dim() != dim())
        throw DimensionError("CVector +=: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

CVector& CVector::operator-=(const CVector& other)
{
    if (other.dim() != dim())
        throw DimensionError("CVector -=: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

CVector& CVector::operator*=(cplx s)
{
    for (auto& z : data_)
        z *= s;
    return *this;
}

cplx dot(const CVector& a, const CVector& b)
{
    if (a.dim() != b.dim())
        throw DimensionError("dot: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

// ---- CMatrix -----------------------------------------------------------

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries))
{
    if (data_.size() != rows_ * cols_)
        throw DimensionError("CMatrix: expected " + std::to_string(rows_ * cols_) + " entries, got " +
                             std::to_string(data_.size()));
    if (!all_finite(data_))
        throw DimensionError("CMatrix: non-finite entry");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw DimensionError("CMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    if (!all_finite(data_))
        throw DimensionError("CMatrix: non-finite entry");
}

CMatrix CMatrix::identity(std::size_t n)
{
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values)
{
    CMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        m(i, i) = values[i];
    return m;
}

CMatrix CMatrix::from_columns(std::span<const CVector> columns)
{
    if (columns.empty())
        return {};
    CMatrix m(columns.front().dim(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        m.set_col(j, columns[j]);
    return m;
}

CVector CMatrix::col(std::size_t j) const
{
    if (j >= cols_)
        throw DimensionError("CMatrix::col: index out of range");
    CVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        v[i] = (*this)(i, j);
    return v;
}

void CMatrix::set_col(std::size_t j, const CVector& v)
{
    if (j >= cols_ || v.dim() != rows_)
        throw DimensionError("CMatrix::set_col: shape mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, j) = v[i];
}

CMatrix CMatrix::col_block(std::size_t first, std::size_t count) const
{
    return block(0, first, rows_, count);
}

CMatrix CMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const
{
    if (row0 + nrows > rows_ || col0 + ncols > cols_)
        throw DimensionError("CMatrix::block: out of range for " + shape(*this));
    CMatrix b(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j)
            b(i, j) = (*this)(row0 + i, col0 + j);
    return b;
}

CMatrix& CMatrix::operator+=(const CMatrix& other)
{
    if (other.rows_ != rows_ || other.cols_ != cols_)
        throw DimensionError("CMatrix +=: " + shape(*this) + " vs " + shape(other));
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other)
{
    if (other.rows_ != rows_ || other.cols_ != cols_)
        throw DimensionError("CMatrix -=: " + shape(*this) + " vs " + shape(other));
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s)
{
    for (auto& z : data_)
        z *= s;
    return *this;
}

// ---- free functions ----------------------------------------------------

CMatrix matmul(const CMatrix& a, const CMatrix& b)
{
    if (a.cols() != b.rows())
        throw DimensionError("matmul: " + shape(a) + " * " + shape(b));
    CMatrix c(a.rows(), b.cols());
    // i-k-j order keeps the inner loop contiguous in both b and c
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{})
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

CMatrix hermitian(const CMatrix& a)
{
    CMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            t(j, i) = std::conj(a(i, j));
    return t;
}

CVector matvec(const CMatrix& a, const CVector& x)
{
    if (a.cols() != x.dim())
        throw DimensionError("matvec: " + shape(a) + " * vector of dim " + std::to_string(x.dim()));
    CVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j)
            s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

CVector matvec_adjoint(const CMatrix& a, const CVector& x)
{
    if (a.rows() != x.dim())
        throw DimensionError("matvec_adjoint: (" + shape(a) + ")† * vector of dim " + std::to_string(x.dim()));
    CVector y(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const cplx xi = x[i];
        for (std::size_t j = 0; j < a.cols(); ++j)
            y[j] += std::conj(a(i, j)) * xi;
    }
    return y;
}

CMatrix as_column(const CVector& v)
{
    return CMatrix(v.dim(), 1, std::vector<cplx>(v.entries().begin(), v.entries().end()));
}

double frobenius_norm_sq(const CMatrix& a)
{
    double s = 0.0;
    for (const auto& z : a.entries())
        s += std::norm(z);
    return s;
}

double frobenius_norm(const CMatrix& a)
{
    return std::sqrt(frobenius_norm_sq(a));
}

cplx trace(const CMatrix& a)
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i)
        s += a(i, i);
    return s;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("max_abs_diff: " + shape(a) + " vs " + shape(b));
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

double max_abs_diff(const CVector& a, const CVector& b)
{
    if (a.dim() != b.dim())
        throw DimensionError("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double orthonormality_defect(const CMatrix& a)
{
    CMatrix g = matmul(hermitian(a), a);
    g -= CMatrix::identity(a.cols());
    return frobenius_norm(g);
}

} // namespace hsed
