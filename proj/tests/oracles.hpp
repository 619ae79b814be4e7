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

// Independent reference computations used only by the tests. Nothing here
// calls the factorization routines it is used to check.

#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "hsed/matrix.hpp"
#include "hsed/random.hpp"

namespace hsed::oracle {

inline CMatrix naive_matmul(const CMatrix& a, const CMatrix& b)
{
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline CMatrix naive_adjoint(const CMatrix& a)
{
    CMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            t(j, i) = std::conj(a(i, j));
    return t;
}

inline CMatrix random_matrix(SeededRng& rng, std::size_t rows, std::size_t cols)
{
    CMatrix m(rows, cols);
    for (auto& z : m.entries())
        z = cplx{rng.standard_normal(), rng.standard_normal()};
    return m;
}

inline CVector random_vector(SeededRng& rng, std::size_t dim)
{
    CVector v(dim);
    for (auto& z : v.entries())
        z = cplx{rng.standard_normal(), rng.standard_normal()};
    return v;
}

/// Modified Gram-Schmidt applied twice; assumes full column rank.
inline CMatrix gram_schmidt(const CMatrix& a)
{
    CMatrix q = a;
    for (std::size_t j = 0; j < q.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                cplx p = 0.0;
                for (std::size_t i = 0; i < q.rows(); ++i)
                    p += std::conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < q.rows(); ++i)
                    q(i, j) -= p * q(i, k);
            }
        double n = 0.0;
        for (std::size_t i = 0; i < q.rows(); ++i)
            n += std::norm(q(i, j));
        n = std::sqrt(n);
        for (std::size_t i = 0; i < q.rows(); ++i)
            q(i, j) /= n;
    }
    return q;
}

inline CMatrix random_orthonormal(SeededRng& rng, std::size_t rows, std::size_t cols)
{
    return gram_schmidt(random_matrix(rng, rows, cols));
}

/// Dominant d-dimensional invariant subspace of a Hermitian PSD matrix by
/// block power (subspace) iteration.
inline CMatrix subspace_iteration(const CMatrix& a, std::size_t d, std::size_t iters, SeededRng& rng)
{
    CMatrix q = random_orthonormal(rng, a.rows(), d);
    for (std::size_t it = 0; it < iters; ++it)
        q = gram_schmidt(naive_matmul(a, q));
    return q;
}

/// (1/√2) ‖a a† − b b†‖_F evaluated directly.
inline double chordal(const CMatrix& a, const CMatrix& b)
{
    CMatrix pa = naive_matmul(a, naive_adjoint(a));
    CMatrix pb = naive_matmul(b, naive_adjoint(b));
    double s = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i)
        s += std::norm(pa.entries()[i] - pb.entries()[i]);
    return std::sqrt(s / 2.0);
}

inline double frob_diff(const CMatrix& a, const CMatrix& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::norm(a.entries()[i] - b.entries()[i]);
    return std::sqrt(s);
}

/// log |det a| by Gaussian elimination with partial pivoting.
inline double log_abs_det(CMatrix a)
{
    const std::size_t n = a.rows();
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k)))
                piv = i;
        for (std::size_t j = 0; j < n; ++j)
            std::swap(a(k, j), a(piv, j));
        acc += std::log(std::abs(a(k, k)));
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
        }
    }
    return acc;
}

// Closed-form rank-one split x = f g + e computed from scratch: returns e.
inline CVector decomposition_error(const CVector& x)
{
    const double n = static_cast<double>(x.dim());
    double l1 = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i)
        l1 += std::abs(x[i]);
    CVector e(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const double ph = x[i] == cplx{} ? 0.0 : std::arg(x[i]);
        e[i] = x[i] - std::polar(1.0 / std::sqrt(n), ph) * (l1 / std::sqrt(n));
    }
    return e;
}

// d² A†A q − d² A†A e_t − d A† e_r, every term evaluated independently.
inline CVector raid_echo(const CMatrix& a, const CVector& q, double d)
{
    const CMatrix ah = naive_adjoint(a);
    const CMatrix gram = naive_matmul(ah, a);
    const CVector et = decomposition_error(q);
    const CVector s_agg = matvec(a, q - et) * cplx{d};
    const CVector er = decomposition_error(s_agg);
    return matvec(gram, q) * cplx{d * d} - matvec(gram, et) * cplx{d * d} - matvec(ah, er) * cplx{d};
}

/// Unitary DFT entry by entry.
inline CMatrix dft(std::size_t n)
{
    CMatrix f(n, n);
    const double pi = std::acos(-1.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            f(k, l) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                 -2.0 * pi * static_cast<double>((k * l) % n) / static_cast<double>(n));
    return f;
}

} // namespace hsed::oracle
