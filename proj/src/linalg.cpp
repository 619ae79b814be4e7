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

#include "hsed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "hsed/errors.hpp"

namespace hsed {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

cplx unit_phase(cplx z)
{
    const double m = std::abs(z);
    return m == 0.0 ? cplx{1.0, 0.0} : z / m;
}

// Householder vector v (unit norm) and alpha such that (I - 2vv†) x = alpha e1.
// Returns false when x is zero.
bool householder(std::vector<cplx>& x, cplx& alpha)
{
    double nx = 0.0;
    for (const auto& z : x)
        nx += std::norm(z);
    nx = std::sqrt(nx);
    if (nx == 0.0) {
        alpha = 0.0;
        return false;
    }
    alpha = -unit_phase(x[0]) * nx;
    x[0] -= alpha;
    double nv = 0.0;
    for (const auto& z : x)
        nv += std::norm(z);
    nv = std::sqrt(nv);
    for (auto& z : x)
        z /= nv;
    return true;
}

// ---- Givens rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0] ----

struct Givens {
    double c = 1.0;
    cplx s = 0.0;
};

Givens make_givens(cplx a, cplx b, cplx* r = nullptr)
{
    Givens g;
    const double na = std::abs(a);
    const double nb = std::abs(b);
    if (nb == 0.0) {
        if (r)
            *r = a;
        return g;
    }
    const double n = std::hypot(na, nb);
    if (na == 0.0) {
        g.c = 0.0;
        g.s = std::conj(b) / nb;
        if (r)
            *r = nb;
        return g;
    }
    const cplx pa = a / na;
    g.c = na / n;
    g.s = pa * std::conj(b) / n;
    if (r)
        *r = pa * n;
    return g;
}

// rows i, j of t over columns [c0, c1): t <- G t
void rotate_rows(CMatrix& t, std::size_t i, std::size_t j, std::size_t c0, std::size_t c1, const Givens& g)
{
    for (std::size_t k = c0; k < c1; ++k) {
        const cplx x = t(i, k);
        const cplx y = t(j, k);
        t(i, k) = g.c * x + g.s * y;
        t(j, k) = -std::conj(g.s) * x + g.c * y;
    }
}

// columns i, j of t over rows [r0, r1): t <- t G†
void rotate_cols(CMatrix& t, std::size_t i, std::size_t j, std::size_t r0, std::size_t r1, const Givens& g)
{
    for (std::size_t k = r0; k < r1; ++k) {
        const cplx x = t(k, i);
        const cplx y = t(k, j);
        t(k, i) = g.c * x + std::conj(g.s) * y;
        t(k, j) = -g.s * x + g.c * y;
    }
}

// Householder reduction to upper Hessenberg form, a = z h z†.
void hessenberg_reduce(CMatrix& h, CMatrix& z)
{
    const std::size_t n = h.rows();
    std::vector<cplx> v;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        bool reduced = true;
        for (std::size_t i = k + 2; i < n; ++i)
            if (h(i, k) != cplx{}) {
                reduced = false;
                break;
            }
        if (reduced)
            continue;

        v.assign(n - k - 1, cplx{});
        for (std::size_t i = k + 1; i < n; ++i)
            v[i - k - 1] = h(i, k);
        cplx alpha;
        if (!householder(v, alpha))
            continue;

        // left: rows k+1.., all columns from k
        for (std::size_t j = k; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i)
                s += std::conj(v[i - k - 1]) * h(i, j);
            s *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i)
                h(i, j) -= v[i - k - 1] * s;
        }
        // right: columns k+1.., all rows
        auto apply_right = [&](CMatrix& m) {
            for (std::size_t i = 0; i < n; ++i) {
                cplx s = 0.0;
                for (std::size_t j = k + 1; j < n; ++j)
                    s += m(i, j) * v[j - k - 1];
                s *= 2.0;
                for (std::size_t j = k + 1; j < n; ++j)
                    m(i, j) -= s * std::conj(v[j - k - 1]);
            }
        };
        apply_right(h);
        apply_right(z);

        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i)
            h(i, k) = 0.0;
    }
}

// Wilkinson-type shift from the trailing 2x2 block of the active window.
cplx qr_shift(const CMatrix& t, std::size_t iu, std::size_t iter)
{
    if (iter == 10 || iter == 30) {
        // exceptional shift
        double s = std::abs(t(iu, iu - 1).real());
        if (iu >= 2)
            s += std::abs(t(iu - 1, iu - 2).real());
        return s;
    }
    cplx a = t(iu - 1, iu - 1), b = t(iu - 1, iu), c = t(iu, iu - 1), d = t(iu, iu);
    const double normt = std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
    if (normt == 0.0)
        return 0.0;
    a /= normt;
    b /= normt;
    c /= normt;
    d /= normt;
    const cplx bc = b * c;
    const cplx diff = a - d;
    const cplx disc = std::sqrt(diff * diff + 4.0 * bc);
    const cplx det = a * d - bc;
    const cplx tr = a + d;
    cplx e1 = (tr + disc) / 2.0;
    cplx e2 = (tr - disc) / 2.0;
    const double n1 = std::abs(e1), n2 = std::abs(e2);
    if (n1 > n2)
        e2 = det / e1;
    else if (n2 > 0.0)
        e1 = det / e2;
    return normt * (std::abs(e1 - d) < std::abs(e2 - d) ? e1 : e2);
}

bool subdiag_negligible(const CMatrix& t, std::size_t i, double anorm)
{
    const double sd = std::abs(t(i, i - 1));
    if (sd == 0.0)
        return true;
    double tst = std::abs(t(i - 1, i - 1)) + std::abs(t(i, i));
    if (tst == 0.0) {
        if (i >= 2)
            tst += std::abs(t(i - 1, i - 2));
        if (i + 1 < t.rows())
            tst += std::abs(t(i + 1, i));
    }
    if (tst == 0.0)
        tst = anorm;
    return sd <= kEps * tst || sd <= std::numeric_limits<double>::min();
}

// Complex Schur form of an upper Hessenberg matrix: t <- Q† t Q, z <- z Q.
void schur_reduce(CMatrix& t, CMatrix& z)
{
    const std::size_t n = t.rows();
    if (n <= 1)
        return;
    const double anorm = frobenius_norm(t);
    const std::size_t max_iter = 30 * n;
    std::size_t iu = n - 1;
    std::size_t iter = 0;
    std::size_t total_iter = 0;

    while (true) {
        while (iu > 0) {
            if (subdiag_negligible(t, iu, anorm)) {
                t(iu, iu - 1) = 0.0;
                --iu;
                iter = 0;
            } else {
                break;
            }
        }
        if (iu == 0)
            break;
        ++iter;
        ++total_iter;
        if (total_iter > max_iter)
            throw NumericalFailure("eig_dense: QR iteration did not converge");

        std::size_t il = iu - 1;
        while (il > 0 && !subdiag_negligible(t, il, anorm))
            --il;
        if (il > 0)
            t(il, il - 1) = 0.0;

        const cplx shift = qr_shift(t, iu, iter);
        Givens g = make_givens(t(il, il) - shift, t(il + 1, il));
        rotate_rows(t, il, il + 1, il, n, g);
        rotate_cols(t, il, il + 1, 0, std::min(il + 2, iu) + 1, g);
        rotate_cols(z, il, il + 1, 0, n, g);

        for (std::size_t i = il + 1; i < iu; ++i) {
            cplx r;
            g = make_givens(t(i, i - 1), t(i + 1, i - 1), &r);
            t(i, i - 1) = r;
            t(i + 1, i - 1) = 0.0;
            rotate_rows(t, i, i + 1, i, n, g);
            rotate_cols(t, i, i + 1, 0, std::min(i + 2, iu) + 1, g);
            rotate_cols(z, i, i + 1, 0, n, g);
        }
    }
}

bool eig_order(const cplx& a, const cplx& b)
{
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb)
        return ma > mb;
    if (a.real() != b.real())
        return a.real() > b.real();
    return a.imag() > b.imag();
}

} // namespace

// ---- QR ----------------------------------------------------------------

QrResult qr_thin(const CMatrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n)
        throw DimensionError("qr_thin: need rows >= cols, got " + std::to_string(m) + "x" + std::to_string(n));

    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        scale = std::max(scale, a.col(j).norm());

    CMatrix w = a;
    std::vector<std::vector<cplx>> reflectors(n);
    std::vector<cplx> diag(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<cplx> v(m - k);
        for (std::size_t i = k; i < m; ++i)
            v[i - k] = w(i, k);
        cplx alpha;
        const bool nonzero = householder(v, alpha);
        if (!nonzero || std::abs(alpha) < 1e-12 * scale)
            throw RankDeficientError("qr_thin: column " + std::to_string(k) + " is numerically dependent");
        for (std::size_t j = k; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = k; i < m; ++i)
                s += std::conj(v[i - k]) * w(i, j);
            s *= 2.0;
            for (std::size_t i = k; i < m; ++i)
                w(i, j) -= v[i - k] * s;
        }
        diag[k] = alpha;
        reflectors[k] = std::move(v);
    }

    QrResult out{CMatrix(m, n), CMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            out.r(i, j) = w(i, j);
    for (std::size_t i = 0; i < n; ++i)
        out.r(i, i) = diag[i];

    // q = H_0 ... H_{n-1} [I; 0]
    for (std::size_t j = 0; j < n; ++j)
        out.q(j, j) = 1.0;
    for (std::size_t kk = n; kk-- > 0;) {
        const auto& v = reflectors[kk];
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = kk; i < m; ++i)
                s += std::conj(v[i - kk]) * out.q(i, j);
            s *= 2.0;
            for (std::size_t i = kk; i < m; ++i)
                out.q(i, j) -= v[i - kk] * s;
        }
    }

    // positive real diagonal
    for (std::size_t k = 0; k < n; ++k) {
        const cplx ph = unit_phase(out.r(k, k));
        for (std::size_t j = k; j < n; ++j)
            out.r(k, j) *= std::conj(ph);
        out.r(k, k) = std::abs(diag[k]);
        for (std::size_t i = 0; i < m; ++i)
            out.q(i, k) *= ph;
    }
    return out;
}

// ---- SVD ---------------------------------------------------------------

CMatrix SvdResult::reconstruct() const
{
    CMatrix us = left;
    for (std::size_t i = 0; i < us.rows(); ++i)
        for (std::size_t j = 0; j < us.cols(); ++j)
            us(i, j) *= singular_values[j];
    return matmul(us, hermitian(right));
}

std::size_t SvdResult::numerical_rank(double rel_tol) const
{
    if (singular_values.empty() || singular_values.front() == 0.0)
        return 0;
    const double cut = rel_tol * singular_values.front();
    return static_cast<std::size_t>(std::count_if(singular_values.begin(), singular_values.end(),
                                                  [cut](double s) { return s > cut; }));
}

namespace {

// Overwrites columns k.. of q with an orthonormal complement of its first k
// (orthonormal) columns: trailing columns of the Householder Q of q[:, :k].
void complete_orthonormal(CMatrix& q, std::size_t k)
{
    const std::size_t m = q.rows(), n = q.cols();
    if (k >= n)
        return;
    std::vector<std::vector<cplx>> w(k, std::vector<cplx>(m));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m; ++i)
            w[j][i] = q(i, j);
    std::vector<std::vector<cplx>> vs(k);
    auto reflect = [](const std::vector<cplx>& v, std::size_t off, std::vector<cplx>& x) {
        cplx dotv = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            dotv += std::conj(v[i]) * x[off + i];
        for (std::size_t i = 0; i < v.size(); ++i)
            x[off + i] -= 2.0 * dotv * v[i];
    };
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t p = 0; p < j; ++p)
            reflect(vs[p], p, w[j]);
        std::vector<cplx> v(w[j].begin() + static_cast<std::ptrdiff_t>(j), w[j].end());
        double xn = 0.0;
        for (const auto& z : v)
            xn += std::norm(z);
        xn = std::sqrt(xn);
        const cplx phase = v[0] == cplx{} ? cplx{1.0} : v[0] / std::abs(v[0]);
        v[0] += phase * xn;
        double vn = 0.0;
        for (const auto& z : v)
            vn += std::norm(z);
        vn = std::sqrt(vn);
        for (auto& z : v)
            z /= vn;
        vs[j] = std::move(v);
    }
    for (std::size_t c = k; c < n; ++c) {
        std::vector<cplx> x(m, cplx{});
        x[c] = 1.0;
        for (std::size_t p = k; p-- > 0;)
            reflect(vs[p], p, x);
        for (std::size_t i = 0; i < m; ++i)
            q(i, c) = x[i];
    }
}

SvdResult jacobi_svd_tall(const CMatrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    // column-major working copies: u[j] is column j
    std::vector<std::vector<cplx>> u(n, std::vector<cplx>(m));
    std::vector<std::vector<cplx>> v(n, std::vector<cplx>(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i)
            u[j][i] = a(i, j);
        v[j][j] = 1.0;
    }

    double fro_sq = 0.0;
    for (const auto& col : u)
        for (const auto& z : col)
            fro_sq += std::norm(z);
    // columns below eps * ‖a‖_F are numerically zero and are not rotated
    const double negligible = kEps * kEps * fro_sq;
    // a pair counts as orthogonal at the rounding floor of its inner product
    const double rot_tol = kEps * static_cast<double>(std::max<std::size_t>(m, 1));

    constexpr std::size_t kMaxSweeps = 80;
    bool converged = n <= 1;
    for (std::size_t sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0;
                cplx gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += std::norm(u[p][i]);
                    beta += std::norm(u[q][i]);
                    gamma += std::conj(u[p][i]) * u[q][i];
                }
                const double ag = std::abs(gamma);
                if (ag == 0.0 || ag <= rot_tol * std::sqrt(alpha * beta) || std::min(alpha, beta) <= negligible)
                    continue;
                rotated = true;
                const cplx ph = std::conj(gamma / ag); // e^{-i arg gamma}
                const double zeta = (beta - alpha) / (2.0 * ag);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                auto rot = [&](std::vector<cplx>& xp, std::vector<cplx>& xq) {
                    for (std::size_t i = 0; i < xp.size(); ++i) {
                        const cplx x = xp[i];
                        const cplx y = ph * xq[i];
                        xp[i] = c * x - s * y;
                        xq[i] = s * x + c * y;
                    }
                };
                rot(u[p], u[q]);
                rot(v[p], v[q]);
            }
        }
        converged = !rotated;
    }
    if (!converged)
        throw NumericalFailure("svd: Jacobi sweeps did not converge");

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (const auto& z : u[j])
            s += std::norm(z);
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult out{CMatrix(m, n), std::vector<double>(n), CMatrix(n, n)};
    const double smax = n ? sigma[order[0]] : 0.0;
    std::vector<bool> null_col(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.singular_values[k] = sigma[j];
        for (std::size_t i = 0; i < n; ++i)
            out.right(i, k) = v[j][i];
        if (sigma[j] > 1e-13 * smax && sigma[j] > 0.0) {
            for (std::size_t i = 0; i < m; ++i)
                out.left(i, k) = u[j][i] / sigma[j];
        } else {
            null_col[k] = true;
        }
    }

    // Left vectors of (numerically) zero singular values: orthonormal completion.
    std::size_t filled = 0;
    while (filled < n && !null_col[filled])
        ++filled;
    complete_orthonormal(out.left, filled);
    return out;
}

struct PivotedQr {
    CMatrix q;                     ///< m x n, orthonormal columns
    CMatrix r;                     ///< n x n, upper triangular
    std::vector<std::size_t> perm; ///< column k of q r is column perm[k] of a
};

// Householder QR with greedy column pivoting; never fails on rank deficiency.
PivotedQr pivoted_qr(const CMatrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<std::vector<cplx>> w(n, std::vector<cplx>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            w[j][i] = a(i, j);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::vector<cplx>> vs(n);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = k;
        double best_norm = -1.0;
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i)
                s += std::norm(w[j][i]);
            if (s > best_norm) {
                best_norm = s;
                best = j;
            }
        }
        std::swap(w[k], w[best]);
        std::swap(perm[k], perm[best]);

        std::vector<cplx> v(w[k].begin() + static_cast<std::ptrdiff_t>(k), w[k].end());
        const double xn = std::sqrt(best_norm);
        if (xn == 0.0)
            continue;
        const cplx phase = v[0] == cplx{} ? cplx{1.0} : v[0] / std::abs(v[0]);
        v[0] += phase * xn;
        double vn = 0.0;
        for (const auto& z : v)
            vn += std::norm(z);
        vn = std::sqrt(vn);
        for (auto& z : v)
            z /= vn;
        for (std::size_t j = k; j < n; ++j) {
            cplx dotv = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i)
                dotv += std::conj(v[i]) * w[j][k + i];
            for (std::size_t i = 0; i < v.size(); ++i)
                w[j][k + i] -= 2.0 * dotv * v[i];
        }
        vs[k] = std::move(v);
    }

    PivotedQr out{CMatrix(m, n), CMatrix(n, n), std::move(perm)};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i)
            out.r(i, j) = w[j][i];
    // q = H_0 ... H_{n-1} applied to the first n unit vectors
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> x(m, cplx{});
        x[j] = 1.0;
        for (std::size_t k = std::min(j + 1, n); k-- > 0;) {
            const auto& v = vs[k];
            if (v.empty())
                continue;
            cplx dotv = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i)
                dotv += std::conj(v[i]) * x[k + i];
            for (std::size_t i = 0; i < v.size(); ++i)
                x[k + i] -= 2.0 * dotv * v[i];
        }
        for (std::size_t i = 0; i < m; ++i)
            out.q(i, j) = x[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx d = out.r(k, k);
        if (d == cplx{})
            continue;
        const cplx u = d / std::abs(d);
        for (std::size_t j = k; j < n; ++j)
            out.r(k, j) *= std::conj(u);
        out.r(k, k) = std::abs(d);
        for (std::size_t i = 0; i < m; ++i)
            out.q(i, k) *= u;
    }
    return out;
}

// a P = Q R and R† = U Σ V†  give  a = (Q V) Σ (P U)†; pivoting pushes the
// numerically null part of R into trailing rows that Jacobi never rotates.
SvdResult preconditioned_svd_tall(const CMatrix& a)
{
    const PivotedQr f = pivoted_qr(a);
    const SvdResult x = jacobi_svd_tall(hermitian(f.r));
    const std::size_t n = a.cols();
    SvdResult out{matmul(f.q, x.right), x.singular_values, CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            out.right(f.perm[k], j) = x.left(k, j);
    return out;
}

} // namespace

SvdResult svd(const CMatrix& a)
{
    if (a.rows() >= a.cols())
        return preconditioned_svd_tall(a);
    SvdResult t = preconditioned_svd_tall(hermitian(a));
    return SvdResult{std::move(t.right), std::move(t.singular_values), std::move(t.left)};
}

// ---- eigen-decomposition -------------------------------------------------

EigResult eig_dense(const CMatrix& a)
{
    const std::size_t n = a.rows();
    if (a.cols() != n)
        throw DimensionError("eig_dense: matrix must be square");
    if (n == 0)
        return {};

    CMatrix t = a;
    CMatrix z = CMatrix::identity(n);
    hessenberg_reduce(t, z);
    schur_reduce(t, z);

    const double tnorm = std::max(frobenius_norm(t), std::numeric_limits<double>::min());
    const double small = kEps * tnorm;

    std::vector<cplx> values(n);
    CMatrix vecs(n, n);
    std::vector<cplx> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx lambda = t(k, k);
        values[k] = lambda;
        std::fill(y.begin(), y.end(), cplx{});
        y[k] = 1.0;
        for (std::size_t i = k; i-- > 0;) {
            cplx s = 0.0;
            for (std::size_t j = i + 1; j <= k; ++j)
                s += t(i, j) * y[j];
            cplx denom = t(i, i) - lambda;
            if (std::abs(denom) < small)
                denom = small;
            y[i] = -s / denom;
        }
        // x = z y
        CVector x(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j <= k; ++j)
                s += z(i, j) * y[j];
            x[i] = s;
        }
        const double nx = x.norm();
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(x[i]) > std::abs(x[imax]))
                imax = i;
        x *= std::conj(unit_phase(x[imax])) / nx;
        vecs.set_col(k, x);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t w) { return eig_order(values[x], values[w]); });

    EigResult out{std::vector<cplx>(n), CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = values[order[k]];
        out.vectors.set_col(k, vecs.col(order[k]));
    }
    return out;
}

// ---- DFT -----------------------------------------------------------------

CMatrix dft_matrix(std::size_t n)
{
    if (n == 0)
        throw DimensionError("dft_matrix: n must be positive");
    CMatrix d(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            const std::size_t kl = (k * l) % n; // exact phase index
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(kl) / static_cast<double>(n);
            d(k, l) = cplx{scale * std::cos(ang), scale * std::sin(ang)};
        }
    return d;
}

// ---- Hermitian positive definite helpers ---------------------------------

CMatrix cholesky(const CMatrix& a)
{
    const std::size_t n = a.rows();
    if (a.cols() != n)
        throw DimensionError("cholesky: matrix must be square");
    CMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k)
            d -= std::norm(l(j, k));
        if (!(d > 0.0) || !std::isfinite(d))
            throw NumericalFailure("cholesky: matrix is not positive definite");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return l;
}

CMatrix solve_hpd(const CMatrix& a, const CMatrix& b)
{
    if (b.rows() != a.rows())
        throw DimensionError("solve_hpd: right-hand side has wrong row count");
    const CMatrix l = cholesky(a);
    const std::size_t n = a.rows();
    CMatrix x = b;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) { // l y = b
            cplx s = x(i, c);
            for (std::size_t k = 0; k < i; ++k)
                s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t i = n; i-- > 0;) { // l† x = y
            cplx s = x(i, c);
            for (std::size_t k = i + 1; k < n; ++k)
                s -= std::conj(l(k, i)) * x(k, c);
            x(i, c) = s / l(i, i);
        }
    }
    return x;
}

double log_det_hpd(const CMatrix& a)
{
    const CMatrix l = cholesky(a);
    double s = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i)
        s += std::log(l(i, i).real());
    return 2.0 * s;
}

double condition_number(const CMatrix& a)
{
    const SvdResult s = svd(a);
    if (s.singular_values.empty())
        return 1.0;
    const double lo = s.singular_values.back();
    if (lo == 0.0)
        return std::numeric_limits<double>::infinity();
    return s.singular_values.front() / lo;
}

} // namespace hsed
