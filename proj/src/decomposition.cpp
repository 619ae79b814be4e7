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

#include "hsed/decomposition.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hsed/errors.hpp"
#include "hsed/linalg.hpp"
#include "hsed/random.hpp"

namespace hsed {

UnitModulusMatrix::UnitModulusMatrix(std::size_t rows, std::size_t cols, std::vector<double> phases)
    : rows_(rows), cols_(cols), phases_(std::move(phases))
{
    if (phases_.size() != rows_ * cols_)
        throw DimensionError("UnitModulusMatrix: phase count does not match shape");
}

CMatrix UnitModulusMatrix::matrix() const
{
    CMatrix m(rows_, cols_);
    const double mod = 1.0 / std::sqrt(static_cast<double>(rows_));
    for (std::size_t i = 0; i < phases_.size(); ++i)
        m.entries()[i] = std::polar(mod, phases_[i]);
    return m;
}

CVector UnitModulusMatrix::column(std::size_t j) const
{
    CVector v(rows_);
    const double mod = 1.0 / std::sqrt(static_cast<double>(rows_));
    for (std::size_t i = 0; i < rows_; ++i)
        v[i] = std::polar(mod, phase(i, j));
    return v;
}

UnitModulusMatrix project_unit_modulus(const CMatrix& a)
{
    std::vector<double> ph(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const cplx z = a.entries()[i];
        ph[i] = z == cplx{} ? 0.0 : std::arg(z);
    }
    return UnitModulusMatrix(a.rows(), a.cols(), std::move(ph));
}

namespace {

constexpr double kMaxCondition = 1e12;

// Solves a x = b for Hermitian PSD a, adding a ridge of 1e-10·tr(a) when a is
// (nearly) singular.
CMatrix guarded_solve(const CMatrix& a, const CMatrix& b, bool& regularized)
{
    if (condition_number(a) <= kMaxCondition) {
        try {
            return solve_hpd(a, b);
        } catch (const NumericalFailure&) {
        }
    }
    regularized = true;
    double ridge = 1e-10 * trace(a).real();
    if (!(ridge > 0.0))
        ridge = 1e-10;
    CMatrix reg = a;
    for (std::size_t i = 0; i < reg.rows(); ++i)
        reg(i, i) += ridge;
    return solve_hpd(reg, b);
}

double residual_sq(const CMatrix& target, const CMatrix& f, const CMatrix& g)
{
    return frobenius_norm_sq(target - matmul(f, g));
}

} // namespace

DecompositionResult bcd_sd(const CMatrix& target, const BcdOptions& options)
{
    const std::size_t d = target.cols();
    if (d == 0 || target.rows() < d)
        throw DimensionError("bcd_sd: target must be M x d with 1 <= d <= M");
    if (orthonormality_defect(target) > 1e-6)
        throw DimensionError("bcd_sd: target columns must be orthonormal");

    DecompositionResult best;
    best.objective = std::numeric_limits<double>::infinity();
    bool regularized = false;
    const CMatrix th = hermitian(target);

    auto g_step = [&](const CMatrix& f) {
        const CMatrix fh = hermitian(f);
        CMatrix g = guarded_solve(matmul(fh, f), matmul(fh, target), regularized);
        if (options.on_g_update)
            options.on_g_update(target, f, g);
        return g;
    };

    CMatrix f_mat, g;
    UnitModulusMatrix f_um;
    if (options.warm_start) {
        f_um = project_unit_modulus(target);
        f_mat = options.project ? f_um.matrix() : target;
        g = g_step(f_mat);
    } else {
        SeededRng rng(options.seed);
        g = complex_gaussian(rng, d, d, 1.0);
    }

    DecompositionResult out;
    double prev = std::numeric_limits<double>::quiet_NaN();
    std::size_t k = 0;
    for (; k < options.max_iters; ++k) {
        // F-step: X (G G†) = T G†  <=>  (G G†) X† = G T†
        const CMatrix gh = hermitian(g);
        const CMatrix xh = guarded_solve(matmul(g, gh), matmul(g, th), regularized);
        const CMatrix x = hermitian(xh);
        if (options.project) {
            f_um = project_unit_modulus(x);
            f_mat = f_um.matrix();
        } else {
            f_mat = x;
        }
        g = g_step(f_mat);

        const double h0 = residual_sq(target, f_mat, g);
        out.objective_trace.push_back(h0);
        if (h0 < best.objective) {
            best.objective = h0;
            if (options.project)
                best.analog = f_um;
            best.digital = g;
        }
        if (h0 <= 1e-28 * d) {
            out.converged = true;
            ++k;
            break;
        }
        if (!std::isnan(prev) && std::abs(prev - h0) < options.tol * prev) {
            out.converged = true;
            ++k;
            break;
        }
        prev = h0;
    }

    out.analog = std::move(best.analog);
    out.digital = std::move(best.digital);
    out.objective = best.objective;
    out.iterations = k;
    out.regularized = regularized;
    return out;
}

BeamformResult beamform_decompose(const CVector& gamma)
{
    const std::size_t m = gamma.dim();
    if (m == 0)
        throw DimensionError("beamform_decompose: empty vector");
    const double l1 = gamma.norm1();
    if (l1 == 0.0)
        throw DimensionError("beamform_decompose: zero vector has no decomposition");

    BeamformResult out;
    CMatrix col(m, 1);
    for (std::size_t i = 0; i < m; ++i)
        col(i, 0) = gamma[i];
    out.f = project_unit_modulus(col);
    out.g = l1 / std::sqrt(static_cast<double>(m));
    out.error = gamma - out.f.column(0) * cplx{out.g};
    return out;
}

DecompositionResult omp_decompose(const CMatrix& target, const CMatrix& dictionary, std::size_t r)
{
    const std::size_t m = target.rows(), d = target.cols(), k = dictionary.cols();
    if (dictionary.rows() != m)
        throw DimensionError("omp_decompose: dictionary row count differs from target");
    if (!(r >= d && r <= k))
        throw DimensionError("omp_decompose: need d <= r <= K, got r = " + std::to_string(r));
    const double mod = 1.0 / std::sqrt(static_cast<double>(m));
    for (const auto& z : dictionary.entries())
        if (std::abs(std::abs(z) - mod) > 1e-9)
            throw DimensionError("omp_decompose: dictionary entries must have modulus 1/sqrt(M)");

    const CMatrix dh = hermitian(dictionary);
    DecompositionResult out;
    std::vector<bool> used(k, false);
    CMatrix residual = target;
    CMatrix selected;
    bool regularized = false;

    for (std::size_t step = 0; step < r; ++step) {
        const CMatrix corr = matmul(dh, residual); // K x d
        std::size_t pick = k;
        double best = -1.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (used[c])
                continue;
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                s += std::norm(corr(c, j));
            if (s > best) {
                best = s;
                pick = c;
            }
        }
        used[pick] = true;
        out.atoms.push_back(pick);

        selected = CMatrix(m, out.atoms.size());
        for (std::size_t j = 0; j < out.atoms.size(); ++j)
            selected.set_col(j, dictionary.col(out.atoms[j]));
        const CMatrix sh = hermitian(selected);
        out.digital = guarded_solve(matmul(sh, selected), matmul(sh, target), regularized);
        residual = target - matmul(selected, out.digital);
        out.objective_trace.push_back(frobenius_norm_sq(residual));
    }

    out.analog = project_unit_modulus(selected);
    out.objective = out.objective_trace.back();
    out.iterations = r;
    out.converged = true;
    out.regularized = regularized;
    return out;
}

} // namespace hsed
