// SPDX-License-Identifier: Apache-2.0
//
// holo-crlb: multi-band holographic-surface positioning simulator and
// beamforming optimizer
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

#include "holocrlb/linx.hpp"

#include <cmath>
#include <stdexcept>

namespace holocrlb {

namespace {

template <typename Mat>
Mat kron_impl(const Mat& a, const Mat& b)
{
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

CMat kron(const CMat& a, const CMat& b) { return kron_impl(a, b); }
RMat kron(const RMat& a, const RMat& b) { return kron_impl(a, b); }

CMat hadamard(const CMat& a, const CMat& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("hadamard: shape mismatch");
    return a.cwiseProduct(b);
}

CMat pface(const CMat& a, const CMat& b)
{
    const Eigen::Index p = a.rows(), n = a.cols();
    if (b.cols() != n)
        throw std::invalid_argument("pface: column count mismatch");
    if (p == 0 || b.rows() % p != 0)
        throw std::invalid_argument("pface: row count of second operand not a multiple of first");
    const Eigen::Index k = b.rows() / p;
    CMat out(b.rows(), n);
    for (Eigen::Index blk = 0; blk < k; ++blk)
        out.middleRows(blk * p, p) = a.cwiseProduct(b.middleRows(blk * p, p));
    return out;
}

CMat reshape_block(const CVec& v, Eigen::Index p, Eigen::Index k)
{
    if (v.size() != p * k)
        throw std::invalid_argument("reshape_block: length mismatch");
    CMat out(p, k);
    for (Eigen::Index b = 0; b < k; ++b)
        out.col(b) = v.segment(b * p, p);
    return out;
}

namespace {

// Alternating series sum_m (-x^2/4)^m / (m!)^2, accumulated in extended
// precision; near the branch point x ~ 15 the largest term is ~1e5, so
// long double keeps the cancellation error a few orders below 1e-10.
double j0_series(double x)
{
    const long double q = (long double)(x) * (long double)(x) / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int m = 1; m < 200; ++m) {
        term *= -q / ((long double)m * (long double)m);
        sum += term;
        if (std::abs((double)term) < 1e-20 && m > x / 2.0) break;
    }
    return (double)sum;
}

// Hankel asymptotic expansion, valid for x >= 15:
//   J0(x) = sqrt(2/(pi x)) * (P(x) cos(x - pi/4) - Q(x) sin(x - pi/4))
// with P, Q summed until the terms drop below 1e-18 (they are still
// decreasing at that point for every x >= 15).
double j0_asymptotic(double x)
{
    const double inv8x = 1.0 / (8.0 * x);
    double p = 1.0, q = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd * inv8x / (double)k;
        double contrib = term;
        switch (k % 4) {
            case 1: q -= contrib; break;
            case 2: p -= contrib; break;
            case 3: q += contrib; break;
            case 0: p += contrib; break;
        }
        if (std::abs(term) < 1e-18) break;
    }
    const double chi = x - 0.25 * M_PI;
    return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

} // namespace

double bessel_j0(double x)
{
    x = std::abs(x);
    return x < 15.0 ? j0_series(x) : j0_asymptotic(x);
}

namespace {

void require_hermitian(const CMat& h, const char* who)
{
    if (h.rows() != h.cols())
        throw std::invalid_argument(std::string(who) + ": matrix not square");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-12 * scale)
        throw std::invalid_argument(std::string(who) + ": matrix not Hermitian");
}

} // namespace

CMat herm_solve(const CMat& h, const CMat& b)
{
    require_hermitian(h, "herm_solve");
    if (b.rows() != h.rows())
        throw std::invalid_argument("herm_solve: rhs row count mismatch");
    Eigen::LLT<CMat> llt(h);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("herm_solve: factorization failed (matrix not positive-definite)");
    CMat x = llt.solve(b);
    x += llt.solve(b - h * x); // one refinement step keeps the residual near eps
    return x;
}

CMat psd_sqrt_factor(const CMat& h)
{
    require_hermitian(h, "psd_sqrt_factor");
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("psd_sqrt_factor: eigendecomposition failed");
    const RVec evals = es.eigenvalues();
    const double norm = std::max(evals.cwiseAbs().maxCoeff(), 0.0);
    RVec clipped = evals;
    for (Eigen::Index i = 0; i < clipped.size(); ++i) {
        if (clipped(i) < -1e-10 * norm)
            throw std::runtime_error("psd_sqrt_factor: matrix substantially indefinite");
        clipped(i) = std::max(clipped(i), 0.0);
    }
    return es.eigenvectors() * clipped.cwiseSqrt().asDiagonal();
}

} // namespace holocrlb
