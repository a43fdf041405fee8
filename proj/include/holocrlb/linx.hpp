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

#ifndef HOLOCRLB_LINX_HPP
#define HOLOCRLB_LINX_HPP

#include <Eigen/Dense>
#include <complex>

namespace holocrlb {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using cplx = std::complex<double>;

/// Kronecker product, [out]_{(i*p+s),(j*q+t)} = A(i,j)*B(s,t).
CMat kron(const CMat& a, const CMat& b);
RMat kron(const RMat& a, const RMat& b);

/// Elementwise product; throws std::invalid_argument on shape mismatch.
CMat hadamard(const CMat& a, const CMat& b);

/// Penetrating face product: the small matrix `a` (p x n) elementwise
/// multiplies each p x n row-block of `b` (k*p x n).
/// [out]_{b*p+t, c} = a(t,c) * b_(b*p+t, c).
CMat pface(const CMat& a, const CMat& b);

/// Unstacks a length p*k vector column-major into a p x k matrix:
/// element b*p+t lands at (row t, col b).
CMat reshape_block(const CVec& v, Eigen::Index p, Eigen::Index k);

/// Zeroth-order Bessel function of the first kind. Power series below
/// |x| = 15, Hankel asymptotic expansion above; abs error <= 1e-10 for
/// |x| <= 100.
double bessel_j0(double x);

/// Solves H * X = B for Hermitian positive-definite H via Cholesky with
/// one step of iterative refinement. Throws on non-Hermitian or
/// non-positive-definite input.
CMat herm_solve(const CMat& h, const CMat& b);

/// Factor L with L*L^H = H for Hermitian PSD H; eigenvalues in
/// [-1e-10*||H||, 0) are clipped to zero, anything more negative throws.
CMat psd_sqrt_factor(const CMat& h);

} // namespace holocrlb

#endif
