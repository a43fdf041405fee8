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

#ifndef HOLOCRLB_FISHER_HPP
#define HOLOCRLB_FISHER_HPP

#include <array>
#include <vector>

#include <Eigen/Cholesky>

#include "holocrlb/channel.hpp"

namespace holocrlb {

/// Position-independent by-products of one beamforming choice: effective
/// matrices, received-signal covariances and their factorizations. Built
/// once and shared across every evaluated user position.
struct FisherWorkspace {
    Beamforming bf;
    std::vector<CMat> t_mat;                  // T_i
    std::vector<std::vector<CMat>> sub_rows;  // combiners[i][j] * onboard[i][j], per band/sub-band
    std::vector<CMat> cov;                    // received-signal covariance per band
    std::vector<Eigen::LLT<CMat>> cov_llt;
    std::vector<CMat> v_th;                   // angular_cov * T_i^H
};

/// Throws std::runtime_error when a covariance fails to factorize.
FisherWorkspace fisher_workspace(const ChannelTables& t, const Beamforming& bf);

/// Covariance of the received vector of one band:
/// kernel_ft .* (T V T^H) + noise_var * I. Hermitian positive-definite.
CMat signal_covariance(const ChannelTables& t, int band, const Beamforming& bf);

/// Derivative of the noise-free received vector w.r.t. user coordinate
/// `axis`; length n_subbands * n_frames.
CVec mean_signal_grad(const ChannelTables& t, int band, int axis, const Beamforming& bf,
                      const Vec3& p_user);

/// Fisher information of one user position plus cached solver by-products
/// reused by the gradient formulas.
struct FimEval {
    Vec3 position;
    Eigen::Matrix3d fim;       // symmetric PSD
    Eigen::Matrix3d fim_inv;
    Eigen::Matrix3d fim_inv2;  // fim^{-2}
    double crlb = 0.0;         // trace(fim^{-1}), m^2
    std::vector<std::array<CVec, 3>> mean_grad;  // per band, per axis
    std::vector<std::array<CVec, 3>> cov_igrad;  // cov^{-1} * mean_grad
};

/// Throws std::runtime_error("... position unidentifiable ...") when the
/// FIM condition number exceeds 1e12.
FimEval eval_fim(const ChannelTables& t, const FisherWorkspace& ws, const Vec3& p_user);
FimEval eval_fim(const ChannelTables& t, const Beamforming& bf, const Vec3& p_user);

/// Mean CRLB over the sample positions; any singular sample aborts with
/// the offending position in the message.
double avg_crlb(const ChannelTables& t, const FisherWorkspace& ws, const std::vector<Vec3>& samples);
double avg_crlb(const ChannelTables& t, const Beamforming& bf, const std::vector<Vec3>& samples);

} // namespace holocrlb

#endif
