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

#ifndef HOLOCRLB_CHANNEL_HPP
#define HOLOCRLB_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "holocrlb/linx.hpp"
#include "holocrlb/rng.hpp"
#include "holocrlb/scene.hpp"

namespace holocrlb {

/// The decision variables: per-band element amplitude matrices (entries
/// in [0,1]) and per-(band, sub-band) complex feed combiners. The power
/// budget binds per (band, frame): sum_j ||combiners[i][j].row(q)||^2
/// equals max_power.
struct Beamforming {
    std::vector<RMat> configs;                 // n_bands of (n_frames x n_elements)
    std::vector<std::vector<CMat>> combiners;  // [band][subband], n_frames x n_feeds
};

/// Sum_j ||combiners[band][j].row(frame)||^2.
double combine_power(const Beamforming& bf, int band, int frame);

/// Box constraint on configs and the power equality within `tol` relative.
bool beamforming_feasible(const Beamforming& bf, const SystemConfig& cfg, double tol = 1e-9);

/// All position-independent model matrices, built once per config.
struct ChannelTables {
    SystemConfig cfg;
    BandPlan plan;
    RhsGeometry geom;

    std::vector<std::vector<CMat>> onboard;  // [band][subband] n_feeds x n_elements, unit modulus
    std::vector<CMat> angular_cov;           // [band] n_elements^2 Hermitian PSD
    std::vector<CMat> kernel_f;              // [band] n_subbands^2, Hermitian, unit diagonal
    std::vector<RMat> kernel_t;              // [band] n_frames^2, symmetric, unit diagonal
    std::vector<CMat> kernel_ft;             // [band] (n_subbands*n_frames)^2, row index j*Q+q

    // square-root factors for multipath synthesis
    std::vector<CMat> mp_row_factor;  // kron(L_f, L_t) with L L^H = kernel
    std::vector<CMat> mp_col_factor;  // L_V with L L^H = angular_cov

    double noise_var = 0.0;  // noise_psd * subband_width
};

ChannelTables build_tables(const SystemConfig& cfg);

/// Onboard propagation gain exp(-i 2 pi n_r f / c * ||p_dst - p_src||).
cplx onboard_gain(double f_hz, const Vec3& p_src, const Vec3& p_dst, double n_r);

/// Free-space line-of-sight gain
/// c g_e g_u exp(-i 2 pi f d / c) / (4 pi f d); throws when the points
/// coincide.
cplx los_gain(double f_hz, const Vec3& p_user, const Vec3& p_elem, double g_e, double g_u);

/// n_subbands x n_elements matrix of LoS gains for one band.
CMat los_matrix(const ChannelTables& t, int band, const Vec3& p_user);

/// Closed-form derivative of los_matrix w.r.t. user coordinate `axis`.
CMat los_matrix_grad(const ChannelTables& t, int band, int axis, const Vec3& p_user);

/// Element-grid response to a plane wave from (azimuth, elevation),
/// reference element 0; the board normal is +x.
CVec array_response(const ChannelTables& t, int band, double azimuth, double elevation);

/// Multipath covariance across elements: quadrature of a(theta) a(theta)^H
/// against a separable Laplacian power-angle profile over the front
/// hemisphere, rescaled to the ROI-average LoS power per element.
CMat angular_covariance(const SystemConfig& cfg, const BandPlan& plan, const RhsGeometry& geom,
                        int band);

/// Frequency decorrelation 1 / (1 + i 2 pi sigma (f_j1 - f_j2)).
cplx rho_f(const ChannelTables& t, int band, int j1, int j2);
/// Temporal decorrelation J0(2 pi f_D (q1 - q2) T_F), f_D = v f_i / c.
double rho_t(const ChannelTables& t, int band, int q1, int q2);

/// Effective beamforming matrix: row-block j equals
/// configs[i] .* (combiners[i][j] * onboard[i][j]).
CMat assemble_T(const ChannelTables& t, int band, const Beamforming& bf);

/// One draw of the (n_subbands*n_frames) x n_elements multipath matrix,
/// row covariance kron(kernel_f, kernel_t), column covariance angular_cov.
CMat sample_multipath(const ChannelTables& t, int band, Rng& rng);

/// Noise-free mean of the received matrix (LoS only).
CMat mean_received(const ChannelTables& t, const Beamforming& bf, const Vec3& p_user);

/// Received signals, one row per band, n_subbands*n_frames entries each
/// (row index j*n_frames + q). Unit transmit symbol. Band b consumes the
/// sub-streams fork(2b) for multipath and fork(2b+1) for noise, so the
/// draws are reproducible per (seed, band) regardless of the flags.
CMat synth_received(const ChannelTables& t, const Beamforming& bf, const Vec3& p_user,
                    bool include_multipath, bool include_noise, std::uint64_t seed);

/// Per-sub-band effective transmit rows c .* (s_j * onboard[i][j]) used by
/// capacity(); c is 1 x n_elements, s_rows is n_subbands x n_feeds.
CMat beam_rows(const ChannelTables& t, int band, const RVec& c_row, const CMat& s_rows);

/// Shannon capacity of one band in bits/s, LoS plus multipath power over
/// noise per sub-band; t_rows is n_subbands x n_elements.
double capacity(const ChannelTables& t, int band, const CMat& t_rows, const Vec3& p_user);

} // namespace holocrlb

#endif
