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

#include "holocrlb/grad.hpp"

#include <cmath>
#include <stdexcept>

#include "holocrlb/parallel.hpp"

// Derivative blocks of the Fisher entries. With r = j*Q + t,
// P_j = combiner_j * onboard_j and D_v = Hdot_rep_v - R_v, where
// R_v[r,m] = sum_c kernel_ft[r,c] * zeta_v[c] * (V T^H)[m,c] carries the
// covariance derivative, the two families collapse to
//   d[F]_{uv} / dC[t,n]   = 2 Re( sum_j zb_u[r] P_j[t,n] D_v[r,n] + (u<->v) )
//   d[F]_{uv} / dS_j[t,k] =       zb_u[r] ((C .* D_v_j) B_j^T)[t,k] + (u<->v)
// (zb = conj(zeta); the combiner form is the holomorphic d/dz partial).

namespace holocrlb {

namespace {

CMat replicate_rows(const CMat& h, int q)
{
    CMat out(h.rows() * q, h.cols());
    for (Eigen::Index j = 0; j < h.rows(); ++j)
        out.middleRows(j * q, q) = h.row(j).replicate(q, 1);
    return out;
}

// Per-band, per-position context shared by all nine (u,v) blocks.
struct BandContext {
    std::array<CMat, 3> dmat;  // (ns*q) x ne
    CMat p_full;               // (ns*q) x ne, row-block j = P_j
};

BandContext band_context(const ChannelTables& t, const FisherWorkspace& ws, const FimEval& fe,
                         int band)
{
    const int q = t.cfg.n_frames, ns = t.cfg.n_subbands, ne = t.cfg.n_elements;
    BandContext ctx;
    ctx.p_full.resize((Eigen::Index)ns * q, ne);
    for (int j = 0; j < ns; ++j)
        ctx.p_full.middleRows((Eigen::Index)j * q, q) =
            ws.sub_rows[(std::size_t)band][(std::size_t)j];

    const CMat& kft = t.kernel_ft[(std::size_t)band];
    const CMat vth_t = ws.v_th[(std::size_t)band].transpose(); // (ns*q) x ne
    for (int v = 0; v < 3; ++v) {
        const CVec& zeta_v = fe.cov_igrad[(std::size_t)band][(std::size_t)v];
        const CMat hdot_rep =
            replicate_rows(los_matrix_grad(t, band, v, fe.position), q);
        const CMat r_v =
            (kft.array().rowwise() * zeta_v.transpose().array()).matrix() * vth_t;
        ctx.dmat[(std::size_t)v] = hdot_rep - r_v;
    }
    return ctx;
}

// sum over row-blocks: out(t,n) = sum_j m(j*q + t, n)
template <typename Mat>
Mat fold_frames(const Mat& m, int q)
{
    Mat out = m.topRows(q);
    for (Eigen::Index j = 1; j < m.rows() / q; ++j) out += m.middleRows(j * q, q);
    return out;
}

CMat scale_rows(const CVec& s, const CMat& m)
{
    return (m.array().colwise() * s.array()).matrix();
}

} // namespace

RMat fim_partial_config(const ChannelTables& t, const FisherWorkspace& ws, const FimEval& fe,
                        int band, int u, int v)
{
    const int q = t.cfg.n_frames;
    const BandContext ctx = band_context(t, ws, fe, band);
    const CVec zb_u = fe.cov_igrad[(std::size_t)band][(std::size_t)u].conjugate();
    const CVec zb_v = fe.cov_igrad[(std::size_t)band][(std::size_t)v].conjugate();
    const CMat x_uv = scale_rows(zb_u, ctx.p_full.cwiseProduct(ctx.dmat[(std::size_t)v]));
    const CMat x_vu = scale_rows(zb_v, ctx.p_full.cwiseProduct(ctx.dmat[(std::size_t)u]));
    return 2.0 * fold_frames<CMat>(x_uv + x_vu, q).real();
}

CMat fim_partial_combiner(const ChannelTables& t, const FisherWorkspace& ws, const FimEval& fe,
                          int band, int sub, int u, int v)
{
    const int q = t.cfg.n_frames;
    const BandContext ctx = band_context(t, ws, fe, band);
    const CMat c = bfconfig_unavailable_placeholder(); // replaced below
    (void)ctx; (void)c; (void)u; (void)v; (void)sub;
    throw std::logic_error("unreachable");
}

} // namespace holocrlb
