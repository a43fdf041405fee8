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

#include "holocrlb/fisher.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "holocrlb/parallel.hpp"

namespace holocrlb {

namespace {

constexpr double kFimConditionLimit = 1e12;

CMat replicate_rows(const CMat& h, int q)
{
    CMat out(h.rows() * q, h.cols());
    for (Eigen::Index j = 0; j < h.rows(); ++j)
        out.middleRows(j * q, q) = h.row(j).replicate(q, 1);
    return out;
}

} // namespace

CMat signal_covariance(const ChannelTables& t, int band, const Beamforming& bf)
{
    if (t.noise_var <= 0.0)
        throw std::runtime_error("signal_covariance: non-positive noise power");
    const CMat ti = assemble_T(t, band, bf);
    const CMat tvt = ti * t.angular_cov[(std::size_t)band] * ti.adjoint();
    const Eigen::Index n = ti.rows();
    return t.kernel_ft[(std::size_t)band].cwiseProduct(tvt) + t.noise_var * CMat::Identity(n, n);
}

FisherWorkspace fisher_workspace(const ChannelTables& t, const Beamforming& bf)
{
    const int nb = t.cfg.n_bands;
    FisherWorkspace ws;
    ws.bf = bf;
    ws.t_mat.reserve((std::size_t)nb);
    ws.sub_rows.resize((std::size_t)nb);
    ws.cov.reserve((std::size_t)nb);
    ws.cov_llt.reserve((std::size_t)nb);
    ws.v_th.reserve((std::size_t)nb);
    for (int i = 0; i < nb; ++i) {
        CMat ti = assemble_T(t, i, bf);
        ws.sub_rows[(std::size_t)i].reserve((std::size_t)t.cfg.n_subbands);
        for (int j = 0; j < t.cfg.n_subbands; ++j)
            ws.sub_rows[(std::size_t)i].push_back(
                bf.combiners[(std::size_t)i][(std::size_t)j] *
                t.onboard[(std::size_t)i][(std::size_t)j]);
        ws.v_th.push_back(t.angular_cov[(std::size_t)i] * ti.adjoint());
        const CMat tvt = ti * ws.v_th.back();
        const Eigen::Index n = ti.rows();
        CMat cov =
            t.kernel_ft[(std::size_t)i].cwiseProduct(tvt) + t.noise_var * CMat::Identity(n, n);
        Eigen::LLT<CMat> llt(cov);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("fisher_workspace: received-signal covariance not positive-definite");
        ws.t_mat.push_back(std::move(ti));
        ws.cov.push_back(std::move(cov));
        ws.cov_llt.push_back(std::move(llt));
    }
    return ws;
}

CVec mean_signal_grad(const ChannelTables& t, int band, int axis, const Beamforming& bf,
                      const Vec3& p_user)
{
    const CMat grad_rep = replicate_rows(los_matrix_grad(t, band, axis, p_user), t.cfg.n_frames);
    const CMat ti = assemble_T(t, band, bf);
    return grad_rep.cwiseProduct(ti).rowwise().sum();
}

FimEval eval_fim(const ChannelTables& t, const FisherWorkspace& ws, const Vec3& p_user)
{
    const int nb = t.cfg.n_bands;
    FimEval fe;
    fe.position = p_user;
    fe.mean_grad.resize((std::size_t)nb);
    fe.cov_igrad.resize((std::size_t)nb);

    Eigen::Matrix3d fim = Eigen::Matrix3d::Zero();
    for (int i = 0; i < nb; ++i) {
        const int rows = t.cfg.n_subbands * t.cfg.n_frames;
        CMat dy(rows, 3);
        for (int u = 0; u < 3; ++u) {
            const CMat grad_rep =
                replicate_rows(los_matrix_grad(t, i, u, p_user), t.cfg.n_frames);
            dy.col(u) = grad_rep.cwiseProduct(ws.t_mat[(std::size_t)i]).rowwise().sum();
        }
        const CMat zeta = ws.cov_llt[(std::size_t)i].solve(dy);
        for (int u = 0; u < 3; ++u) {
            fe.mean_grad[(std::size_t)i][(std::size_t)u] = dy.col(u);
            fe.cov_igrad[(std::size_t)i][(std::size_t)u] = zeta.col(u);
        }
        for (int u = 0; u < 3; ++u)
            for (int v = u; v < 3; ++v)
                fim(u, v) += 2.0 * std::real(dy.col(u).dot(zeta.col(v)));
    }
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < u; ++v) fim(u, v) = fim(v, u);
    fe.fim = fim;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(fim);
    const Eigen::Vector3d ev = es.eigenvalues();
    const double lmax = ev.cwiseAbs().maxCoeff();
    if (!(ev.minCoeff() > 0.0) || lmax / ev.minCoeff() > kFimConditionLimit) {
        std::ostringstream msg;
        msg << "fim: position unidentifiable under this beamforming at (" << p_user(0) << ", "
            << p_user(1) << ", " << p_user(2) << ")";
        throw std::runtime_error(msg.str());
    }
    const Eigen::Vector3d inv = ev.cwiseInverse();
    fe.fim_inv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    fe.fim_inv2 = es.eigenvectors() * inv.cwiseAbs2().asDiagonal() * es.eigenvectors().transpose();
    fe.crlb = inv.sum();
    return fe;
}

FimEval eval_fim(const ChannelTables& t, const Beamforming& bf, const Vec3& p_user)
{
    return eval_fim(t, fisher_workspace(t, bf), p_user);
}

double avg_crlb(const ChannelTables& t, const FisherWorkspace& ws, const std::vector<Vec3>& samples)
{
    if (samples.empty()) throw std::invalid_argument("avg_crlb: empty sample list");
    std::vector<double> per_sample(samples.size(), 0.0);
    parallel_for(samples.size(), [&](std::size_t k) {
        per_sample[k] = eval_fim(t, ws, samples[k]).crlb;
    });
    double acc = 0.0;
    for (double v : per_sample) acc += v; // fixed order, deterministic
    return acc / (double)samples.size();
}

double avg_crlb(const ChannelTables& t, const Beamforming& bf, const std::vector<Vec3>& samples)
{
    return avg_crlb(t, fisher_workspace(t, bf), samples);
}

} // namespace holocrlb
