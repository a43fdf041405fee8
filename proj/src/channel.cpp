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

#include "holocrlb/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace holocrlb {

namespace {

constexpr double kMinLosDistance = 1e-6; // m
// Internal seed anchoring the ROI-average LoS power used to scale the
// angular covariance; fixed so tables depend on the config alone.
constexpr std::uint64_t kCovAnchorSeed = 0x9D5C0FFEEull;
constexpr int kCovAnchorSamples = 256;

} // namespace

double combine_power(const Beamforming& bf, int band, int frame)
{
    double p = 0.0;
    for (const CMat& s : bf.combiners.at((std::size_t)band))
        p += s.row(frame).squaredNorm();
    return p;
}

bool beamforming_feasible(const Beamforming& bf, const SystemConfig& cfg, double tol)
{
    if ((int)bf.configs.size() != cfg.n_bands || (int)bf.combiners.size() != cfg.n_bands)
        return false;
    for (int i = 0; i < cfg.n_bands; ++i) {
        const RMat& c = bf.configs[(std::size_t)i];
        if (c.rows() != cfg.n_frames || c.cols() != cfg.n_elements) return false;
        if (c.minCoeff() < 0.0 || c.maxCoeff() > 1.0) return false;
        if ((int)bf.combiners[(std::size_t)i].size() != cfg.n_subbands) return false;
        for (const CMat& s : bf.combiners[(std::size_t)i])
            if (s.rows() != cfg.n_frames || s.cols() != cfg.n_feeds) return false;
        for (int q = 0; q < cfg.n_frames; ++q)
            if (std::abs(combine_power(bf, i, q) - cfg.max_power) > tol * cfg.max_power)
                return false;
    }
    return true;
}

cplx onboard_gain(double f_hz, const Vec3& p_src, const Vec3& p_dst, double n_r)
{
    const double phase = -2.0 * M_PI * n_r * f_hz / kSpeedOfLight * (p_dst - p_src).norm();
    return std::polar(1.0, phase);
}

cplx los_gain(double f_hz, const Vec3& p_user, const Vec3& p_elem, double g_e, double g_u)
{
    const double d = (p_user - p_elem).norm();
    if (d < kMinLosDistance)
        throw std::invalid_argument("los_gain: user coincides with an element");
    const double mag = kSpeedOfLight * g_e * g_u / (4.0 * M_PI * f_hz * d);
    const double phase = -2.0 * M_PI * f_hz / kSpeedOfLight * d;
    return std::polar(mag, phase);
}

CMat los_matrix(const ChannelTables& t, int band, const Vec3& p_user)
{
    const int ns = t.cfg.n_subbands, ne = t.cfg.n_elements;
    CMat h(ns, ne);
    for (int m = 0; m < ne; ++m) {
        const Vec3 pe = t.geom.element_positions.row(m);
        for (int j = 0; j < ns; ++j)
            h(j, m) = los_gain(t.plan.subband_freqs(band, j), p_user, pe, t.cfg.gain_element,
                               t.cfg.gain_user);
    }
    return h;
}

CMat los_matrix_grad(const ChannelTables& t, int band, int axis, const Vec3& p_user)
{
    const int ns = t.cfg.n_subbands, ne = t.cfg.n_elements;
    CMat g(ns, ne);
    for (int m = 0; m < ne; ++m) {
        const Vec3 pe = t.geom.element_positions.row(m);
        const double d = (p_user - pe).norm();
        if (d < kMinLosDistance)
            throw std::invalid_argument("los_matrix_grad: user coincides with an element");
        const double dir = (p_user(axis) - pe(axis)) / d;
        for (int j = 0; j < ns; ++j) {
            const double f = t.plan.subband_freqs(band, j);
            const cplx h = los_gain(f, p_user, pe, t.cfg.gain_element, t.cfg.gain_user);
            // d h / d p_axis = (p_axis - pe_axis)/d * (-1/d - i 2 pi f / c) * h
            g(j, m) = dir * (cplx(-1.0 / d, -2.0 * M_PI * f / kSpeedOfLight)) * h;
        }
    }
    return g;
}

namespace {

Vec3 unit_direction(double azimuth, double elevation)
{
    return {std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
            std::sin(elevation)};
}

CVec array_response_impl(const SystemConfig& cfg, const BandPlan& plan, const RhsGeometry& geom,
                         int band, double azimuth, double elevation)
{
    const Vec3 n = unit_direction(azimuth, elevation);
    const Vec3 ref = geom.element_positions.row(0);
    const double k_wave = 2.0 * M_PI * plan.centers(band) / kSpeedOfLight;
    CVec a(cfg.n_elements);
    for (int m = 0; m < cfg.n_elements; ++m) {
        const Vec3 pm = geom.element_positions.row(m);
        a(m) = std::polar(cfg.gain_element, k_wave * (pm - ref).dot(n));
    }
    return a;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign((std::size_t)n, 0.0);
    weights.assign((std::size_t)n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[(std::size_t)i] = x;
        weights[(std::size_t)i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

} // namespace

CMat angular_covariance(const SystemConfig& cfg, const BandPlan& plan, const RhsGeometry& geom,
                        int band)
{
    if (cfg.pap_quadrature_nodes < 8)
        throw std::invalid_argument("angular_covariance: need >= 8 quadrature nodes per axis");
    const double spread = cfg.angular_spread_deg * M_PI / 180.0;
    const double b = spread / std::sqrt(2.0); // Laplace scale with std = spread
    const double half = 0.5 * M_PI;

    // The Laplace density has a kink at 0; Gauss-Legendre is applied on
    // each half-axis separately so both pieces are smooth.
    std::vector<double> gl_nodes, gl_weights;
    gauss_legendre(cfg.pap_quadrature_nodes, gl_nodes, gl_weights);
    std::vector<double> ang, w;
    for (std::size_t i = 0; i < gl_nodes.size(); ++i) {
        const double lo_node = -half / 2.0 + gl_nodes[i] * half / 2.0; // [-pi/2, 0]
        const double hi_node = half / 2.0 + gl_nodes[i] * half / 2.0;  // [0, pi/2]
        ang.push_back(lo_node);
        w.push_back(gl_weights[i] * half / 2.0);
        ang.push_back(hi_node);
        w.push_back(gl_weights[i] * half / 2.0);
    }

    auto laplace = [b](double x) { return std::exp(-std::abs(x) / b) / (2.0 * b); };

    CMat v = CMat::Zero(cfg.n_elements, cfg.n_elements);
    double mass = 0.0;
    for (std::size_t ia = 0; ia < ang.size(); ++ia) {
        for (std::size_t ie = 0; ie < ang.size(); ++ie) {
            const double weight = w[ia] * w[ie] * laplace(ang[ia]) * laplace(ang[ie]);
            const CVec a = array_response_impl(cfg, plan, geom, band, ang[ia], ang[ie]);
            v.noalias() += weight * (a * a.adjoint());
            mass += weight;
        }
    }

    // Rescale so the per-element multipath power matches the ROI-average
    // LoS power at the center sub-band (fixed internal sample set).
    const int j0 = cfg.n_subbands / 2;
    const double f0 = plan.subband_freqs(band, j0);
    const auto anchors = sample_positions(cfg.roi, kCovAnchorSamples, kCovAnchorSeed);
    double target = 0.0;
    for (const Vec3& p : anchors) {
        double acc = 0.0;
        for (int m = 0; m < cfg.n_elements; ++m) {
            const Vec3 pe = geom.element_positions.row(m);
            acc += std::norm(los_gain(f0, p, pe, cfg.gain_element, cfg.gain_user));
        }
        target += acc / cfg.n_elements;
    }
    target /= anchors.size();

    const double diag_power = v.real().trace() / cfg.n_elements;
    if (diag_power > 0.0) v *= target / diag_power;
    (void)mass;
    return v;
}

cplx rho_f(const ChannelTables& t, int band, int j1, int j2)
{
    const double df = t.plan.subband_freqs(band, j1) - t.plan.subband_freqs(band, j2);
    const double sigma = t.cfg.rms_delay_spread(band);
    return 1.0 / cplx(1.0, 2.0 * M_PI * sigma * df);
}

double rho_t(const ChannelTables& t, int band, int q1, int q2)
{
    const double doppler = t.cfg.max_speed_mps * t.plan.centers(band) / kSpeedOfLight;
    return bessel_j0(2.0 * M_PI * doppler * (double)(q1 - q2) * t.cfg.frame_duration_s);
}

ChannelTables build_tables(const SystemConfig& cfg)
{
    cfg.validate();
    ChannelTables t;
    t.cfg = cfg;
    t.plan = build_band_plan(cfg);
    t.geom = build_geometry(cfg, t.plan);
    t.noise_var = cfg.noise_psd * cfg.subband_width_hz;

    const int nb = cfg.n_bands, ns = cfg.n_subbands, q = cfg.n_frames;
    t.onboard.resize((std::size_t)nb);
    t.angular_cov.resize((std::size_t)nb);
    t.kernel_f.resize((std::size_t)nb);
    t.kernel_t.resize((std::size_t)nb);
    t.kernel_ft.resize((std::size_t)nb);
    t.mp_row_factor.resize((std::size_t)nb);
    t.mp_col_factor.resize((std::size_t)nb);

    for (int i = 0; i < nb; ++i) {
        t.onboard[(std::size_t)i].resize((std::size_t)ns);
        for (int j = 0; j < ns; ++j) {
            CMat b(cfg.n_feeds, cfg.n_elements);
            for (int k = 0; k < cfg.n_feeds; ++k) {
                const Vec3 pf = t.geom.feed_positions.row(k);
                for (int m = 0; m < cfg.n_elements; ++m) {
                    const Vec3 pe = t.geom.element_positions.row(m);
                    b(k, m) = onboard_gain(t.plan.subband_freqs(i, j), pe, pf, cfg.refractive_index);
                }
            }
            t.onboard[(std::size_t)i][(std::size_t)j] = std::move(b);
        }

        t.angular_cov[(std::size_t)i] = angular_covariance(cfg, t.plan, t.geom, i);

        CMat kf(ns, ns);
        for (int j1 = 0; j1 < ns; ++j1)
            for (int j2 = 0; j2 < ns; ++j2) kf(j1, j2) = rho_f(t, i, j1, j2);
        t.kernel_f[(std::size_t)i] = kf;

        RMat kt(q, q);
        for (int q1 = 0; q1 < q; ++q1)
            for (int q2 = 0; q2 < q; ++q2) kt(q1, q2) = rho_t(t, i, q1, q2);
        t.kernel_t[(std::size_t)i] = kt;

        // (K_f kron J_Q) .* (J_NS kron K_t); elementwise identical to
        // kron(K_f, K_t) and kept in that form for the covariance assembly.
        const CMat ones_q = CMat::Ones(q, q);
        const CMat ones_s = CMat::Ones(ns, ns);
        t.kernel_ft[(std::size_t)i] =
            hadamard(kron(kf, ones_q), kron(ones_s, kt.cast<cplx>().eval()));

        t.mp_row_factor[(std::size_t)i] =
            kron(psd_sqrt_factor(kf), psd_sqrt_factor(kt.cast<cplx>().eval()));
        t.mp_col_factor[(std::size_t)i] = psd_sqrt_factor(t.angular_cov[(std::size_t)i]);
    }
    return t;
}

CVec array_response(const ChannelTables& t, int band, double azimuth, double elevation)
{
    return array_response_impl(t.cfg, t.plan, t.geom, band, azimuth, elevation);
}

CMat assemble_T(const ChannelTables& t, int band, const Beamforming& bf)
{
    const int ns = t.cfg.n_subbands, q = t.cfg.n_frames, ne = t.cfg.n_elements;
    const RMat& c = bf.configs.at((std::size_t)band);
    if (c.rows() != q || c.cols() != ne)
        throw std::invalid_argument("assemble_T: config matrix shape mismatch");
    CMat out(ns * q, ne);
    for (int j = 0; j < ns; ++j) {
        const CMat& s = bf.combiners.at((std::size_t)band).at((std::size_t)j);
        if (s.rows() != q || s.cols() != t.cfg.n_feeds)
            throw std::invalid_argument("assemble_T: combiner shape mismatch");
        out.middleRows((Eigen::Index)j * q, q) =
            c.cast<cplx>().cwiseProduct(s * t.onboard[(std::size_t)band][(std::size_t)j]);
    }
    return out;
}

CMat sample_multipath(const ChannelTables& t, int band, Rng& rng)
{
    const int rows = t.cfg.n_subbands * t.cfg.n_frames;
    const int ne = t.cfg.n_elements;
    CMat g(rows, ne);
    for (int r = 0; r < rows; ++r)
        for (int m = 0; m < ne; ++m) g(r, m) = rng.cgaussian();
    // row covariance kron(K_f, K_t), column covariance V
    return t.mp_row_factor[(std::size_t)band] * g *
           t.mp_col_factor[(std::size_t)band].transpose();
}

namespace {

CMat replicate_rows(const CMat& h, int q)
{
    CMat out(h.rows() * q, h.cols());
    for (Eigen::Index j = 0; j < h.rows(); ++j)
        out.middleRows(j * q, q) = h.row(j).replicate(q, 1);
    return out;
}

} // namespace

CMat mean_received(const ChannelTables& t, const Beamforming& bf, const Vec3& p_user)
{
    const int nb = t.cfg.n_bands, rows = t.cfg.n_subbands * t.cfg.n_frames;
    CMat y(nb, rows);
    for (int i = 0; i < nb; ++i) {
        const CMat h_rep = replicate_rows(los_matrix(t, i, p_user), t.cfg.n_frames);
        const CMat ti = assemble_T(t, i, bf);
        y.row(i) = h_rep.cwiseProduct(ti).rowwise().sum().transpose();
    }
    return y;
}

CMat synth_received(const ChannelTables& t, const Beamforming& bf, const Vec3& p_user,
                    bool include_multipath, bool include_noise, std::uint64_t seed)
{
    const int nb = t.cfg.n_bands, rows = t.cfg.n_subbands * t.cfg.n_frames;
    const Rng root(seed);
    CMat y(nb, rows);
    for (int i = 0; i < nb; ++i) {
        CMat gains = replicate_rows(los_matrix(t, i, p_user), t.cfg.n_frames);
        if (include_multipath) {
            Rng mp = root.fork(2 * (std::uint64_t)i);
            gains += sample_multipath(t, i, mp);
        }
        const CMat ti = assemble_T(t, i, bf);
        CVec row = gains.cwiseProduct(ti).rowwise().sum();
        if (include_noise) {
            Rng nz = root.fork(2 * (std::uint64_t)i + 1);
            const double sigma = std::sqrt(t.noise_var);
            for (int r = 0; r < rows; ++r) row(r) += sigma * nz.cgaussian();
        }
        y.row(i) = row.transpose();
    }
    return y;
}

CMat beam_rows(const ChannelTables& t, int band, const RVec& c_row, const CMat& s_rows)
{
    const int ns = t.cfg.n_subbands, ne = t.cfg.n_elements;
    if (c_row.size() != ne || s_rows.rows() != ns || s_rows.cols() != t.cfg.n_feeds)
        throw std::invalid_argument("beam_rows: shape mismatch");
    CMat rows(ns, ne);
    for (int j = 0; j < ns; ++j)
        rows.row(j) = c_row.cast<cplx>().transpose().cwiseProduct(
            s_rows.row(j) * t.onboard[(std::size_t)band][(std::size_t)j]);
    return rows;
}

double capacity(const ChannelTables& t, int band, const CMat& t_rows, const Vec3& p_user)
{
    const int ns = t.cfg.n_subbands;
    if (t_rows.rows() != ns || t_rows.cols() != t.cfg.n_elements)
        throw std::invalid_argument("capacity: t_rows shape mismatch");
    const CMat h = los_matrix(t, band, p_user);
    const CMat& v = t.angular_cov[(std::size_t)band];
    double rate = 0.0;
    for (int j = 0; j < ns; ++j) {
        const cplx los = (t_rows.row(j) * h.row(j).transpose())(0, 0);
        const double mp = std::real((t_rows.row(j) * v * t_rows.row(j).adjoint())(0, 0));
        const double snr = (std::norm(los) + std::max(mp, 0.0)) / t.noise_var;
        rate += t.cfg.subband_width_hz * std::log2(1.0 + snr);
    }
    return rate;
}

} // namespace holocrlb
