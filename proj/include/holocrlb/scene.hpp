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

#ifndef HOLOCRLB_SCENE_HPP
#define HOLOCRLB_SCENE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace holocrlb {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

using Vec3 = Eigen::Vector3d;

struct RoiBox {
    Vec3 center{10.0, 0.0, 0.0};
    Vec3 dims{10.0, 10.0, 2.0};
};

/// Everything that defines one experiment. Field defaults are the
/// desk-scale reference setup; all of them are overridable from the TOML
/// config (see load_config).
struct SystemConfig {
    // array / board
    int n_bands = 2;    // frequency bands used in TDD rotation
    int n_subbands = 4; // orthogonal sub-bands per band
    int n_frames = 4;   // observation frames per band
    int n_feeds = 2;
    int n_elements = 16; // must be a perfect square
    double element_spacing_factor = 0.3; // spacing = factor * lambda_avr
    double refractive_index = 2.1;       // board substrate (FR-4)
    double gain_element = 1.0;
    double gain_user = 1.0;

    // spectrum
    double band_base_hz = 2.0e9; // center of band i = base + i*step, i = 1..n_bands
    double band_step_hz = 0.5e9;
    double subband_width_hz = 10.0e6;
    double noise_psd = 1.0e-20; // W/Hz
    double max_power = 0.1;     // W, per-(band, frame) combining budget

    // scattering / motion
    std::vector<double> rms_delay_spread_s{50.0e-9}; // one entry, or one per band
    double max_speed_mps = 1.0;
    double frame_duration_s = 1.0e-3;
    double angular_spread_deg = 10.0;
    int pap_quadrature_nodes = 16; // Gauss-Legendre nodes per half-axis

    // region of interest
    RoiBox roi;

    // optimizer
    int n_roi_samples = 10;
    int max_outer_iters = 10;
    int updates_per_subproblem = 20;
    double barrier_mu0 = 1e-3;    // mu0 = barrier_mu0 * |initial objective|
    double barrier_shrink = 0.2;  // per accepted step
    double tr_radius0 = 0.1;      // radius0 = tr_radius0 * (1 + ||vars||)

    // genetic-algorithm benchmark knobs
    int ga_population = 20;
    int ga_tournament = 3;
    double ga_crossover_prob = 0.5;
    double ga_mutation_sigma = 0.05;
    int ga_generations = 10;
    int ga_elitism = 1;

    std::uint64_t rng_seed = 1;

    double rms_delay_spread(int band) const; // band is 0-based
    int elements_per_side() const;

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

struct RhsGeometry {
    Eigen::Matrix<double, Eigen::Dynamic, 3> element_positions; // n_elements x 3
    Eigen::Matrix<double, Eigen::Dynamic, 3> feed_positions;    // n_feeds x 3
};

struct BandPlan {
    Eigen::VectorXd centers;        // n_bands
    Eigen::MatrixXd subband_freqs;  // n_bands x n_subbands
    double lambda_avr = 0.0;        // c / mean(centers)
};

/// Sub-band centers sit symmetrically around each band center with gap W;
/// throws if adjacent bands would overlap.
BandPlan build_band_plan(const SystemConfig& cfg);

/// Square element grid in the y-z plane (x = 0), centroid at the origin,
/// spacing element_spacing_factor * lambda_avr. Feeds lie in the board
/// plane on a line two spacings below the grid, spread over its y-extent.
RhsGeometry build_geometry(const SystemConfig& cfg, const BandPlan& plan);

/// n i.i.d. uniform draws from the box; deterministic per seed.
std::vector<Vec3> sample_positions(const RoiBox& roi, int n, std::uint64_t seed);

/// Loads a TOML config; missing keys keep the defaults above, unknown
/// keys or tables are hard errors.
SystemConfig load_config(const std::string& path);

/// Inverse of load_config for the report echo.
std::string config_to_toml(const SystemConfig& cfg);

} // namespace holocrlb

#endif
