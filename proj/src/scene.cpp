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

#include "holocrlb/scene.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "holocrlb/rng.hpp"
#include "holocrlb/toml_lite.hpp"

namespace holocrlb {

double SystemConfig::rms_delay_spread(int band) const
{
    if (rms_delay_spread_s.size() == 1) return rms_delay_spread_s[0];
    return rms_delay_spread_s.at((std::size_t)band);
}

int SystemConfig::elements_per_side() const
{
    const int m = (int)std::lround(std::sqrt((double)n_elements));
    return m;
}

void SystemConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("config: ") + what);
    };
    require(n_bands >= 1, "n_bands must be >= 1");
    require(n_subbands >= 1, "n_subbands must be >= 1");
    require(n_frames >= 1, "n_frames must be >= 1");
    require(n_feeds >= 1, "n_feeds must be >= 1");
    require(n_elements >= 1, "n_elements must be >= 1");
    const int m = elements_per_side();
    require(m * m == n_elements, "n_elements must be a perfect square");
    require(element_spacing_factor > 0, "element_spacing_factor must be > 0");
    require(refractive_index > 0, "refractive_index must be > 0");
    require(gain_element > 0 && gain_user > 0, "antenna gains must be > 0");
    require(band_base_hz > 0 && band_step_hz > 0, "band plan frequencies must be > 0");
    require(subband_width_hz > 0, "subband_width_hz must be > 0");
    require(noise_psd > 0, "noise_psd must be > 0");
    require(max_power > 0, "max_power must be > 0");
    require(!rms_delay_spread_s.empty() &&
                (rms_delay_spread_s.size() == 1 || (int)rms_delay_spread_s.size() == n_bands),
            "rms_delay_spread_s needs one value or one per band");
    for (double s : rms_delay_spread_s) require(s > 0, "rms delay spread must be > 0");
    require(max_speed_mps >= 0, "max_speed_mps must be >= 0");
    require(frame_duration_s > 0, "frame_duration_s must be > 0");
    require(angular_spread_deg > 0, "angular_spread_deg must be > 0");
    require(pap_quadrature_nodes >= 8, "pap_quadrature_nodes must be >= 8");
    require(roi.dims.minCoeff() > 0, "roi dims must be positive");
    require(n_roi_samples >= 1, "n_roi_samples must be >= 1");
    require(max_outer_iters >= 1, "max_outer_iters must be >= 1");
    require(updates_per_subproblem >= 1, "updates_per_subproblem must be >= 1");
    require(barrier_mu0 > 0, "barrier_mu0 must be > 0");
    require(barrier_shrink > 0 && barrier_shrink < 1, "barrier_shrink must be in (0,1)");
    require(tr_radius0 > 0, "tr_radius0 must be > 0");
    require(ga_population >= 2, "ga_population must be >= 2");
    require(ga_tournament >= 1 && ga_tournament <= ga_population, "ga_tournament out of range");
    require(ga_crossover_prob >= 0 && ga_crossover_prob <= 1, "ga_crossover_prob out of range");
    require(ga_mutation_sigma >= 0, "ga_mutation_sigma must be >= 0");
    require(ga_generations >= 1, "ga_generations must be >= 1");
    require(ga_elitism >= 0 && ga_elitism < ga_population, "ga_elitism out of range");
}

BandPlan build_band_plan(const SystemConfig& cfg)
{
    cfg.validate();
    BandPlan plan;
    plan.centers.resize(cfg.n_bands);
    for (int i = 0; i < cfg.n_bands; ++i)
        plan.centers(i) = cfg.band_base_hz + (double)(i + 1) * cfg.band_step_hz;
    const double occupied = (double)cfg.n_subbands * cfg.subband_width_hz;
    if (cfg.n_bands > 1 && cfg.band_step_hz < occupied)
        throw std::invalid_argument("band plan: bands overlap (step < n_subbands * W)");
    plan.subband_freqs.resize(cfg.n_bands, cfg.n_subbands);
    for (int i = 0; i < cfg.n_bands; ++i)
        for (int j = 0; j < cfg.n_subbands; ++j)
            plan.subband_freqs(i, j) =
                plan.centers(i) + ((double)(j + 1) - 0.5 * (cfg.n_subbands + 1)) * cfg.subband_width_hz;
    plan.lambda_avr = kSpeedOfLight / plan.centers.mean();
    return plan;
}

RhsGeometry build_geometry(const SystemConfig& cfg, const BandPlan& plan)
{
    cfg.validate();
    const int m = cfg.elements_per_side();
    const double d = cfg.element_spacing_factor * plan.lambda_avr;
    RhsGeometry geom;
    geom.element_positions.resize(cfg.n_elements, 3);
    for (int iz = 0; iz < m; ++iz) {
        for (int iy = 0; iy < m; ++iy) {
            const int idx = iz * m + iy;
            geom.element_positions(idx, 0) = 0.0;
            geom.element_positions(idx, 1) = ((double)iy - 0.5 * (m - 1)) * d;
            geom.element_positions(idx, 2) = ((double)iz - 0.5 * (m - 1)) * d;
        }
    }
    const double y_min = -0.5 * (m - 1) * d;
    const double y_max = 0.5 * (m - 1) * d;
    const double z_feed = y_min - 2.0 * d; // z_min of the grid equals y_min
    geom.feed_positions.resize(cfg.n_feeds, 3);
    for (int k = 0; k < cfg.n_feeds; ++k) {
        const double frac = cfg.n_feeds == 1 ? 0.5 : (double)k / (double)(cfg.n_feeds - 1);
        geom.feed_positions(k, 0) = 0.0;
        geom.feed_positions(k, 1) = y_min + frac * (y_max - y_min);
        geom.feed_positions(k, 2) = z_feed;
    }
    return geom;
}

std::vector<Vec3> sample_positions(const RoiBox& roi, int n, std::uint64_t seed)
{
    if (n < 1) throw std::invalid_argument("sample_positions: n must be >= 1");
    Rng rng(seed);
    std::vector<Vec3> out;
    out.reserve((std::size_t)n);
    for (int i = 0; i < n; ++i) {
        Vec3 p;
        for (int a = 0; a < 3; ++a)
            p(a) = roi.center(a) + roi.dims(a) * (rng.uniform() - 0.5);
        out.push_back(p);
    }
    return out;
}

namespace {

using toml::Table;
using toml::Value;

double as_double(const Value& v, const std::string& key)
{
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    if (std::holds_alternative<std::int64_t>(v)) return (double)std::get<std::int64_t>(v);
    throw std::runtime_error("config: key '" + key + "' must be a number");
}

int as_int(const Value& v, const std::string& key)
{
    if (!std::holds_alternative<std::int64_t>(v))
        throw std::runtime_error("config: key '" + key + "' must be an integer");
    return (int)std::get<std::int64_t>(v);
}

std::uint64_t as_u64(const Value& v, const std::string& key)
{
    if (!std::holds_alternative<std::int64_t>(v))
        throw std::runtime_error("config: key '" + key + "' must be an integer");
    return (std::uint64_t)std::get<std::int64_t>(v);
}

std::vector<double> as_array(const Value& v, const std::string& key)
{
    if (std::holds_alternative<std::vector<double>>(v)) return std::get<std::vector<double>>(v);
    if (std::holds_alternative<double>(v)) return {std::get<double>(v)};
    if (std::holds_alternative<std::int64_t>(v)) return {(double)std::get<std::int64_t>(v)};
    throw std::runtime_error("config: key '" + key + "' must be an array of numbers");
}

Vec3 as_vec3(const Value& v, const std::string& key)
{
    const auto arr = as_array(v, key);
    if (arr.size() != 3)
        throw std::runtime_error("config: key '" + key + "' must have exactly 3 entries");
    return Vec3(arr[0], arr[1], arr[2]);
}

// Applies every known key of one table, then rejects leftovers.
class TableReader {
public:
    TableReader(const Table& t, std::string name) : table_(t), name_(std::move(name)) {}

    template <typename F>
    void key(const std::string& k, F&& apply)
    {
        auto it = table_.find(k);
        if (it == table_.end()) return;
        apply(it->second);
        seen_.insert(k);
    }

    void finish() const
    {
        for (const auto& [k, v] : table_)
            if (!seen_.count(k))
                throw std::runtime_error("config: unknown key '" + k + "' in [" + name_ + "]");
    }

private:
    const Table& table_;
    std::string name_;
    std::set<std::string> seen_;
};

} // namespace

SystemConfig load_config(const std::string& path)
{
    const toml::Document doc = toml::parse_file(path);
    static const std::set<std::string> known_tables = {"system", "bands", "roi", "optimizer", "rng"};
    for (const auto& [name, _] : doc)
        if (!known_tables.count(name))
            throw std::runtime_error("config: unknown table [" + name + "]");

    SystemConfig cfg;
    if (auto it = doc.find("system"); it != doc.end()) {
        TableReader r(it->second, "system");
        r.key("n_bands", [&](const Value& v) { cfg.n_bands = as_int(v, "n_bands"); });
        r.key("n_subbands", [&](const Value& v) { cfg.n_subbands = as_int(v, "n_subbands"); });
        r.key("n_frames", [&](const Value& v) { cfg.n_frames = as_int(v, "n_frames"); });
        r.key("n_feeds", [&](const Value& v) { cfg.n_feeds = as_int(v, "n_feeds"); });
        r.key("n_elements", [&](const Value& v) { cfg.n_elements = as_int(v, "n_elements"); });
        r.key("element_spacing_factor",
              [&](const Value& v) { cfg.element_spacing_factor = as_double(v, "element_spacing_factor"); });
        r.key("refractive_index",
              [&](const Value& v) { cfg.refractive_index = as_double(v, "refractive_index"); });
        r.key("gain_element", [&](const Value& v) { cfg.gain_element = as_double(v, "gain_element"); });
        r.key("gain_user", [&](const Value& v) { cfg.gain_user = as_double(v, "gain_user"); });
        r.key("subband_width_hz",
              [&](const Value& v) { cfg.subband_width_hz = as_double(v, "subband_width_hz"); });
        r.key("noise_psd", [&](const Value& v) { cfg.noise_psd = as_double(v, "noise_psd"); });
        r.key("max_power", [&](const Value& v) { cfg.max_power = as_double(v, "max_power"); });
        r.key("rms_delay_spread_s",
              [&](const Value& v) { cfg.rms_delay_spread_s = as_array(v, "rms_delay_spread_s"); });
        r.key("max_speed_mps", [&](const Value& v) { cfg.max_speed_mps = as_double(v, "max_speed_mps"); });
        r.key("frame_duration_s",
              [&](const Value& v) { cfg.frame_duration_s = as_double(v, "frame_duration_s"); });
        r.key("angular_spread_deg",
              [&](const Value& v) { cfg.angular_spread_deg = as_double(v, "angular_spread_deg"); });
        r.key("pap_quadrature_nodes",
              [&](const Value& v) { cfg.pap_quadrature_nodes = as_int(v, "pap_quadrature_nodes"); });
        r.finish();
    }
    if (auto it = doc.find("bands"); it != doc.end()) {
        TableReader r(it->second, "bands");
        r.key("band_base_hz", [&](const Value& v) { cfg.band_base_hz = as_double(v, "band_base_hz"); });
        r.key("band_step_hz", [&](const Value& v) { cfg.band_step_hz = as_double(v, "band_step_hz"); });
        r.finish();
    }
    if (auto it = doc.find("roi"); it != doc.end()) {
        TableReader r(it->second, "roi");
        r.key("center", [&](const Value& v) { cfg.roi.center = as_vec3(v, "center"); });
        r.key("dims", [&](const Value& v) { cfg.roi.dims = as_vec3(v, "dims"); });
        r.finish();
    }
    if (auto it = doc.find("optimizer"); it != doc.end()) {
        TableReader r(it->second, "optimizer");
        r.key("n_roi_samples", [&](const Value& v) { cfg.n_roi_samples = as_int(v, "n_roi_samples"); });
        r.key("max_outer_iters",
              [&](const Value& v) { cfg.max_outer_iters = as_int(v, "max_outer_iters"); });
        r.key("updates_per_subproblem",
              [&](const Value& v) { cfg.updates_per_subproblem = as_int(v, "updates_per_subproblem"); });
        r.key("barrier_mu0", [&](const Value& v) { cfg.barrier_mu0 = as_double(v, "barrier_mu0"); });
        r.key("barrier_shrink",
              [&](const Value& v) { cfg.barrier_shrink = as_double(v, "barrier_shrink"); });
        r.key("tr_radius0", [&](const Value& v) { cfg.tr_radius0 = as_double(v, "tr_radius0"); });
        r.key("ga_population", [&](const Value& v) { cfg.ga_population = as_int(v, "ga_population"); });
        r.key("ga_tournament", [&](const Value& v) { cfg.ga_tournament = as_int(v, "ga_tournament"); });
        r.key("ga_crossover_prob",
              [&](const Value& v) { cfg.ga_crossover_prob = as_double(v, "ga_crossover_prob"); });
        r.key("ga_mutation_sigma",
              [&](const Value& v) { cfg.ga_mutation_sigma = as_double(v, "ga_mutation_sigma"); });
        r.key("ga_generations", [&](const Value& v) { cfg.ga_generations = as_int(v, "ga_generations"); });
        r.key("ga_elitism", [&](const Value& v) { cfg.ga_elitism = as_int(v, "ga_elitism"); });
        r.finish();
    }
    if (auto it = doc.find("rng"); it != doc.end()) {
        TableReader r(it->second, "rng");
        r.key("seed", [&](const Value& v) { cfg.rng_seed = as_u64(v, "seed"); });
        r.finish();
    }
    cfg.validate();
    return cfg;
}

std::string config_to_toml(const SystemConfig& cfg)
{
    std::ostringstream out;
    out.precision(17);
    out << "[system]\n";
    out << "n_bands = " << cfg.n_bands << "\n";
    out << "n_subbands = " << cfg.n_subbands << "\n";
    out << "n_frames = " << cfg.n_frames << "\n";
    out << "n_feeds = " << cfg.n_feeds << "\n";
    out << "n_elements = " << cfg.n_elements << "\n";
    out << "element_spacing_factor = " << cfg.element_spacing_factor << "\n";
    out << "refractive_index = " << cfg.refractive_index << "\n";
    out << "gain_element = " << cfg.gain_element << "\n";
    out << "gain_user = " << cfg.gain_user << "\n";
    out << "subband_width_hz = " << cfg.subband_width_hz << "\n";
    out << "noise_psd = " << cfg.noise_psd << "\n";
    out << "max_power = " << cfg.max_power << "\n";
    out << "rms_delay_spread_s = [";
    for (std::size_t i = 0; i < cfg.rms_delay_spread_s.size(); ++i)
        out << (i ? ", " : "") << cfg.rms_delay_spread_s[i];
    out << "]\n";
    out << "max_speed_mps = " << cfg.max_speed_mps << "\n";
    out << "frame_duration_s = " << cfg.frame_duration_s << "\n";
    out << "angular_spread_deg = " << cfg.angular_spread_deg << "\n";
    out << "pap_quadrature_nodes = " << cfg.pap_quadrature_nodes << "\n";
    out << "\n[bands]\n";
    out << "band_base_hz = " << cfg.band_base_hz << "\n";
    out << "band_step_hz = " << cfg.band_step_hz << "\n";
    out << "\n[roi]\n";
    out << "center = [" << cfg.roi.center(0) << ", " << cfg.roi.center(1) << ", "
        << cfg.roi.center(2) << "]\n";
    out << "dims = [" << cfg.roi.dims(0) << ", " << cfg.roi.dims(1) << ", " << cfg.roi.dims(2)
        << "]\n";
    out << "\n[optimizer]\n";
    out << "n_roi_samples = " << cfg.n_roi_samples << "\n";
    out << "max_outer_iters = " << cfg.max_outer_iters << "\n";
    out << "updates_per_subproblem = " << cfg.updates_per_subproblem << "\n";
    out << "barrier_mu0 = " << cfg.barrier_mu0 << "\n";
    out << "barrier_shrink = " << cfg.barrier_shrink << "\n";
    out << "tr_radius0 = " << cfg.tr_radius0 << "\n";
    out << "ga_population = " << cfg.ga_population << "\n";
    out << "ga_tournament = " << cfg.ga_tournament << "\n";
    out << "ga_crossover_prob = " << cfg.ga_crossover_prob << "\n";
    out << "ga_mutation_sigma = " << cfg.ga_mutation_sigma << "\n";
    out << "ga_generations = " << cfg.ga_generations << "\n";
    out << "ga_elitism = " << cfg.ga_elitism << "\n";
    out << "\n[rng]\n";
    out << "seed = " << (std::int64_t)cfg.rng_seed << "\n";
    return out.str();
}

} // namespace holocrlb
