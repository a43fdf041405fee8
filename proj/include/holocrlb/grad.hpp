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

#ifndef HOLOCRLB_GRAD_HPP
#define HOLOCRLB_GRAD_HPP

#include <functional>

#include "holocrlb/fisher.hpp"

namespace holocrlb {

/// d(mean CRLB)/d(configs[i]), one real n_frames x n_elements matrix per band.
struct ConfigGrad {
    std::vector<RMat> per_band;
};

/// d(mean CRLB)/d(combiners[i][j]); entries pack the two real partials as
/// d/dRe + i * d/dIm (equivalently twice the conjugate Wirtinger
/// derivative), which is the convention the finite-difference suite pins.
struct CombinerGrad {
    std::vector<std::vector<CMat>> per_band_sub;
};

/// Partial derivative of the (u,v) Fisher entry w.r.t. every entry of
/// configs[band], as an n_frames x n_elements matrix.
RMat fim_partial_config(const ChannelTables& t, const FisherWorkspace& ws, const FimEval& fe,
                        int band, int u, int v);

/// Holomorphic (d/dz) partial of the (u,v) Fisher entry w.r.t.
/// combiners[band][sub]; the real partials follow as
/// d/dRe = 2 Re(.), d/dIm = -2 Im(.).
CMat fim_partial_combiner(const ChannelTables& t, const FisherWorkspace& ws, const FimEval& fe,
                          int band, int sub, int u, int v);

/// -sum_{u,v} weight(v,u) * blocks[u][v]; the contraction that turns the
/// nine Fisher partials into a CRLB gradient (weight = fim^{-2}).
RMat contract_config_blocks(const std::array<std::array<RMat, 3>, 3>& blocks,
                            const Eigen::Matrix3d& weight);

ConfigGrad grad_avg_crlb_config(const ChannelTables& t, const Beamforming& bf,
                                const std::vector<Vec3>& samples);
CombinerGrad grad_avg_crlb_combiner(const ChannelTables& t, const Beamforming& bf,
                                    const std::vector<Vec3>& samples);

/// Both gradients from one pass over the samples (shared factorizations).
struct GradEval {
    ConfigGrad config;
    CombinerGrad combiner;
};
GradEval grad_avg_crlb(const ChannelTables& t, const FisherWorkspace& ws, const Beamforming& bf,
                       const std::vector<Vec3>& samples, bool want_config, bool want_combiner);

/// Central-difference gradient (f(x+h) - f(x-h)) / 2h per coordinate;
/// throws on non-finite probe values. Test oracle for everything above.
RVec fd_grad(const std::function<double(const RVec&)>& f, const RVec& x, double step);

} // namespace holocrlb

#endif
