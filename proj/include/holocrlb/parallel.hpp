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

#ifndef HOLOCRLB_PARALLEL_HPP
#define HOLOCRLB_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace holocrlb {

/// Worker count: hardware concurrency, capped by HOLO_CRLB_THREADS if set.
std::size_t thread_budget();

/// Runs fn(i) for i in [0, n). Work is split across threads but callers
/// must make fn(i) write only to per-index slots; reductions stay
/// deterministic by folding those slots in index order afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace holocrlb

#endif
