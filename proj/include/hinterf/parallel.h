// Copyright 2026 The hinterf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HINTERF_PARALLEL_H
#define HINTERF_PARALLEL_H

#include <cstddef>
#include <cstdint>
#include <functional>

namespace hinterf {

/// 0 means the available hardware parallelism (at least 1).
std::size_t resolve_threads(std::size_t requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots so output
/// does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)> &body);

/// SplitMix64 step; used to derive independent per-task seeds from one seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for task `index` under master seed `seed`.
std::uint64_t task_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace hinterf

#endif
