// Copyright 2026 The qmask Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace qmask {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work is
/// split into contiguous static blocks; callers write results into
/// per-index slots so output never depends on the thread count.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Thread count from QMASK_THREADS, or 1 when unset or malformed.
int default_thread_count();

}  // namespace qmask
