//
// Copyright 2026 The ggdp Authors
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
//

#ifndef GGDP_PARALLEL_H_
#define GGDP_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace ggdp {

// Number of worker threads used by library-level parallel loops. Zero means
// "one per hardware thread". Results never depend on this value: work is
// split into fixed chunks whose outputs are combined in chunk order.
void SetThreadCount(int threads);
int ThreadCount();

// Runs body(i) for i in [0, count) on up to ThreadCount() threads. Exceptions
// thrown by body are rethrown on the calling thread (first one wins).
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ggdp

#endif  // GGDP_PARALLEL_H_
