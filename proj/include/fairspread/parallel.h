// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSPREAD_PARALLEL_H_
#define FAIRSPREAD_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace fairspread {

// Process-wide cap on worker threads. 0 restores the default (hardware
// concurrency).
void set_max_threads(int threads);
int max_threads();

// Calls body(chunk) once for every chunk in [0, num_chunks). Chunks are
// handed to at most `threads` workers (0 = max_threads()). Calls made from
// inside a worker run inline, so nested use never oversubscribes. The first
// exception thrown by any chunk is rethrown on the calling thread.
//
// Callers that reduce floating-point values must key partial results by
// chunk index and combine them in chunk order; the chunk decomposition must
// not depend on the thread count.
void parallel_for(std::size_t num_chunks,
                  const std::function<void(std::size_t)>& body,
                  int threads = 0);

}  // namespace fairspread

#endif  // FAIRSPREAD_PARALLEL_H_
