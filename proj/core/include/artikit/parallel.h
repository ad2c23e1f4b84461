// core/include/artikit/parallel.h

// Copyright 2026 The artikit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ARTIKIT_PARALLEL_H_
#define ARTIKIT_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace artikit {

/// Worker count from ARTIKIT_THREADS, else the hardware concurrency (>= 1).
unsigned default_thread_count();

/// Runs fn(i) for i in [0, n) on at most `threads` workers (0 = default).
/// Work items must write to disjoint outputs. The first exception thrown by
/// any item is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace artikit

#endif  // ARTIKIT_PARALLEL_H_
