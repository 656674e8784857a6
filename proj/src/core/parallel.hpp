// Copyright 2026 The robustjde Authors.
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

#ifndef RJDE_CORE_PARALLEL_HPP_
#define RJDE_CORE_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <functional>

namespace rjde {

// Worker count used by parallel_for; 0 selects hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls fn(i) for i in [begin, end), split into contiguous chunks across
// workers. Each index is processed exactly once, so results written per index
// do not depend on the worker count. The first exception thrown is rethrown.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace rjde

#endif  // RJDE_CORE_PARALLEL_HPP_
