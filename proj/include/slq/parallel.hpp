/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SLQ_PARALLEL_HPP
#define SLQ_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace slq
{

/// Worker count: hardware concurrency, capped by SLQ_THREADS when set.
int thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

} // namespace slq

#endif
