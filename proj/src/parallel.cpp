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
#include "slq/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace slq
{

int thread_count()
{
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char *env = std::getenv("SLQ_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) {
                n = std::min(n, cap);
            }
        } catch (const std::exception &) {
            // ignore malformed values
        }
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn)
{
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first;
    std::mutex mu;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || stop.load()) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first) {
                    first = std::current_exception();
                }
                stop = true;
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back(work);
    }
    pool.clear();
    if (first) {
        std::rethrow_exception(first);
    }
}

} // namespace slq
