/* Copyright 2026 the outpred authors
 *
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

#include "outpred/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace outpred {

namespace {
std::atomic<int> g_jobs{0};  // 0 = library default
}

void set_jobs(int j) { g_jobs.store(j < 0 ? 0 : j); }

int jobs() {
  int j = g_jobs.load();
  if (j > 0) return j;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace detail {

void parallel_for_impl(std::size_t n, void* ctx, void (*run)(void*, std::size_t)) {
  int workers = jobs();
#ifdef _OPENMP
  if (workers > 1 && n > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      run(ctx, static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)workers;
#endif
  // Serial reference path.
  for (std::size_t i = 0; i < n; ++i) run(ctx, i);
}

}  // namespace detail
}  // namespace outpred
