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

#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace outpred {

/// Worker count used by parallel_for. 1 selects the serial reference path.
void set_jobs(int jobs);
int jobs();

/// Runs body(i) for i in [0, n). With jobs() == 1 (or without OpenMP) this is
/// a plain serial loop; otherwise an OpenMP parallel-for. Tasks must not
/// communicate: each writes only to its own slot of pre-sized output, so the
/// result is identical under any schedule. Exceptions are captured per index
/// and the lowest-index one is rethrown after the loop joins.
template <typename Body>
void parallel_for(std::size_t n, const Body& body);

namespace detail {
void parallel_for_impl(std::size_t n, void* ctx, void (*run)(void*, std::size_t));
}

template <typename Body>
void parallel_for(std::size_t n, const Body& body) {
  struct Ctx {
    const Body* body;
    std::vector<std::exception_ptr> errors;
  } ctx{&body, std::vector<std::exception_ptr>(n)};
  detail::parallel_for_impl(n, &ctx, [](void* p, std::size_t i) {
    auto* c = static_cast<Ctx*>(p);
    try {
      (*c->body)(i);
    } catch (...) {
      c->errors[i] = std::current_exception();
    }
  });
  for (auto& e : ctx.errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace outpred
