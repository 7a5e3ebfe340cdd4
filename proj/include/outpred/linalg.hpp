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
#include <vector>

namespace outpred {

/// Solves A x = b for symmetric positive definite A (row-major n x n) via
/// Cholesky. A is destroyed. Returns false when a pivot drops below tol,
/// i.e. A is not numerically SPD.
bool cholesky_solve(std::vector<double>& A, std::vector<double>& b, std::size_t n,
                    double tol = 1e-12);

}  // namespace outpred
