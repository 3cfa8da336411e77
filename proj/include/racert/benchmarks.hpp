/*
 * Copyright 2026 The racert Authors
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

#ifndef RACERT_BENCHMARKS_HPP
#define RACERT_BENCHMARKS_HPP

#include <string>
#include <vector>

#include "racert/system.hpp"

namespace racert {

// The four example problems (ex1..ex4) built in code. The golden JSON files
// under benchmarks/ must load to the same objects.
std::vector<std::string> benchmark_names();
// Also accepts "walk1d", a 1-D random walk used by the oracle cross-checks.
ReachAvoidProblem benchmark_problem(const std::string& name);

} // namespace racert

#endif
