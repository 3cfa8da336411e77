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

#ifndef RACERT_BENCH_HPP
#define RACERT_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "racert/cegis.hpp"

namespace racert {

struct BenchCell {
    std::string example;
    ConditionId condition = ConditionId::BC4;
    std::string templ;
    double p = 0.0;
    std::uint64_t seed = 0;
};

struct BenchRow {
    BenchCell cell;
    std::string scalars;
    // Feasible, Failed, ResourceLimit or Error
    std::string status;
    double wall_time = 0.0;
    std::string detail;
};

// Selector: comma-separated tokens, each a table (table1..table5) or an
// example (ex1..ex4), optionally filtered as token/COND and token@p, e.g.
// "table4/BC4@0.6". Empty selects nothing. Cells are crossed with seeds.
std::vector<BenchCell> bench_suite(const std::string& selector, const std::vector<std::uint64_t>& seeds);

// Runs every cell with jobs workers; failures become rows, never exceptions.
// Rows come back in canonical order.
std::vector<BenchRow> run_bench(const std::vector<BenchCell>& cells, const CegisConfig& base, unsigned jobs = 1);

std::string bench_csv_header();
std::string bench_csv(const std::vector<BenchRow>& rows);
std::string scalars_compact(const Scalars& s);

} // namespace racert

#endif
