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

// Regenerates the golden benchmark files:
//   <dir>/exN.json          problem definitions
//   <dir>/exN.probes.json   100 pinned (x, theta) -> f(x, theta) probes, hex floats
//   <dir>/MANIFEST.json     FNV-1a hashes of the above

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "racert/benchmarks.hpp"
#include "racert/io.hpp"
#include "racert/rng.hpp"

namespace fs = std::filesystem;
using namespace racert;

namespace {

std::string hexf(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

Json hex_vec(const Vec& v)
{
    Json a = Json::array();
    for (double x : v) {
        a.push_back(hexf(x));
    }
    return a;
}

} // namespace

int main(int argc, char** argv)
{
    const fs::path dir = argc > 1 ? argv[1] : "benchmarks";
    fs::create_directories(dir);
    Json manifest{{"schema_version", kSchemaVersion}, {"files", Json::object()}};
    std::uint64_t index = 0;
    for (const auto& name : benchmark_names()) {
        const ReachAvoidProblem prob = benchmark_problem(name);
        const std::string text = problem_to_json(prob).dump(2) + "\n";
        write_text_file(dir / (name + ".json"), text);
        manifest["files"][name + ".json"] = fnv1a_hex(text);

        const SystemModel& sys = prob.system;
        const Box xb = prob.universe().bounding_box();
        const Box& tb = sys.disturbance().support();
        Rng rng(derive_seed(2026, index++));
        Json probes = Json::array();
        for (int k = 0; k < 100; ++k) {
            Vec x(sys.state_dim());
            Vec th(sys.disturbance_dim());
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] = rng.uniform(xb.lo[i], xb.hi[i]);
            }
            for (std::size_t i = 0; i < th.size(); ++i) {
                th[i] = rng.uniform(tb.lo[i], tb.hi[i]);
            }
            probes.push_back({{"x", hex_vec(x)}, {"theta", hex_vec(th)}, {"f", hex_vec(sys.evaluate(x, th))}});
        }
        const std::string ptext =
            Json{{"schema_version", kSchemaVersion}, {"problem", name}, {"probes", probes}}.dump(1) + "\n";
        write_text_file(dir / (name + ".probes.json"), ptext);
        manifest["files"][name + ".probes.json"] = fnv1a_hex(ptext);
    }
    write_text_file(dir / "MANIFEST.json", manifest.dump(2) + "\n");
    std::cout << manifest.dump(2) << "\n";
    return 0;
}
