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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "racert/benchmarks.hpp"
#include "racert/io.hpp"

using namespace racert;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::path(RACERT_SOURCE_DIR) / "benchmarks";

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// pinned when the golden files were generated; regenerating them must be a
// deliberate change to this table
const std::map<std::string, std::string> kPinned{
    {"ex1.json", "a7ef5f84e6bdd8c0"},
    {"ex1.probes.json", "3afc1e21387a2741"},
    {"ex2.json", "414ebf347df63f91"},
    {"ex2.probes.json", "6d2c6ae8a503daf3"},
    {"ex3.json", "395d7441b5614994"},
    {"ex3.probes.json", "4357fc4c955b496f"},
    {"ex4.json", "c0ef76163de11fbf"},
    {"ex4.probes.json", "c6126b236d94c413"},
};

Vec unhex(const Json& a)
{
    Vec v;
    for (const Json& s : a) {
        v.push_back(std::strtod(s.get<std::string>().c_str(), nullptr));
    }
    return v;
}

// the closed-form dynamics, written out by hand
using Step = std::function<Vec(const Vec&, const Vec&)>;
const std::map<std::string, Step>& by_hand()
{
    static const std::map<std::string, Step> m{
        {"ex1",
         [](const Vec& x, const Vec& t) {
             return Vec{x[0] + 0.01 * (-0.5 * x[0] - 0.5 * x[1] + 0.5 * x[0] * x[1]),
                        x[1] + 0.01 * (-0.5 * x[1] + 1 + t[0])};
         }},
        {"ex2", [](const Vec& x, const Vec& t) { return Vec{0.5 * x[0] - x[1] * x[0], (-0.5 + t[0]) * x[1] + x[1] * x[0]}; }},
        {"ex3",
         [](const Vec& x, const Vec& t) {
             return Vec{0.6 * x[0] + 0.05 * x[1] + 0.01 * t[0], 0.6 * x[1] + 0.005 * t[1]};
         }},
        {"ex4",
         [](const Vec& x, const Vec& t) {
             const double u = -3 * x[0] - 0.5 * x[1];
             return Vec{x[0] + 0.2 * x[1], x[1] + 0.2 * (std::sin(x[0]) - x[1] + u + t[0])};
         }},
    };
    return m;
}

} // namespace

TEST_CASE("golden files carry the pinned hashes")
{
    const Json manifest = read_json_file(kDir / "MANIFEST.json");
    for (const auto& [file, hash] : kPinned) {
        CAPTURE(file);
        CHECK(fnv1a_hex(slurp(kDir / file)) == hash);
        CHECK(manifest["files"][file].get<std::string>() == hash);
    }
}

TEST_CASE("golden problems load, match the built-ins and re-serialize byte for byte")
{
    for (const auto& name : benchmark_names()) {
        CAPTURE(name);
        const std::string text = slurp(kDir / (name + ".json"));
        const ReachAvoidProblem p = problem_from_json(Json::parse(text));
        const std::string again = problem_to_json(p).dump(2) + "\n";
        CHECK(again == text);
        CHECK(problem_from_json(Json::parse(again)).name == name);
        CHECK(problem_to_json(benchmark_problem(name)).dump() == Json::parse(text).dump());
        CHECK(load_problem((kDir / (name + ".json")).string()).name == name);
    }
}

TEST_CASE("dynamics reproduce the 100 pinned probes exactly")
{
    for (const auto& name : benchmark_names()) {
        CAPTURE(name);
        const ReachAvoidProblem golden = load_problem((kDir / (name + ".json")).string());
        const ReachAvoidProblem builtin = benchmark_problem(name);
        const Json probes = read_json_file(kDir / (name + ".probes.json"));
        REQUIRE(probes["probes"].size() == 100);
        const Step& hand = by_hand().at(name);
        for (const Json& pr : probes["probes"]) {
            const Vec x = unhex(pr["x"]);
            const Vec th = unhex(pr["theta"]);
            const Vec f = unhex(pr["f"]);
            CHECK(golden.system.evaluate(x, th) == f);
            CHECK(builtin.system.evaluate(x, th) == f);
            const Vec h = hand(x, th);
            for (std::size_t i = 0; i < f.size(); ++i) {
                CHECK(std::abs(h[i] - f[i]) <= 1e-14 * (1.0 + std::abs(f[i])));
            }
        }
    }
}

TEST_CASE("benchmark working boxes")
{
    CHECK(benchmark_problem("ex1").working_box.lo == Vec{-1.015, -1.085});
    CHECK(benchmark_problem("ex1").working_box.hi == Vec{1.015, 1.105});
    CHECK(benchmark_problem("ex2").working_box.hi == Vec{5.0, 7.0});
    CHECK(benchmark_problem("ex4").working_box.hi == Vec{1.2, 1.51});
}
