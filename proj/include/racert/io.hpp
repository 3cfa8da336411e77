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

#ifndef RACERT_IO_HPP
#define RACERT_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "racert/certificate.hpp"
#include "racert/conditions.hpp"
#include "racert/region.hpp"
#include "racert/system.hpp"

namespace racert {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Reads and parses a JSON file; throws ParseError naming the file.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json region_to_json(const Region& region);
Region region_from_json(const Json& j, const std::string& path);

Json problem_to_json(const ReachAvoidProblem& problem);
ReachAvoidProblem problem_from_json(const Json& j);
// Accepts a file path or one of the built-in benchmark names (ex1..ex4).
ReachAvoidProblem load_problem(const std::string& path_or_name);

Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j, const std::string& path);

Json scalars_to_json(const Scalars& s);
Scalars scalars_from_json(const Json& j, const std::string& path);

// Condition document:
//   {condition_id, problem, scalars: {...}, certificates: {role: file | object}}
// Relative paths resolve against the document's directory. Certificates
// given on the command line override the document's.
struct ConditionDocument {
    ConditionId id = ConditionId::BC4;
    std::string problem_ref;
    Scalars scalars;
    CertificateMap certificates;
};

ConditionDocument condition_from_json(const Json& j, const std::filesystem::path& base_dir);
Json condition_to_json(const ConditionDocument& doc, const std::map<Role, std::string>& certificate_files);
ConditionDocument load_condition(const std::filesystem::path& path);

// Stable hash of a canonical byte string (FNV-1a, 64 bit), hex encoded.
std::string fnv1a_hex(const std::string& bytes);

} // namespace racert

#endif
