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

#include "racert/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "racert/benchmarks.hpp"
#include "racert/errors.hpp"

namespace racert {

namespace fs = std::filesystem;

Json read_json_file(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), "cannot open file");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string(), std::string("invalid JSON: ") + e.what());
    }
}

void write_text_file(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

namespace {

const Json& field(const Json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object()) {
        throw ParseError(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(path.empty() ? key : path + "." + key, "missing field");
    }
    return *it;
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

double number(const Json& j, const std::string& path)
{
    if (!j.is_number()) {
        throw ParseError(path, "expected a number");
    }
    return j.get<double>();
}

Vec vec(const Json& j, const std::string& path)
{
    if (!j.is_array()) {
        throw ParseError(path, "expected an array of numbers");
    }
    Vec out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::string text(const Json& j, const std::string& path)
{
    if (!j.is_string()) {
        throw ParseError(path, "expected a string");
    }
    return j.get<std::string>();
}

Box box_from(const Json& j, const std::string& path)
{
    Box b{vec(field(j, "lo", path), join(path, "lo")), vec(field(j, "hi", path), join(path, "hi"))};
    if (b.lo.size() != b.hi.size() || b.lo.empty()) {
        throw ParseError(path, "lo and hi must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < b.dim(); ++i) {
        if (!(b.lo[i] <= b.hi[i])) {
            throw ParseError(path, "lo exceeds hi on axis " + std::to_string(i));
        }
    }
    return b;
}

Json box_to(const Box& b)
{
    return Json{{"lo", b.lo}, {"hi", b.hi}};
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(path, e.what());
    }
}

} // namespace

Json region_to_json(const Region& r)
{
    switch (r.kind()) {
    case Region::Kind::Box: return Json{{"type", "box"}, {"lo", r.box_params().lo}, {"hi", r.box_params().hi}};
    case Region::Kind::Ball: return Json{{"type", "ball"}, {"center", r.center()}, {"radius", r.radius()}};
    case Region::Kind::Ellipsoid: return Json{{"type", "ellipsoid"}, {"center", r.center()}, {"matrix", r.matrix()}};
    case Region::Kind::Union:
    case Region::Kind::Intersection: {
        Json parts = Json::array();
        for (const Region& p : r.parts()) {
            parts.push_back(region_to_json(p));
        }
        return Json{{"type", r.kind() == Region::Kind::Union ? "union" : "intersection"}, {"parts", parts}};
    }
    case Region::Kind::Difference:
        return Json{{"type", "difference"}, {"base", region_to_json(r.parts()[0])},
                    {"minus", region_to_json(r.parts()[1])}};
    }
    return {};
}

Region region_from_json(const Json& j, const std::string& path)
{
    const std::string type = text(field(j, "type", path), join(path, "type"));
    return wrap(path, [&]() -> Region {
        if (type == "box") {
            const Box b = box_from(j, path);
            return Region::box(b);
        }
        if (type == "point") {
            return Region::point(vec(field(j, "x", path), join(path, "x")));
        }
        if (type == "ball") {
            return Region::ball(vec(field(j, "center", path), join(path, "center")),
                                number(field(j, "radius", path), join(path, "radius")));
        }
        if (type == "ellipsoid") {
            const Json& m = field(j, "matrix", path);
            if (!m.is_array()) {
                throw ParseError(join(path, "matrix"), "expected an array of rows");
            }
            std::vector<Vec> rows;
            for (std::size_t i = 0; i < m.size(); ++i) {
                rows.push_back(vec(m[i], join(path, "matrix") + "[" + std::to_string(i) + "]"));
            }
            return Region::ellipsoid(vec(field(j, "center", path), join(path, "center")), rows);
        }
        if (type == "union" || type == "intersection") {
            const Json& ps = field(j, "parts", path);
            if (!ps.is_array() || ps.empty()) {
                throw ParseError(join(path, "parts"), "expected a non-empty array");
            }
            std::vector<Region> parts;
            for (std::size_t i = 0; i < ps.size(); ++i) {
                parts.push_back(region_from_json(ps[i], join(path, "parts") + "[" + std::to_string(i) + "]"));
            }
            return type == "union" ? Region::union_of(parts) : Region::intersection_of(parts);
        }
        if (type == "difference") {
            return Region::difference(region_from_json(field(j, "base", path), join(path, "base")),
                                      region_from_json(field(j, "minus", path), join(path, "minus")));
        }
        if (type == "complement_within") {
            return Region::complement_within(box_from(field(j, "box", path), join(path, "box")),
                                             region_from_json(field(j, "of", path), join(path, "of")));
        }
        throw ParseError(join(path, "type"), "unknown region type '" + type + "'");
    });
}

Json problem_to_json(const ReachAvoidProblem& pb)
{
    const auto& d = pb.system.disturbance();
    Json regions{{"init", region_to_json(pb.init)},
                 {"safe", region_to_json(pb.safe)},
                 {"target", region_to_json(pb.target)}};
    if (pb.invariant) {
        regions["invariant"] = region_to_json(*pb.invariant);
    }
    regions["working_box"] = box_to(pb.working_box);
    return Json{{"schema_version", kSchemaVersion},
                {"name", pb.name},
                {"system", {{"dim", pb.system.state_dim()}, {"dynamics", pb.system.sources()}}},
                {"disturbance",
                 {{"kind", to_string(d.kind())}, {"dim", d.dim()}, {"support", box_to(d.support())}}},
                {"regions", regions},
                {"threshold", pb.threshold}};
}

ReachAvoidProblem problem_from_json(const Json& j)
{
    const Json& sys = field(j, "system", "");
    const Json& dyn = field(sys, "dynamics", "system");
    if (!dyn.is_array() || dyn.empty()) {
        throw ParseError("system.dynamics", "expected a non-empty array of expressions");
    }
    std::vector<std::string> exprs;
    for (std::size_t i = 0; i < dyn.size(); ++i) {
        exprs.push_back(text(dyn[i], "system.dynamics[" + std::to_string(i) + "]"));
    }
    if (sys.contains("dim")) {
        const Json& dim = sys["dim"];
        if (!dim.is_number_integer() || dim.get<long long>() != static_cast<long long>(exprs.size())) {
            throw ParseError("system.dim", "must equal the number of dynamics expressions");
        }
    }
    const Json& dj = field(j, "disturbance", "");
    const DisturbanceKind kind = disturbance_kind_from_string(text(field(dj, "kind", "disturbance"), "disturbance.kind"));
    const Box support = box_from(field(dj, "support", "disturbance"), "disturbance.support");
    DisturbanceDistribution dist =
        wrap("disturbance.support", [&] { return DisturbanceDistribution(kind, support); });
    SystemModel model = SystemModel::parse(exprs, dist);
    const Json& rj = field(j, "regions", "");
    const std::size_t n = exprs.size();
    const auto region = [&](const char* key) {
        Region r = region_from_json(field(rj, key, "regions"), std::string("regions.") + key);
        if (r.dim() != n) {
            throw ParseError(std::string("regions.") + key, "dimension differs from the state dimension");
        }
        return r;
    };
    std::optional<Region> inv;
    if (rj.contains("invariant") && !rj["invariant"].is_null()) {
        inv = region("invariant");
    }
    const Box wb = box_from(field(rj, "working_box", "regions"), "regions.working_box");
    if (wb.dim() != n) {
        throw ParseError("regions.working_box", "dimension differs from the state dimension");
    }
    const double threshold = j.contains("threshold") ? number(j["threshold"], "threshold") : 0.5;
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ParseError("threshold", "must lie in [0, 1]");
    }
    std::string name = j.contains("name") ? text(j["name"], "name") : "problem";
    return ReachAvoidProblem{std::move(name), std::move(model), region("init"), region("safe"), region("target"),
                             threshold, std::move(inv), wb};
}

ReachAvoidProblem load_problem(const std::string& path_or_name)
{
    for (const auto& name : benchmark_names()) {
        if (path_or_name == name && !fs::exists(path_or_name)) {
            return benchmark_problem(name);
        }
    }
    return problem_from_json(read_json_file(path_or_name));
}

Json certificate_to_json(const Certificate& c)
{
    switch (c.kind()) {
    case CertificateKind::Polynomial:
        return Json{{"schema_version", kSchemaVersion}, {"kind", "polynomial"}, {"dim", c.dim()},
                    {"degree", c.degree()}, {"exponents", c.exponents()}, {"parameters", c.parameters()}};
    case CertificateKind::Network:
        return Json{{"schema_version", kSchemaVersion},
                    {"kind", "network"},
                    {"layers", c.layers()},
                    {"activation", "softplus"},
                    {"input_offset", c.input_offset()},
                    {"input_scale", c.input_scale()},
                    {"parameters", c.parameters()}};
    case CertificateKind::Affine:
        return Json{{"schema_version", kSchemaVersion}, {"kind", "affine"}, {"a", c.affine_a()},
                    {"b", c.affine_b()}, {"inner", certificate_to_json(c.inner())}};
    }
    return {};
}

Certificate certificate_from_json(const Json& j, const std::string& path)
{
    const std::string kind = text(field(j, "kind", path), join(path, "kind"));
    return wrap(path, [&]() -> Certificate {
        if (kind == "polynomial") {
            const Vec params = vec(field(j, "parameters", path), join(path, "parameters"));
            if (j.contains("exponents")) {
                const Json& ej = j["exponents"];
                if (!ej.is_array()) {
                    throw ParseError(join(path, "exponents"), "expected an array of exponent vectors");
                }
                std::vector<std::vector<int>> exps;
                for (const Json& e : ej) {
                    if (!e.is_array()) {
                        throw ParseError(join(path, "exponents"), "expected an array of exponent vectors");
                    }
                    exps.push_back(e.get<std::vector<int>>());
                }
                return Certificate::polynomial(std::move(exps), params);
            }
            const Json& dj = field(j, "dim", path);
            const Json& gj = field(j, "degree", path);
            if (!dj.is_number_integer() || !gj.is_number_integer()) {
                throw ParseError(path, "dim and degree must be integers");
            }
            return Certificate::polynomial(dj.get<std::size_t>(), gj.get<int>(), params);
        }
        if (kind == "network") {
            const Json& lj = field(j, "layers", path);
            if (!lj.is_array()) {
                throw ParseError(join(path, "layers"), "expected an array of widths");
            }
            if (j.contains("activation") && j["activation"] != "softplus") {
                throw ParseError(join(path, "activation"), "only softplus is supported");
            }
            const Vec off = j.contains("input_offset") ? vec(j["input_offset"], join(path, "input_offset")) : Vec{};
            const Vec sc = j.contains("input_scale") ? vec(j["input_scale"], join(path, "input_scale")) : Vec{};
            return Certificate::network(lj.get<std::vector<std::size_t>>(),
                                        vec(field(j, "parameters", path), join(path, "parameters")), off, sc);
        }
        if (kind == "affine") {
            return Certificate::affine(number(field(j, "a", path), join(path, "a")),
                                       number(field(j, "b", path), join(path, "b")),
                                       certificate_from_json(field(j, "inner", path), join(path, "inner")));
        }
        throw ParseError(join(path, "kind"), "unknown certificate kind '" + kind + "'");
    });
}

std::string Certificate::to_json() const
{
    return certificate_to_json(*this).dump(2);
}

Certificate Certificate::from_json(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("certificate", std::string("invalid JSON: ") + e.what());
    }
    return certificate_from_json(j, "certificate");
}

Json scalars_to_json(const Scalars& s)
{
    Json j = Json::object();
    if (s.eps) j["eps"] = *s.eps;
    if (s.lambda) j["lambda"] = *s.lambda;
    if (s.gamma) j["gamma"] = *s.gamma;
    if (s.delta) j["delta"] = *s.delta;
    if (s.lambda_prime) j["lambda_prime"] = *s.lambda_prime;
    if (s.p) j["p"] = *s.p;
    if (s.x0) j["x0"] = *s.x0;
    return j;
}

Scalars scalars_from_json(const Json& j, const std::string& path)
{
    if (!j.is_object()) {
        throw ParseError(path, "expected an object");
    }
    Scalars s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = it.key();
        const std::string p = join(path, key);
        if (key == "eps") s.eps = number(*it, p);
        else if (key == "lambda") s.lambda = number(*it, p);
        else if (key == "gamma") s.gamma = number(*it, p);
        else if (key == "delta") s.delta = number(*it, p);
        else if (key == "lambda_prime") s.lambda_prime = number(*it, p);
        else if (key == "p") s.p = number(*it, p);
        else if (key == "x0") s.x0 = vec(*it, p);
        else throw ParseError(p, "unknown scalar");
    }
    return s;
}

ConditionDocument condition_from_json(const Json& j, const fs::path& base_dir)
{
    ConditionDocument doc;
    doc.id = condition_from_string(text(field(j, "condition_id", ""), "condition_id"));
    if (j.contains("problem")) {
        doc.problem_ref = text(j["problem"], "problem");
        if (fs::path(doc.problem_ref).is_relative() && fs::exists(base_dir / doc.problem_ref)) {
            doc.problem_ref = (base_dir / doc.problem_ref).string();
        }
    }
    if (j.contains("scalars")) {
        doc.scalars = scalars_from_json(j["scalars"], "scalars");
    }
    if (j.contains("certificates")) {
        const Json& cj = j["certificates"];
        if (!cj.is_object()) {
            throw ParseError("certificates", "expected an object mapping roles to files");
        }
        for (auto it = cj.begin(); it != cj.end(); ++it) {
            const std::string p = "certificates." + it.key();
            const Role role = wrap(p, [&] { return role_from_string(it.key()); });
            if (it->is_string()) {
                fs::path file = it->get<std::string>();
                if (file.is_relative()) {
                    file = base_dir / file;
                }
                doc.certificates.emplace(role, certificate_from_json(read_json_file(file), p));
            } else {
                doc.certificates.emplace(role, certificate_from_json(*it, p));
            }
        }
    }
    return doc;
}

Json condition_to_json(const ConditionDocument& doc, const std::map<Role, std::string>& certificate_files)
{
    Json certs = Json::object();
    for (const auto& [role, c] : doc.certificates) {
        auto it = certificate_files.find(role);
        certs[to_string(role)] = it != certificate_files.end() ? Json(it->second) : certificate_to_json(c);
    }
    return Json{{"schema_version", kSchemaVersion},
                {"condition_id", to_string(doc.id)},
                {"problem", doc.problem_ref},
                {"scalars", scalars_to_json(doc.scalars)},
                {"certificates", certs}};
}

ConditionDocument load_condition(const fs::path& path)
{
    return condition_from_json(read_json_file(path), path.parent_path());
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace racert
