#include "finsler_tools/spec_io.hpp"

#include <filesystem>
#include <fstream>

#include "finsler/error.hpp"

namespace finsler::tools {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("spec: missing field '") + key + "'");
    return *it;
}

std::string as_expression(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) {
        json tmp = v;
        return tmp.dump();
    }
    throw InputError("spec: coefficient '" + key + "' must be a string or a number");
}

}  // namespace

MetricSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw InputError("spec: top level must be an object");
    MetricSpec s;
    try {
        s.schema_version = j.value("schema_version", 1);
        if (s.schema_version != 1)
            throw InputError("spec: unsupported schema_version " + std::to_string(s.schema_version));
        s.family = require(j, "family").get<std::string>();
        s.dimension = require(j, "dimension").get<int>();
        if (auto it = j.find("coefficients"); it != j.end()) {
            if (!it->is_object()) throw InputError("spec: 'coefficients' must be an object");
            for (auto& [k, v] : it->items()) s.coefficients[k] = as_expression(v, k);
        }
        if (auto it = j.find("parameters"); it != j.end()) {
            if (!it->is_object()) throw InputError("spec: 'parameters' must be an object");
            for (auto& [k, v] : it->items()) s.parameters[k] = v.get<double>();
        }
        if (auto it = j.find("measure"); it != j.end() && !it->is_null()) s.measure = as_expression(*it, "measure");
        if (auto it = j.find("curve"); it != j.end() && !it->is_null()) {
            CurveSpec c;
            c.coordinates = require(*it, "coordinates").get<std::vector<std::string>>();
            c.a = it->value("a", 0.0);
            c.b = it->value("b", 1.0);
            s.curve = c;
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("spec: ") + e.what());
    }
    return s;
}

json spec_to_json(const MetricSpec& spec) {
    json j;
    j["schema_version"] = spec.schema_version;
    j["family"] = spec.family;
    j["dimension"] = spec.dimension;
    j["coefficients"] = spec.coefficients;
    j["parameters"] = spec.parameters;
    if (spec.measure) j["measure"] = *spec.measure;
    if (spec.curve)
        j["curve"] = {{"coordinates", spec.curve->coordinates}, {"a", spec.curve->a}, {"b", spec.curve->b}};
    return j;
}

MetricSpec load_spec(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) throw InputError("file not found: " + path);
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return spec_from_json(j);
}

}  // namespace finsler::tools
