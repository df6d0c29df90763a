#include "finsler/spec_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace finsler {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& msg, long offset = -1) {
    throw Error(ErrorCode::SpecSchema, msg, offset);
}

std::string require_string(const json& j, const char* key) {
    if (!j.at(key).is_string()) schema_fail(std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

} // namespace

ManifoldSpec load_spec_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        schema_fail(std::string("malformed JSON: ") + e.what(), static_cast<long>(e.byte));
    }
    if (!j.is_object()) schema_fail("spec must be a JSON object");

    static const std::set<std::string> known = {"dimension", "family", "a", "b", "F", "measure"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) schema_fail("unknown key '" + it.key() + "'");

    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        schema_fail("'dimension' must be an integer");
    int n = j["dimension"].get<int>();
    if (n < 1) schema_fail("'dimension' must be >= 1");

    if (!j.contains("family")) schema_fail("missing 'family'");
    std::string fam = require_string(j, "family");

    std::string measure_src = j.contains("measure") ? require_string(j, "measure") : "1";
    SyntaxTree measure = parse_field(measure_src, n, "measure");

    auto parse_a = [&]() {
        if (!j.contains("a") || !j["a"].is_array() ||
            j["a"].size() != static_cast<std::size_t>(n))
            schema_fail("'a' must be an n-by-n array of expression strings");
        std::vector<SyntaxTree> a;
        a.reserve(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            const json& row = j["a"][static_cast<std::size_t>(i)];
            if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
                schema_fail("'a' must be an n-by-n array of expression strings");
            for (int k = 0; k < n; ++k) {
                const json& cell = row[static_cast<std::size_t>(k)];
                if (!cell.is_string()) schema_fail("'a' entries must be expression strings");
                std::ostringstream field;
                field << "a[" << i << "][" << k << "]";
                a.push_back(parse_field(cell.get<std::string>(), n, field.str()));
            }
        }
        return a;
    };

    if (fam == "riemannian") {
        if (j.contains("b")) schema_fail("'b' is only valid for the randers family");
        if (j.contains("F")) schema_fail("'F' is only valid for the generic family");
        return ManifoldSpec::riemannian(n, parse_a(), std::move(measure));
    }
    if (fam == "randers") {
        if (j.contains("F")) schema_fail("'F' is only valid for the generic family");
        if (!j.contains("b") || !j["b"].is_array() ||
            j["b"].size() != static_cast<std::size_t>(n))
            schema_fail("'b' must be an n-array of expression strings");
        std::vector<SyntaxTree> b;
        for (int i = 0; i < n; ++i) {
            const json& cell = j["b"][static_cast<std::size_t>(i)];
            if (!cell.is_string()) schema_fail("'b' entries must be expression strings");
            std::ostringstream field;
            field << "b[" << i << "]";
            b.push_back(parse_field(cell.get<std::string>(), n, field.str()));
        }
        return ManifoldSpec::randers(n, parse_a(), std::move(b), std::move(measure));
    }
    if (fam == "generic") {
        if (j.contains("a") || j.contains("b"))
            schema_fail("'a'/'b' are only valid for riemannian/randers families");
        if (!j.contains("F")) schema_fail("generic family requires 'F'");
        SyntaxTree f = parse_field(require_string(j, "F"), 2 * n, "F");
        return ManifoldSpec::generic(n, std::move(f), std::move(measure));
    }
    schema_fail("'family' must be one of riemannian | randers | generic");
}

ManifoldSpec load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) schema_fail("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_spec_json(buf.str());
}

} // namespace finsler
