#include "flowcat/io.hpp"

#include "flowcat/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace flowcat {

using nlohmann::json;

namespace {

json load(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Line and column come from the byte offset reported by the parser.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
    }
}

[[noreturn]] void fail(const std::string& source, const std::string& path, const std::string& message)
{
    throw ParseError(source + ": " + (path.empty() ? "/" : path) + ": " + message);
}

const json& field(const json& obj, const char* key, const std::string& source, const std::string& path)
{
    if (!obj.is_object()) fail(source, path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(source, path, std::string("missing field \"") + key + "\"");
    return *it;
}

std::string string_at(const json& v, const std::string& source, const std::string& path)
{
    if (!v.is_string()) fail(source, path, "expected a string");
    return v.get<std::string>();
}

std::pair<std::string, std::string> id_pair(const json& v, const std::string& source, const std::string& path)
{
    if (!v.is_array() || v.size() != 2) fail(source, path, "expected [upper, lower]");
    return {string_at(v[0], source, path + "/0"), string_at(v[1], source, path + "/1")};
}

std::size_t cell_ref(const Complex& c, const std::string& id, const std::string& source, const std::string& path)
{
    auto i = c.find(id);
    if (!i) fail(source, path, "unknown cell \"" + id + "\"");
    return *i;
}

Scalar scalar_at(const json& v, const std::string& source, const std::string& path)
{
    if (v.is_number_integer()) return Scalar(mpz_class(v.dump()));
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        try {
            Scalar q(s);
            if (q.get_den() == 0) fail(source, path, "zero denominator");
            q.canonicalize();
            return q;
        } catch (const std::invalid_argument&) {
            fail(source, path, "expected an integer or a \"p/q\" string");
        }
    }
    fail(source, path, "expected an integer or a \"p/q\" string");
}

}  // namespace

Complex parse_complex(const std::string& text, const std::string& source)
{
    json doc = load(text, source);
    const json& cells = field(doc, "cells", source, "");
    if (!cells.is_array()) fail(source, "/cells", "expected an array");
    std::vector<Cell> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string path = "/cells/" + std::to_string(i);
        std::string id = string_at(field(cells[i], "id", source, path), source, path + "/id");
        const json& dim = field(cells[i], "dim", source, path);
        if (!dim.is_number_integer() || dim.get<long>() < 0) fail(source, path + "/dim", "expected a non-negative integer");
        out.push_back({id, dim.get<int>()});
    }
    const json& covers = field(doc, "covers", source, "");
    if (!covers.is_array()) fail(source, "/covers", "expected an array");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < covers.size(); ++i)
        pairs.push_back(id_pair(covers[i], source, "/covers/" + std::to_string(i)));
    try {
        return Complex(std::move(out), pairs);
    } catch (const ParseError& e) {
        throw ParseError(source + ": " + e.what());
    }
}

MatchingInput parse_matching(const Complex& c, const std::string& text, const std::string& source)
{
    json doc = load(text, source);
    MatchingInput in;
    if (!doc.is_object()) fail(source, "", "expected an object");
    if (doc.contains("kind")) {
        std::string kind = string_at(doc["kind"], source, "/kind");
        if (kind == "classical")
            in.matching.kind = MatchingKind::Classical;
        else if (kind == "generalized")
            in.matching.kind = MatchingKind::Generalized;
        else
            fail(source, "/kind", "expected \"classical\" or \"generalized\"");
    }
    if (doc.contains("category")) {
        in.category = string_at(doc["category"], source, "/category");
        if (in.category != "entrance" && in.category != "face-poset")
            fail(source, "/category", "expected \"entrance\" or \"face-poset\"");
    }
    const json& pairs = field(doc, "pairs", source, "");
    if (!pairs.is_array()) fail(source, "/pairs", "expected an array");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::string path = "/pairs/" + std::to_string(i);
        auto [u, l] = id_pair(pairs[i], source, path);
        in.matching.pairs.emplace_back(cell_ref(c, u, source, path + "/0"), cell_ref(c, l, source, path + "/1"));
    }
    return in;
}

Cosheaf parse_cosheaf(const Complex& c, const std::string& text, const std::string& source)
{
    json doc = load(text, source);
    Cosheaf F;
    std::string ring = string_at(field(doc, "ring", source, ""), source, "/ring");
    try {
        F.ring = Ring::parse(ring);
    } catch (const Error& e) {
        fail(source, "/ring", e.what());
    }
    const json& stalks = field(doc, "stalks", source, "");
    if (!stalks.is_object()) fail(source, "/stalks", "expected an object");
    F.stalk.assign(c.size(), 0);
    std::vector<char> seen(c.size(), 0);
    for (const auto& [id, v] : stalks.items()) {
        std::string path = "/stalks/" + id;
        std::size_t x = cell_ref(c, id, source, path);
        if (!v.is_number_integer() || v.get<long>() < 0) fail(source, path, "expected a non-negative integer");
        F.stalk[x] = v.get<std::size_t>();
        seen[x] = 1;
    }
    for (std::size_t x = 0; x < c.size(); ++x)
        if (!seen[x]) fail(source, "/stalks", "missing stalk for cell \"" + c.id(x) + "\"");
    const json& maps = field(doc, "maps", source, "");
    if (!maps.is_object()) fail(source, "/maps", "expected an object");
    for (const auto& [key, v] : maps.items()) {
        std::string path = "/maps/" + key;
        auto sep = key.find('>');
        if (sep == std::string::npos) fail(source, path, "expected a key of the form \"upper>lower\"");
        std::size_t x = cell_ref(c, key.substr(0, sep), source, path);
        std::size_t y = cell_ref(c, key.substr(sep + 1), source, path);
        if (!c.covers_pair(x, y)) fail(source, path, "maps are only given on cover pairs");
        if (!v.is_array()) fail(source, path, "expected a row-major matrix");
        std::size_t rows = v.size();
        std::size_t cols = rows == 0 ? F.stalk[x] : (v[0].is_array() ? v[0].size() : 0);
        DenseMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            std::string rp = path + "/" + std::to_string(r);
            if (!v[r].is_array() || v[r].size() != cols) fail(source, rp, "rows must have equal length");
            for (std::size_t k = 0; k < cols; ++k) m(r, k) = scalar_at(v[r][k], source, rp + "/" + std::to_string(k));
        }
        F.maps[{x, y}] = std::move(m);
    }
    return F;
}

std::string complex_to_json(const Complex& c)
{
    json doc;
    doc["cells"] = json::array();
    for (const auto& cell : c.cells()) doc["cells"].push_back({{"id", cell.id}, {"dim", cell.dim}});
    doc["covers"] = json::array();
    for (const auto& [x, y] : c.covers()) doc["covers"].push_back({c.id(x), c.id(y)});
    return doc.dump();
}

std::string matching_to_json(const Complex& c, const Matching& m)
{
    json doc;
    doc["kind"] = to_string(m.kind);
    doc["pairs"] = json::array();
    for (const auto& [u, l] : m.pairs) doc["pairs"].push_back({c.id(u), c.id(l)});
    return doc.dump();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace flowcat
