#include "skewalg/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace skewalg {

using nlohmann::json;

PathSpec Model::path(const std::string& name) const {
    auto it = paths.find(name);
    if (it == paths.end()) throw DomainError("model has no path named " + name);
    return PathSpec(algebroid, it->second.base, it->second.fiber);
}

namespace {

class Collector {
public:
    std::vector<std::string> issues;

    void add(const std::string& where, const std::string& what) {
        issues.push_back(where + ": " + what);
    }
    void require(bool ok, const std::string& where, const std::string& what) {
        if (!ok) add(where, what);
    }
    void finish() {
        if (!issues.empty()) throw ModelError(std::move(issues));
    }
};

std::vector<std::string> name_list(const json& doc, const char* key, Collector& out) {
    std::vector<std::string> names;
    if (!doc.contains(key)) return names;
    const json& node = doc.at(key);
    if (!node.is_array()) {
        out.add(std::string("/") + key, "must be an array of names");
        return names;
    }
    for (size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_string()) {
            out.add("/" + std::string(key) + "/" + std::to_string(i), "must be a string");
            continue;
        }
        names.push_back(node[i].get<std::string>());
    }
    return names;
}

Expr parse_checked(const std::string& text, const std::set<std::string>& symbols,
                   const std::string& where, Collector& out) {
    try {
        return parse_expr(text, symbols);
    } catch (const ParseError& err) {
        out.add(where, err.what());
        return Expr::num(0);
    }
}

} // namespace

Model parse_model(const std::string& json_text) {
    Collector out;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& err) {
        throw ModelError({std::string("/: not valid JSON: ") + err.what()});
    }
    if (!doc.is_object()) throw ModelError({"/: top level must be an object"});

    if (doc.contains("version")) {
        if (!doc["version"].is_number_integer() || doc["version"].get<int>() != 1)
            out.add("/version", "only version 1 is supported");
    }

    auto coords = name_list(doc, "base_coords", out);
    auto frame = name_list(doc, "frame", out);
    auto params = name_list(doc, "params", out);
    out.require(!frame.empty(), "/frame", "at least one frame name is required");
    out.finish();

    int m = static_cast<int>(coords.size());
    int n = static_cast<int>(frame.size());
    std::set<std::string> scalar_syms(coords.begin(), coords.end());
    scalar_syms.insert(params.begin(), params.end());

    std::vector<std::tuple<int, int, int, Expr>> c_entries;
    if (doc.contains("c")) {
        out.require(doc["c"].is_array(), "/c", "must be an array");
        out.finish();
        for (size_t idx = 0; idx < doc["c"].size(); ++idx) {
            std::string where = "/c/" + std::to_string(idx);
            const json& entry = doc["c"][idx];
            if (!entry.is_object() || !entry.contains("i") || !entry.contains("j") ||
                !entry.contains("k") || !entry.contains("expr")) {
                out.add(where, "entry needs i, j, k, expr");
                continue;
            }
            if (!entry["i"].is_number_integer() || !entry["j"].is_number_integer() ||
                !entry["k"].is_number_integer() || !entry["expr"].is_string()) {
                out.add(where, "i, j, k must be integers and expr a string");
                continue;
            }
            int i = entry["i"].get<int>(), j = entry["j"].get<int>(), k = entry["k"].get<int>();
            if (i < 1 || j < 1 || k < 1 || i > n || j > n || k > n) {
                out.add(where, "index out of range (indices are 1-based)");
                continue;
            }
            if (i == j) {
                out.add(where, "i == j is not a valid antisymmetric entry");
                continue;
            }
            if (i > j) {
                out.add(where, "store entries with i < j (antisymmetry fixes the rest)");
                continue;
            }
            Expr e = parse_checked(entry["expr"].get<std::string>(), scalar_syms,
                                   where + "/expr", out);
            c_entries.emplace_back(i - 1, j - 1, k - 1, e);
        }
    }
    std::vector<std::tuple<int, int, Expr>> rho_entries;
    if (doc.contains("rho")) {
        out.require(doc["rho"].is_array(), "/rho", "must be an array");
        out.finish();
        for (size_t idx = 0; idx < doc["rho"].size(); ++idx) {
            std::string where = "/rho/" + std::to_string(idx);
            const json& entry = doc["rho"][idx];
            if (!entry.is_object() || !entry.contains("i") || !entry.contains("a") ||
                !entry.contains("expr")) {
                out.add(where, "entry needs i, a, expr");
                continue;
            }
            if (!entry["i"].is_number_integer() || !entry["a"].is_number_integer() ||
                !entry["expr"].is_string()) {
                out.add(where, "i, a must be integers and expr a string");
                continue;
            }
            int i = entry["i"].get<int>(), a = entry["a"].get<int>();
            if (i < 1 || a < 1 || i > n || a > m) {
                out.add(where, "index out of range (indices are 1-based)");
                continue;
            }
            Expr e = parse_checked(entry["expr"].get<std::string>(), scalar_syms,
                                   where + "/expr", out);
            rho_entries.emplace_back(i - 1, a - 1, e);
        }
    }
    out.finish();

    Model model;
    try {
        model.algebroid = make_algebroid(m, n, coords, frame, params, c_entries, rho_entries);
    } catch (const DomainError& err) {
        throw ModelError({std::string("/: ") + err.what()});
    }

    if (doc.contains("metric")) {
        const json& g = doc["metric"];
        out.require(g.is_array() && static_cast<int>(g.size()) == n * n, "/metric",
                    "must be a row-major array of n*n expressions");
        out.finish();
        ExprMatrix entries(n, std::vector<Expr>(n, Expr::num(0)));
        for (int r = 0; r < n; ++r)
            for (int c2 = 0; c2 < n; ++c2) {
                const json& cell = g[r * n + c2];
                std::string where = "/metric/" + std::to_string(r * n + c2);
                if (!cell.is_string()) {
                    out.add(where, "must be an expression string");
                    continue;
                }
                entries[r][c2] = parse_checked(cell.get<std::string>(), scalar_syms, where, out);
            }
        out.finish();
        try {
            model.metric = make_bundle_metric(model.algebroid, entries);
        } catch (const DomainError& err) {
            throw ModelError({std::string("/metric: ") + err.what()});
        }
    }

    if (doc.contains("paths")) {
        const json& paths = doc["paths"];
        out.require(paths.is_object(), "/paths", "must be an object of named paths");
        out.finish();
        std::set<std::string> path_syms(params.begin(), params.end());
        path_syms.insert("t");
        for (auto it = paths.begin(); it != paths.end(); ++it) {
            std::string where = "/paths/" + it.key();
            const json& p = it.value();
            if (!p.is_object() || !p.contains("base") || !p.contains("fiber") ||
                !p["base"].is_array() || !p["fiber"].is_array()) {
                out.add(where, "path needs base and fiber expression arrays");
                continue;
            }
            if (static_cast<int>(p["base"].size()) != m ||
                static_cast<int>(p["fiber"].size()) != n) {
                out.add(where, "base needs m entries and fiber n entries");
                continue;
            }
            NamedPath np;
            bool shaped = true;
            for (const auto& part : {"base", "fiber"})
                for (const auto& cell : p[part])
                    if (!cell.is_string()) {
                        out.add(where, std::string(part) + " entries must be strings");
                        shaped = false;
                    }
            if (!shaped) continue;
            for (size_t i = 0; i < p["base"].size(); ++i)
                np.base.push_back(parse_checked(p["base"][i].get<std::string>(), path_syms,
                                                where + "/base/" + std::to_string(i), out));
            for (size_t i = 0; i < p["fiber"].size(); ++i)
                np.fiber.push_back(parse_checked(p["fiber"][i].get<std::string>(), path_syms,
                                                 where + "/fiber/" + std::to_string(i), out));
            model.paths[it.key()] = std::move(np);
        }
        out.finish();
    }

    if (doc.contains("subalgebroid")) {
        const json& sub = doc["subalgebroid"];
        out.require(sub.is_object() && sub.contains("n0") && sub["n0"].is_number_integer(),
                    "/subalgebroid", "needs integer n0 (and optional m0)");
        out.require(!sub.contains("m0") || sub["m0"].is_number_integer(), "/subalgebroid/m0",
                    "must be an integer");
        out.finish();
        int n0 = sub["n0"].get<int>();
        int m0 = sub.contains("m0") ? sub["m0"].get<int>() : m;
        out.require(n0 >= 1 && n0 <= n, "/subalgebroid/n0", "out of range");
        out.require(m0 >= 0 && m0 <= m, "/subalgebroid/m0", "out of range");
        out.finish();
        model.subalgebroid = {n0, m0};
    }

    return model;
}

Model load_model(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw IoError("cannot open " + filename);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

std::string dump_model(const Model& model) {
    const auto& E = *model.algebroid;
    json doc;
    doc["version"] = 1;
    doc["base_coords"] = E.coords();
    doc["frame"] = E.frame();
    doc["params"] = E.params();
    doc["c"] = json::array();
    for (const auto& [key, value] : E.c_entries()) {
        json entry;
        entry["i"] = std::get<0>(key) + 1;
        entry["j"] = std::get<1>(key) + 1;
        entry["k"] = std::get<2>(key) + 1;
        entry["expr"] = simplify(value).to_string();
        doc["c"].push_back(entry);
    }
    doc["rho"] = json::array();
    for (const auto& [key, value] : E.rho_entries()) {
        json entry;
        entry["i"] = key.first + 1;
        entry["a"] = key.second + 1;
        entry["expr"] = simplify(value).to_string();
        doc["rho"].push_back(entry);
    }
    if (model.metric) {
        json g = json::array();
        for (const auto& row : model.metric->entries())
            for (const auto& cell : row) g.push_back(simplify(cell).to_string());
        doc["metric"] = g;
    }
    if (!model.paths.empty()) {
        json paths = json::object();
        for (const auto& [name, p] : model.paths) {
            json node;
            node["base"] = json::array();
            for (const auto& e : p.base) node["base"].push_back(simplify(e).to_string());
            node["fiber"] = json::array();
            for (const auto& e : p.fiber) node["fiber"].push_back(simplify(e).to_string());
            paths[name] = node;
        }
        doc["paths"] = paths;
    }
    if (model.subalgebroid) {
        doc["subalgebroid"] = {{"n0", model.subalgebroid->first},
                               {"m0", model.subalgebroid->second}};
    }
    return doc.dump(2) + "\n";
}

} // namespace skewalg
