#ifndef SKEWALG_MODEL_IO_HPP
#define SKEWALG_MODEL_IO_HPP

#include <optional>
#include <string>

#include "skewalg/holonomy.hpp"
#include "skewalg/modular.hpp"

namespace skewalg {

/// Schema or expression problems in a model file; `issues` carries one
/// JSON-pointer-style message per offense.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues(std::move(issues)) {}
    std::vector<std::string> issues;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid model";
        for (const auto& s : v) out += "\n  " + s;
        return out;
    }
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct NamedPath {
    std::vector<Expr> base, fiber;
};

/// In-memory image of a model file (version 1).
struct Model {
    AlgebroidPtr algebroid;
    std::optional<BundleMetric> metric;
    std::map<std::string, NamedPath> paths;
    std::optional<std::pair<int, int>> subalgebroid; // (n0, m0), 0-based counts

    PathSpec path(const std::string& name) const;
};

/// Parse and validate a model document. Indices in the file are 1-based.
Model parse_model(const std::string& json_text);

/// Load from disk (IoError on filesystem problems).
Model load_model(const std::string& filename);

/// Canonical re-serialization; load(dump(m)) is structurally equal to m.
std::string dump_model(const Model& model);

} // namespace skewalg

#endif
