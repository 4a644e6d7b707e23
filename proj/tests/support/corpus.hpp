#pragma once

#include "jetgeom/geometry/geometry.hpp"

#include <map>
#include <string>
#include <vector>

namespace corpus {

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n = {"flat", "sphere", "conformal", "nonconstant_h", "flat_polar", "mixed"};
    return n;
}

inline std::string path(const std::string& name) { return std::string(JETGEOM_MODELS_DIR) + "/" + name + ".json"; }

inline std::string fixture(const std::string& name) {
    return std::string(JETGEOM_FIXTURES_DIR) + "/" + name + ".json";
}

inline jetgeom::ModelSpec load(const std::string& name) { return jetgeom::load_model_file(path(name)); }

/// Geometry of a corpus model, computed once per process.
inline const jetgeom::Geometry& geometry(const std::string& name) {
    static std::map<std::string, jetgeom::Geometry> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, jetgeom::analyze(load(name))).first;
    return it->second;
}

/// Numeric value of a component at a coordinate vector.
inline double value(const jetgeom::DTensor& t, std::initializer_list<int> index, const std::vector<double>& at) {
    return jetgeom::sym::evaluate(t(index), at);
}

}  // namespace corpus
