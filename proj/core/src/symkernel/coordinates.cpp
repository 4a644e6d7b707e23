#include "jetgeom/symkernel/coordinates.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

namespace jetgeom::sym {
namespace {

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_reserved(std::string_view s) {
    static constexpr std::string_view kReserved[] = {"sin", "cos", "tan", "exp", "log", "sqrt"};
    return std::find(std::begin(kReserved), std::end(kReserved), s) != std::end(kReserved);
}

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

}  // namespace

CoordinateSystem::CoordinateSystem(int p, int n, std::vector<std::string> temporal_names,
                                   std::vector<std::string> spatial_names)
    : p_(p), n_(n) {
    if (p < 1 || n < 1) throw CoordinateError("dimensions must satisfy p >= 1 and n >= 1");
    if (p + n + p * n > kMaxCoordinates) throw CoordinateError("too many coordinates (p + n + p*n > 64)");
    if (temporal_names.empty())
        for (int a = 0; a < p; ++a) temporal_names.push_back("t" + std::to_string(a + 1));
    if (spatial_names.empty())
        for (int i = 0; i < n; ++i) spatial_names.push_back("x" + std::to_string(i + 1));
    if (static_cast<int>(temporal_names.size()) != p) throw CoordinateError("expected p temporal coordinate names");
    if (static_cast<int>(spatial_names.size()) != n) throw CoordinateError("expected n spatial coordinate names");

    names_ = std::move(temporal_names);
    names_.insert(names_.end(), spatial_names.begin(), spatial_names.end());
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < p; ++a) names_.push_back("v" + std::to_string(i + 1) + "_" + std::to_string(a + 1));

    std::set<std::string> seen;
    for (const auto& name : names_) {
        if (!is_identifier(name)) throw CoordinateError("invalid coordinate name '" + name + "'");
        if (is_reserved(name)) throw CoordinateError("coordinate name '" + name + "' clashes with a function name");
        if (!seen.insert(name).second) throw CoordinateError("duplicate coordinate name '" + name + "'");
    }
}

CoordKind CoordinateSystem::kind(int id) const {
    if (id < p_) return CoordKind::Temporal;
    if (id < p_ + n_) return CoordKind::Spatial;
    return CoordKind::Velocity;
}

std::optional<int> CoordinateSystem::find(std::string_view name) const {
    for (std::size_t k = 0; k < names_.size(); ++k)
        if (names_[k] == name) return static_cast<int>(k);
    return std::nullopt;
}

std::uint64_t CoordinateSystem::mask(CoordKind which) const {
    std::uint64_t m = 0;
    for (int id = 0; id < size(); ++id)
        if (kind(id) == which) m |= std::uint64_t{1} << id;
    return m;
}

Point make_point(const CoordinateSystem& coords, const std::vector<std::pair<std::string, double>>& assignment,
                 std::optional<double> velocity_fill) {
    Point pt;
    pt.values.assign(static_cast<std::size_t>(coords.size()), 0.0);
    std::vector<bool> assigned(static_cast<std::size_t>(coords.size()), false);
    for (const auto& [name, value] : assignment) {
        auto id = coords.find(name);
        if (!id) throw CoordinateError("unknown coordinate '" + name + "'");
        if (assigned[static_cast<std::size_t>(*id)]) throw CoordinateError("coordinate '" + name + "' assigned twice");
        if (!std::isfinite(value)) throw CoordinateError("non-finite value for coordinate '" + name + "'");
        assigned[static_cast<std::size_t>(*id)] = true;
        pt[*id] = value;
    }
    for (int id = 0; id < coords.size(); ++id) {
        if (assigned[static_cast<std::size_t>(id)]) continue;
        if (velocity_fill && coords.kind(id) == CoordKind::Velocity) {
            pt[id] = *velocity_fill;
            continue;
        }
        throw CoordinateError("missing coordinate '" + coords.name(id) + "'");
    }
    return pt;
}

std::vector<std::pair<std::string, double>> parse_point_spec(std::string_view spec) {
    std::vector<std::pair<std::string, double>> out;
    while (!spec.empty()) {
        auto comma = spec.find(',');
        std::string_view item = spec.substr(0, comma);
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        auto eq = item.find('=');
        if (eq == std::string_view::npos) throw CoordinateError("expected name=value in '" + std::string(item) + "'");
        std::string name = trim(item.substr(0, eq));
        std::string value = trim(item.substr(eq + 1));
        double v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw CoordinateError("invalid value '" + value + "' for coordinate '" + name + "'");
        out.emplace_back(std::move(name), v);
    }
    return out;
}

}  // namespace jetgeom::sym
