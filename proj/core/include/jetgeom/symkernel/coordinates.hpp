#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetgeom::sym {

enum class CoordKind { Temporal, Spatial, Velocity };

class CoordinateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coordinates (t^a, x^i, x^i_a) of the 1-jet space.
///
/// Every coordinate has a global id. Ids are laid out as
///   [0, p)               temporal t^a
///   [p, p+n)             spatial x^i
///   [p+n, p+n+p*n)       velocities x^i_a, id = p + n + i*p + a
/// Velocity names are always v<i>_<a> with 1-based indices.
class CoordinateSystem {
public:
    static constexpr int kMaxCoordinates = 64;

    CoordinateSystem(int p, int n, std::vector<std::string> temporal_names = {},
                     std::vector<std::string> spatial_names = {});

    int p() const { return p_; }
    int n() const { return n_; }
    int size() const { return static_cast<int>(names_.size()); }

    int temporal(int alpha) const { return alpha; }
    int spatial(int i) const { return p_ + i; }
    int velocity(int i, int alpha) const { return p_ + n_ + i * p_ + alpha; }

    CoordKind kind(int id) const;
    const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
    std::span<const std::string> names() const { return names_; }
    std::optional<int> find(std::string_view name) const;

    /// Bit mask of every temporal, spatial or velocity coordinate id.
    std::uint64_t mask(CoordKind kind) const;

    friend bool operator==(const CoordinateSystem& a, const CoordinateSystem& b) {
        return a.p_ == b.p_ && a.n_ == b.n_ && a.names_ == b.names_;
    }

private:
    int p_;
    int n_;
    std::vector<std::string> names_;
};

/// One real value per coordinate id.
struct Point {
    std::vector<double> values;

    double operator[](int id) const { return values[static_cast<std::size_t>(id)]; }
    double& operator[](int id) { return values[static_cast<std::size_t>(id)]; }
};

/// Builds a point from name/value pairs. Every coordinate must be assigned exactly once,
/// except those covered by `fill` (applied to coordinates missing from `assignment`).
Point make_point(const CoordinateSystem& coords, const std::vector<std::pair<std::string, double>>& assignment,
                 std::optional<double> velocity_fill = std::nullopt);

/// Parses "x1=0.5,t1=1,..." into name/value pairs.
std::vector<std::pair<std::string, double>> parse_point_spec(std::string_view spec);

}  // namespace jetgeom::sym
