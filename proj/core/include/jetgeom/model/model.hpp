#pragma once

#include "jetgeom/geometry/dtensor.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace jetgeom {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public ModelError {
public:
    using ModelError::ModelError;
};

/// An expression field failed to parse; the message names the field.
class ExpressionError : public ModelError {
public:
    using ModelError::ModelError;
};

/// A component differs from its mirror; `pair` names both index positions.
class SymmetryError : public ModelError {
public:
    SymmetryError(const std::string& what, std::string pair) : ModelError(what + ": " + pair), pair_(std::move(pair)) {}
    const std::string& pair() const { return pair_; }

private:
    std::string pair_;
};

class SingularMetricError : public ModelError {
public:
    using ModelError::ModelError;
};

class QuadraticityError : public ModelError {
public:
    using ModelError::ModelError;
};

class SignatureError : public ModelError {
public:
    using ModelError::ModelError;
};

struct LagrangianSource {
    sym::Expr lagrangian;
};

/// L = G x x + U x + F given by its coefficients.
struct TensorSource {
    std::vector<sym::Expr> G;  // (p*n) x (p*n), row alpha*n + i, column beta*n + j
    std::vector<sym::Expr> U;  // p x n, row-major
    sym::Expr F;
};

/// Test fixture: add `delta` to one component of a computed family.
struct Corruption {
    std::string family;
    std::vector<int> index;  // 0-based
    Rational delta;
};

struct ModelSpec {
    std::string name;
    sym::CoordinateSystem coords;
    std::vector<sym::Expr> h;  // p x p, row-major
    std::variant<LagrangianSource, TensorSource> metric_source;
    std::vector<sym::Point> sample_points;
    Rational einstein_constant{1};
    std::optional<Corruption> corruption;

    int p() const { return coords.p(); }
    int n() const { return coords.n(); }
};

/// Parses and validates a JSON model document. Schema:
///
///   {
///     "name": "sphere",                                   optional
///     "p": 1, "n": 2,
///     "coordinates": {"temporal": ["t1"], "spatial": ["x1", "x2"]},   optional
///     "h": [["1"]],
///     "lagrangian": "v1_1^2 + sin(x1)^2*v2_1^2",
///       or "G": [[...]] ((p*n)^2 strings), "U": [[...]] (p x n), "F": "..."
///     "sample_points": [{"t1": 0.5, "x1": 1, "x2": 0.3}],  velocities default to 0
///     "einstein_constant": "1",                            optional rational, nonzero
///     "fixture_corruption": {"family": "L^i_jk", "index": [1, 1, 2], "delta": "1"}   optional
///   }
///
/// Expressions may be JSON strings or integers.
ModelSpec load_model(std::string_view document);
ModelSpec load_model_file(const std::filesystem::path& path);

/// h_alphabeta as a tensor.
DTensor temporal_metric(const ModelSpec& model);

/// G^(alpha)(beta)_(i)(j) = 1/2 d^2 L / dx^i_alpha dx^j_beta.
DTensor hessian_metric(const sym::Expr& lagrangian, const sym::CoordinateSystem& coords);

/// The vertical metric of the model: the Hessian of L, or G as given.
DTensor vertical_metric(const ModelSpec& model);

/// Adjugate inverse of a square two-slot tensor; throws SingularMetricError.
DTensor inverse_metric(const DTensor& m, std::string key);

struct SpatialMetric {
    DTensor g;
    DTensor g_inv;
    std::vector<int> signature;  // eigenvalue signs of g, ascending eigenvalues
};

/// g_ij = (1/p) h_munu G^(mu)(nu)_(i)(j), its inverse, and the signature at the sample points.
SpatialMetric spatial_metric(const DTensor& G, const DTensor& h, const sym::CoordinateSystem& coords,
                             std::span<const sym::Point> samples);

struct KroneckerMetric {
    DTensor metric;            // calG^(alpha)(beta)_(i)(j) = h^alphabeta g_ij
    bool equals_vertical;      // calG == G; false is allowed and reported as a warning
};

KroneckerMetric kronecker_metric(const SpatialMetric& g, const DTensor& h_inv, const DTensor& G, int dimension);

}  // namespace jetgeom
