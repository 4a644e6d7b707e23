#include "jetgeom/model/model.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace jetgeom {

using json = nlohmann::json;
using sym::CoordinateSystem;
using sym::Expr;

namespace {

const std::set<std::string> kFields = {"name",          "p", "n", "coordinates", "h", "lagrangian", "G", "U", "F",
                                       "sample_points", "einstein_constant", "fixture_corruption"};

int positive_int(const json& doc, const char* field) {
    if (!doc.contains(field)) throw SchemaError(std::string("missing field '") + field + "'");
    const json& v = doc[field];
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 16)
        throw SchemaError(std::string("field '") + field + "' must be an integer between 1 and 16");
    return v.get<int>();
}

std::vector<std::string> names(const json& coords, const char* field) {
    if (!coords.contains(field)) return {};
    const json& v = coords[field];
    if (!v.is_array()) throw SchemaError(std::string("coordinates.") + field + " must be an array of names");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) throw SchemaError(std::string("coordinates.") + field + " must be an array of names");
        out.push_back(e.get<std::string>());
    }
    return out;
}

Expr expression(const json& v, const CoordinateSystem& coords, const std::string& where) {
    std::string text;
    if (v.is_string())
        text = v.get<std::string>();
    else if (v.is_number_integer())
        text = std::to_string(v.get<long long>());
    else
        throw SchemaError(where + ": expected an expression string");
    try {
        return sym::parse_expression(text, coords);
    } catch (const sym::ParseError& e) {
        throw ExpressionError(where + ": " + e.what() + " (at offset " + std::to_string(e.position()) + ")");
    }
}

Rational rational(const json& v, const std::string& where) {
    try {
        if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
        if (v.is_string()) return sym::parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
    throw SchemaError(where + ": expected a rational such as \"3/2\"");
}

std::vector<Expr> matrix(const json& doc, const char* field, std::size_t rows, std::size_t cols,
                         const CoordinateSystem& coords) {
    const json& m = doc[field];
    auto bad = [&] {
        return SchemaError(std::string("field '") + field + "' must be a " + std::to_string(rows) + "x" +
                           std::to_string(cols) + " array of expressions");
    };
    if (!m.is_array() || m.size() != rows) throw bad();
    std::vector<Expr> out;
    for (std::size_t r = 0; r < rows; ++r) {
        if (!m[r].is_array() || m[r].size() != cols) throw bad();
        for (std::size_t c = 0; c < cols; ++c)
            out.push_back(expression(m[r][c], coords,
                                     std::string(field) + "[" + std::to_string(r + 1) + "][" + std::to_string(c + 1) + "]"));
    }
    return out;
}

void require_dependencies(const Expr& e, std::uint64_t allowed, const std::string& where, const char* what) {
    if (sym::canonical(e).dependencies() & ~allowed) throw SchemaError(where + " must depend on " + what + " only");
}

sym::Point sample_point(const json& v, const CoordinateSystem& coords, std::size_t k) {
    std::string where = "sample_points[" + std::to_string(k + 1) + "]";
    if (!v.is_object()) throw SchemaError(where + " must be an object mapping coordinates to numbers");
    std::vector<std::pair<std::string, double>> assignment;
    for (const auto& [name, value] : v.items()) {
        if (!value.is_number()) throw SchemaError(where + "." + name + " must be a number");
        assignment.emplace_back(name, value.get<double>());
    }
    try {
        return sym::make_point(coords, assignment, 0.0);
    } catch (const sym::CoordinateError& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

Eigen::MatrixXd numeric(const DTensor& m, const sym::Point& at) {
    int d = m.shape()[0];
    Eigen::MatrixXd out(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out(r, c) = sym::evaluate(m({r, c}), at.values);
    return out;
}

bool numerically_singular(const Eigen::VectorXd& eigenvalues) {
    double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
    return eigenvalues.cwiseAbs().minCoeff() <= 1e-12 * scale;
}

std::string pair_label(const std::string& name, int a, int i, int b, int j) {
    return name + "[(" + std::to_string(a + 1) + "," + std::to_string(i + 1) + "),(" + std::to_string(b + 1) + "," +
           std::to_string(j + 1) + ")]";
}

RatFunc determinant(const std::vector<RatFunc>& m, int d) {
    if (d == 1) return m[0];
    if (d == 2) return m[0] * m[3] - m[1] * m[2];
    RatFunc det;
    for (int c = 0; c < d; ++c) {
        if (m[static_cast<std::size_t>(c)].is_zero()) continue;
        std::vector<RatFunc> minor;
        for (int r = 1; r < d; ++r)
            for (int cc = 0; cc < d; ++cc)
                if (cc != c) minor.push_back(m[static_cast<std::size_t>(r * d + cc)]);
        RatFunc term = m[static_cast<std::size_t>(c)] * determinant(minor, d - 1);
        det = c % 2 ? det - term : det + term;
    }
    return det;
}

}  // namespace

ModelSpec load_model(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("model is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("model must be a JSON object");
    for (const auto& [key, value] : doc.items())
        if (!kFields.contains(key)) throw SchemaError("unknown field '" + key + "'");

    int p = positive_int(doc, "p");
    int n = positive_int(doc, "n");
    std::vector<std::string> tnames, snames;
    if (doc.contains("coordinates")) {
        const json& c = doc["coordinates"];
        if (!c.is_object()) throw SchemaError("field 'coordinates' must be an object");
        tnames = names(c, "temporal");
        snames = names(c, "spatial");
    }
    std::optional<CoordinateSystem> coords;
    try {
        coords.emplace(p, n, tnames, snames);
    } catch (const sym::CoordinateError& e) {
        throw SchemaError(std::string("coordinates: ") + e.what());
    }

    ModelSpec m{.name = doc.value("name", std::string()),
                .coords = *coords,
                .h = {},
                .metric_source = LagrangianSource{},
                .sample_points = {},
                .einstein_constant = Rational(1),
                .corruption = std::nullopt};
    const auto P = static_cast<std::size_t>(p);
    const auto N = static_cast<std::size_t>(n);
    const std::uint64_t temporal = m.coords.mask(sym::CoordKind::Temporal);
    const std::uint64_t base = temporal | m.coords.mask(sym::CoordKind::Spatial);

    if (!doc.contains("h")) throw SchemaError("missing field 'h'");
    m.h = matrix(doc, "h", P, P, m.coords);
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = 0; b < P; ++b) {
            std::string where = "h[" + std::to_string(a + 1) + "][" + std::to_string(b + 1) + "]";
            require_dependencies(m.h[a * P + b], temporal, where, "temporal coordinates");
            if (b > a && sym::canonical(m.h[a * P + b]) != sym::canonical(m.h[b * P + a]))
                throw SymmetryError("h is not symmetric", where + " != h[" + std::to_string(b + 1) + "][" +
                                                              std::to_string(a + 1) + "]");
        }

    bool has_l = doc.contains("lagrangian");
    bool has_g = doc.contains("G");
    if (has_l == has_g) throw SchemaError("exactly one of 'lagrangian' or 'G' is required");
    if (has_l && (doc.contains("U") || doc.contains("F"))) throw SchemaError("'U' and 'F' go with 'G', not 'lagrangian'");
    if (has_l) {
        m.metric_source = LagrangianSource{expression(doc["lagrangian"], m.coords, "lagrangian")};
    } else {
        TensorSource src;
        src.G = matrix(doc, "G", P * N, P * N, m.coords);
        for (std::size_t r = 0; r < P * N; ++r)
            for (std::size_t c = 0; c < P * N; ++c) {
                std::string where = "G[" + std::to_string(r + 1) + "][" + std::to_string(c + 1) + "]";
                require_dependencies(src.G[r * P * N + c], base, where, "temporal and spatial coordinates");
                if (c > r && sym::canonical(src.G[r * P * N + c]) != sym::canonical(src.G[c * P * N + r])) {
                    int a = static_cast<int>(r / N), i = static_cast<int>(r % N);
                    int b = static_cast<int>(c / N), j = static_cast<int>(c % N);
                    throw SymmetryError("G is not symmetric under (alpha,i) <-> (beta,j)",
                                        pair_label("G", a, i, b, j) + " != " + pair_label("G", b, j, a, i));
                }
            }
        if (doc.contains("U")) {
            src.U = matrix(doc, "U", P, N, m.coords);
            for (std::size_t k = 0; k < src.U.size(); ++k)
                require_dependencies(src.U[k], base, "U", "temporal and spatial coordinates");
        } else {
            src.U.assign(P * N, Expr::constant(0));
        }
        src.F = doc.contains("F") ? expression(doc["F"], m.coords, "F") : Expr::constant(0);
        require_dependencies(src.F, base, "F", "temporal and spatial coordinates");
        m.metric_source = std::move(src);
    }

    if (!doc.contains("sample_points") || !doc["sample_points"].is_array() || doc["sample_points"].empty())
        throw SchemaError("field 'sample_points' must be a non-empty array");
    for (std::size_t k = 0; k < doc["sample_points"].size(); ++k)
        m.sample_points.push_back(sample_point(doc["sample_points"][k], m.coords, k));

    if (doc.contains("einstein_constant")) {
        m.einstein_constant = rational(doc["einstein_constant"], "einstein_constant");
        if (m.einstein_constant == 0) throw SchemaError("einstein_constant must be nonzero");
    }

    if (doc.contains("fixture_corruption")) {
        const json& c = doc["fixture_corruption"];
        if (!c.is_object() || !c.contains("family") || !c["family"].is_string() || !c.contains("index") ||
            !c["index"].is_array() || !c.contains("delta"))
            throw SchemaError("fixture_corruption needs 'family', 'index' (1-based array) and 'delta'");
        Corruption k{c["family"].get<std::string>(), {}, rational(c["delta"], "fixture_corruption.delta")};
        for (const auto& i : c["index"]) {
            if (!i.is_number_integer() || i.get<int>() < 1) throw SchemaError("fixture_corruption.index must be 1-based");
            k.index.push_back(i.get<int>() - 1);
        }
        m.corruption = std::move(k);
    }

    DTensor h = temporal_metric(m);
    for (std::size_t k = 0; k < m.sample_points.size(); ++k) {
        Eigen::MatrixXd hm;
        try {
            hm = numeric(h, m.sample_points[k]);
        } catch (const sym::DomainError& e) {
            throw ModelError("h cannot be evaluated at sample point " + std::to_string(k + 1) + ": " + e.what());
        }
        if (numerically_singular(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hm).eigenvalues()))
            throw SingularMetricError("h is singular at sample point " + std::to_string(k + 1));
    }
    return m;
}

ModelSpec load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file '" + path.string() + "': file not found or unreadable");
    std::stringstream buf;
    buf << in.rdbuf();
    ModelSpec m = load_model(buf.str());
    if (m.name.empty()) m.name = path.stem().string();
    return m;
}

DTensor temporal_metric(const ModelSpec& model) {
    DTensor h("h_alphabeta", model.p(), model.n());
    const int p = model.p();
    h.fill([&](const std::vector<int>& ix) { return sym::canonical(model.h[static_cast<std::size_t>(ix[0] * p + ix[1])]); });
    return h;
}

DTensor hessian_metric(const Expr& lagrangian, const CoordinateSystem& coords) {
    const int p = coords.p(), n = coords.n();
    RatFunc L = sym::canonical(lagrangian);
    std::vector<RatFunc> first(static_cast<std::size_t>(p * n));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < p; ++a)
            first[static_cast<std::size_t>(a * n + i)] = sym::differentiate(L, coords.velocity(i, a));
    const std::uint64_t velocities = coords.mask(sym::CoordKind::Velocity);
    DTensor G("G^(alpha)(beta)_(i)(j)", p, n);
    G.fill([&](const std::vector<int>& ix) {
        int a = ix[0], b = ix[1], i = ix[2], j = ix[3];
        RatFunc c = sym::differentiate(first[static_cast<std::size_t>(a * n + i)], coords.velocity(j, b)) *
                    RatFunc(Rational(1, 2));
        if (c.dependencies() & velocities)
            throw QuadraticityError("the Lagrangian is not quadratic in the velocities: G^(" + std::to_string(a + 1) +
                                    ")(" + std::to_string(b + 1) + ")_(" + std::to_string(i + 1) + ")(" +
                                    std::to_string(j + 1) + ") = " + sym::to_string(c));
        return c;
    });
    return G;
}

DTensor vertical_metric(const ModelSpec& model) {
    if (const auto* l = std::get_if<LagrangianSource>(&model.metric_source))
        return hessian_metric(l->lagrangian, model.coords);
    const auto& src = std::get<TensorSource>(model.metric_source);
    const int n = model.n(), pn = model.p() * model.n();
    DTensor G("G^(alpha)(beta)_(i)(j)", model.p(), n);
    G.fill([&](const std::vector<int>& ix) {
        int r = ix[0] * n + ix[2], c = ix[1] * n + ix[3];
        return sym::canonical(src.G[static_cast<std::size_t>(r * pn + c)]);
    });
    return G;
}

DTensor inverse_metric(const DTensor& m, std::string key) {
    const int d = m.shape()[0];
    std::vector<RatFunc> a(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) a[k] = m.flat(k);
    RatFunc det = determinant(a, d);
    if (det.is_zero()) throw SingularMetricError(m.key() + " has zero determinant");
    DTensor inv(std::move(key), d, d);
    if (d == 1) {
        inv({0, 0}) = RatFunc(1) / det;
        return inv;
    }
    inv.fill([&](const std::vector<int>& ix) {
        // inverse(r, c) = cofactor(c, r) / det
        int r = ix[0], c = ix[1];
        std::vector<RatFunc> minor;
        for (int rr = 0; rr < d; ++rr)
            for (int cc = 0; cc < d; ++cc)
                if (rr != c && cc != r) minor.push_back(a[static_cast<std::size_t>(rr * d + cc)]);
        RatFunc cof = determinant(minor, d - 1);
        if ((r + c) % 2) cof = -cof;
        return cof / det;
    });
    return inv;
}

SpatialMetric spatial_metric(const DTensor& G, const DTensor& h, const CoordinateSystem& coords,
                             std::span<const sym::Point> samples) {
    const int p = coords.p(), n = coords.n();
    DTensor g("g_ij", p, n);
    g.fill([&](const std::vector<int>& ix) {
        RatFunc s;
        for (int mu = 0; mu < p; ++mu)
            for (int nu = 0; nu < p; ++nu) s += h({mu, nu}) * G({mu, nu, ix[0], ix[1]});
        return s / RatFunc(p);
    });
    if (g.is_symbolically_zero()) throw SingularMetricError("g is identically zero");

    SpatialMetric out{g, inverse_metric(g, "g^ij"), {}};

    bool identity = true;
    for (int i = 0; i < n && identity; ++i)
        for (int j = 0; j < n && identity; ++j) {
            RatFunc s;
            for (int m = 0; m < n; ++m) s += g({i, m}) * out.g_inv({m, j});
            identity = s == RatFunc(i == j ? 1 : 0);
        }

    for (std::size_t k = 0; k < samples.size(); ++k) {
        std::string where = "sample point " + std::to_string(k + 1);
        Eigen::MatrixXd gm, gi;
        try {
            gm = numeric(g, samples[k]);
            gi = numeric(out.g_inv, samples[k]);
        } catch (const sym::DomainError& e) {
            throw SingularMetricError("g or its inverse cannot be evaluated at " + where + ": " + e.what());
        }
        Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gm).eigenvalues();
        if (numerically_singular(ev)) throw SingularMetricError("g is singular at " + where);
        if (!identity && ((gm * gi - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8))
            throw ModelError("g * g^-1 differs from the identity at " + where);
        std::vector<int> sig;
        for (int e = 0; e < ev.size(); ++e) sig.push_back(ev[e] > 0 ? 1 : -1);
        if (k == 0)
            out.signature = sig;
        else if (sig != out.signature)
            throw SignatureError("the signature of g changes between sample points 1 and " + std::to_string(k + 1));
    }
    return out;
}

KroneckerMetric kronecker_metric(const SpatialMetric& g, const DTensor& h_inv, const DTensor& G, int dimension) {
    const int p = h_inv.shape()[0], n = g.g.shape()[0];
    DTensor calG("calG^(alpha)(beta)_(i)(j)", p, n);
    calG.fill([&](const std::vector<int>& ix) { return h_inv({ix[0], ix[1]}) * g.g({ix[2], ix[3]}); });
    bool equal = is_zero(difference(calG, G, "calG-G"), dimension).zero;
    return {std::move(calG), equal};
}

}  // namespace jetgeom
