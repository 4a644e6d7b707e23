#include "jetgeom/model/model.hpp"

#include "support/corpus.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace jetgeom;
using sym::Expr;
using sym::parse_expression;

namespace {

std::string doc(const std::string& h, const std::string& source, const std::string& points, int p = 1, int n = 2) {
    return R"({"p": )" + std::to_string(p) + R"(, "n": )" + std::to_string(n) + R"(, "h": )" + h + ", " + source +
           R"(, "sample_points": )" + points + "}";
}

const std::string kPoint = R"([{"t1": 0.5, "x1": 0.5, "x2": 0.5}])";

RatFunc rf(const std::string& s, const sym::CoordinateSystem& c) { return sym::canonical(parse_expression(s, c)); }

}  // namespace

TEST(LoadModel, FlatModel) {
    ModelSpec m = corpus::load("flat");
    EXPECT_EQ(m.p(), 1);
    EXPECT_EQ(m.n(), 2);
    EXPECT_EQ(m.name, "flat");
    ASSERT_TRUE(std::holds_alternative<LagrangianSource>(m.metric_source));
    EXPECT_EQ(sym::to_string(sym::normalize(std::get<LagrangianSource>(m.metric_source).lagrangian)),
              "v1_1^2 + v2_1^2");
    ASSERT_EQ(m.sample_points.size(), 2u);
    EXPECT_EQ(m.sample_points[0][m.coords.velocity(0, 0)], 0.0);
    EXPECT_EQ(m.einstein_constant, 1);
}

TEST(LoadModel, WholeCorpusLoads) {
    for (const auto& name : corpus::names()) EXPECT_NO_THROW(corpus::load(name)) << name;
}

TEST(LoadModel, AsymmetricHNamesPair) {
    try {
        load_model(doc(R"([["t1", "1"], ["0", "1"]])", R"("lagrangian": "v1_1^2")", R"([{"t1": 1, "t2": 1, "x1": 0}])",
                       2, 1));
        FAIL();
    } catch (const SymmetryError& e) {
        EXPECT_EQ(e.pair(), "h[1][2] != h[2][1]");
    }
}

TEST(LoadModel, SingularHAtSamplePoint) {
    EXPECT_THROW(load_model(doc(R"([["t1"]])", R"("lagrangian": "v1_1^2 + v2_1^2")",
                                R"([{"t1": 0, "x1": 0.5, "x2": 0.5}])")),
                 SingularMetricError);
}

TEST(LoadModel, SchemaViolations) {
    const std::string L = R"("lagrangian": "v1_1^2 + v2_1^2")";
    EXPECT_THROW(load_model("{"), SchemaError);
    EXPECT_THROW(load_model("[]"), SchemaError);
    EXPECT_THROW(load_model(R"({"n": 2, "h": [["1"]], "lagrangian": "v1_1^2", "sample_points": [{}]})"), SchemaError);
    EXPECT_THROW(load_model(doc(R"([["1"]])", L + R"(, "G": [["1"]])", kPoint)), SchemaError);
    EXPECT_THROW(load_model(doc(R"([["1"]])", L + R"(, "colour": "red")", kPoint)), SchemaError);
    EXPECT_THROW(load_model(doc(R"([["1", "0"]])", L, kPoint)), SchemaError);
    EXPECT_THROW(load_model(doc(R"([["x1"]])", L, kPoint)), SchemaError);  // h must be temporal
    EXPECT_THROW(load_model(doc(R"([["1"]])", L, "[]")), SchemaError);
    EXPECT_THROW(load_model(doc(R"([["1"]])", L, R"([{"t1": 0.5, "x1": 0.5}])")), SchemaError);  // x2 missing
    EXPECT_THROW(load_model(doc(R"([["1"]])", L + R"(, "einstein_constant": "0")", kPoint)), SchemaError);
    EXPECT_THROW(load_model(doc(R"([["1"]])", R"("G": [["1", "v1_1"], ["v1_1", "1"]])", kPoint)), SchemaError);
}

TEST(LoadModel, ExpressionErrorsNameTheField) {
    try {
        load_model(doc(R"([["1"]])", R"("lagrangian": "v1_1^2 + y")", kPoint));
        FAIL();
    } catch (const ExpressionError& e) {
        EXPECT_NE(std::string(e.what()).find("lagrangian"), std::string::npos);
    }
    try {
        load_model(doc(R"([["1"]])", R"("lagrangian": "0.5*v1_1^2")", kPoint));
        FAIL();
    } catch (const ExpressionError& e) {
        EXPECT_NE(std::string(e.what()).find("rational"), std::string::npos);
    }
}

TEST(LoadModel, AsymmetricGNamesPair) {
    try {
        load_model(doc(R"([["1"]])", R"("G": [["1", "x1"], ["0", "1"]])", kPoint));
        FAIL();
    } catch (const SymmetryError& e) {
        EXPECT_EQ(e.pair(), "G[(1,1),(1,2)] != G[(1,2),(1,1)]");
    }
}

TEST(LoadModel, MissingFile) { EXPECT_THROW(load_model_file("/nonexistent/missing.json"), ModelError); }

TEST(LoadModel, CustomCoordinateNames) {
    ModelSpec m = load_model(R"({"p": 1, "n": 2, "coordinates": {"temporal": ["tau"], "spatial": ["r", "phi"]},
        "h": [["1"]], "lagrangian": "v1_1^2 + r^2*v2_1^2", "sample_points": [{"tau": 0, "r": 1, "phi": 0}]})");
    EXPECT_EQ(m.coords.name(1), "r");
    SpatialMetric g = spatial_metric(vertical_metric(m), temporal_metric(m), m.coords, m.sample_points);
    EXPECT_EQ(g.g({1, 1}), rf("r^2", m.coords));
}

TEST(LoadModel, FixtureCorruption) {
    ModelSpec m = load_model_file(corpus::fixture("sphere_corrupted"));
    ASSERT_TRUE(m.corruption.has_value());
    EXPECT_EQ(m.corruption->family, "L^i_jk");
    EXPECT_EQ(m.corruption->index, (std::vector<int>{0, 0, 1}));
    EXPECT_EQ(m.corruption->delta, 1);
}

// ------------------------------------------------------------ hessian_metric

TEST(HessianMetric, SumOfSquares) {
    sym::CoordinateSystem c(1, 2);
    DTensor G = hessian_metric(parse_expression("v1_1^2 + v2_1^2", c), c);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_EQ(G({0, 0, i, j}), RatFunc(i == j ? 1 : 0));
}

TEST(HessianMetric, DiscardsLinearAndConstantTerms) {
    sym::CoordinateSystem c(1, 2);
    DTensor G = hessian_metric(parse_expression("exp(2*t1)*(v1_1^2 + v2_1^2) + x1*v1_1 + 7", c), c);
    RatFunc e2t = rf("exp(2*t1)", c);
    EXPECT_EQ(G({0, 0, 0, 0}), e2t);
    EXPECT_EQ(G({0, 0, 1, 1}), e2t);
    EXPECT_TRUE(G({0, 0, 0, 1}).is_zero());
    // Oracle: finite difference of dL/dv1_1 in v1_1 at a probe, halved.
    Expr dL = sym::differentiate(parse_expression("exp(2*t1)*(v1_1^2 + v2_1^2) + x1*v1_1 + 7", c), c.velocity(0, 0));
    std::vector<double> at = {0.3, 0.4, 0.5, 0.6, 0.7};
    double fd = oracle::central_difference([&](const oracle::Vec& y) { return sym::eval_numeric(dL, sym::Point{y}); }, at,
                                           c.velocity(0, 0)) / 2;
    EXPECT_NEAR(sym::evaluate(G({0, 0, 0, 0}), at), fd, 1e-9);
}

TEST(HessianMetric, CubicIsNotQuadratic) {
    sym::CoordinateSystem c(1, 2);
    EXPECT_THROW(hessian_metric(parse_expression("v1_1^3", c), c), QuadraticityError);
}

TEST(HessianMetric, SymmetricOnCorpus) {
    for (const auto& name : corpus::names()) {
        ModelSpec m = corpus::load(name);
        DTensor G = vertical_metric(m);
        G.for_each([&](const std::vector<int>& ix, const RatFunc& v) {
            EXPECT_EQ(v, G({ix[1], ix[0], ix[3], ix[2]})) << name;
        });
    }
}

TEST(HessianMetric, RecoversGFromCoefficients) {
    ModelSpec m = load_model_file(corpus::fixture("tensor_nonproduct"));
    const auto& src = std::get<TensorSource>(m.metric_source);
    const int p = m.p(), n = m.n();
    // L = G x x + U x + F
    std::vector<Expr> terms;
    for (int a = 0; a < p; ++a)
        for (int i = 0; i < n; ++i) {
            Expr va = Expr::coordinate(m.coords.velocity(i, a), m.coords.name(m.coords.velocity(i, a)));
            terms.push_back(Expr::product({src.U[static_cast<std::size_t>(a * n + i)], va}));
            for (int b = 0; b < p; ++b)
                for (int j = 0; j < n; ++j) {
                    Expr vb = Expr::coordinate(m.coords.velocity(j, b), m.coords.name(m.coords.velocity(j, b)));
                    terms.push_back(Expr::product({src.G[static_cast<std::size_t>((a * n + i) * p * n + b * n + j)], va, vb}));
                }
        }
    terms.push_back(src.F);
    EXPECT_EQ(hessian_metric(Expr::sum(terms), m.coords), vertical_metric(m));
}

// ------------------------------------------------------------ spatial_metric

TEST(SpatialMetric, IdentityForUnitH) {
    ModelSpec m = corpus::load("flat");
    SpatialMetric g = spatial_metric(vertical_metric(m), temporal_metric(m), m.coords, m.sample_points);
    EXPECT_EQ(g.g({0, 0}), RatFunc(1));
    EXPECT_TRUE(g.g({0, 1}).is_zero());
    EXPECT_EQ(g.signature, (std::vector<int>{1, 1}));
}

TEST(SpatialMetric, AveragesOverTemporalIndices) {
    // p = 2, h = diag(1, 1), G = h^munu delta_ij: g = (1/2)(1 + 1) delta = delta.
    ModelSpec m = load_model(doc(R"([["1", "0"], ["0", "1"]])", R"("G": [["1","0","0","0"],["0","1","0","0"],
        ["0","0","1","0"],["0","0","0","1"]])", R"([{"t1": 0.5, "t2": 0.5, "x1": 0.5, "x2": 0.5}])", 2, 2));
    SpatialMetric g = spatial_metric(vertical_metric(m), temporal_metric(m), m.coords, m.sample_points);
    EXPECT_EQ(g.g({0, 0}), RatFunc(1));
    EXPECT_EQ(g.g({1, 1}), RatFunc(1));
    EXPECT_TRUE(g.g({0, 1}).is_zero());
}

TEST(SpatialMetric, Sphere) {
    ModelSpec m = corpus::load("sphere");
    SpatialMetric g = spatial_metric(vertical_metric(m), temporal_metric(m), m.coords, m.sample_points);
    EXPECT_EQ(g.g({1, 1}), rf("sin(x1)^2", m.coords));
    EXPECT_EQ(g.g_inv({1, 1}), rf("1/sin(x1)^2", m.coords));
}

TEST(SpatialMetric, LeftInverseOfKronecker) {
    // G = h^munu g0_ij contracted back with (1/p) h_munu gives g0.
    sym::CoordinateSystem c(2, 2);
    std::string g0[2][2] = {{"exp(2*t1)", "x1*t2"}, {"x1*t2", "sin(x1)^2 + 2"}};
    std::string hinv[2][2] = {{"1", "0"}, {"0", "t1^(-2)"}};
    std::string G = "[";
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i) {
            G += (a + i ? ",[" : "[");
            for (int b = 0; b < 2; ++b)
                for (int j = 0; j < 2; ++j) G += std::string(b + j ? "," : "") + "\"(" + hinv[a][b] + ")*(" + g0[i][j] + ")\"";
            G += "]";
        }
    G += "]";
    ModelSpec m = load_model(doc(R"([["1", "0"], ["0", "t1^2"]])", "\"G\": " + G,
                                 R"([{"t1": 1, "t2": 0.1, "x1": 0.5, "x2": 0.5}])", 2, 2));
    SpatialMetric g = spatial_metric(vertical_metric(m), temporal_metric(m), m.coords, m.sample_points);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_EQ(g.g({i, j}), rf(g0[i][j], c));
}

TEST(SpatialMetric, InverseIsExactOnCorpus) {
    for (const auto& name : corpus::names()) {
        ModelSpec m = corpus::load(name);
        SpatialMetric g = spatial_metric(vertical_metric(m), temporal_metric(m), m.coords, m.sample_points);
        const int n = m.n();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                RatFunc s;
                for (int k = 0; k < n; ++k) s += g.g({i, k}) * g.g_inv({k, j});
                EXPECT_EQ(s, RatFunc(i == j ? 1 : 0)) << name;
            }
        EXPECT_FALSE(g.g.is_symbolically_zero());
    }
}

TEST(SpatialMetric, SignatureChangeIsRejected) {
    ModelSpec m = load_model(doc(R"([["1"]])", R"("lagrangian": "v1_1^2 + x1*v2_1^2")",
                                 R"([{"t1": 0, "x1": 1, "x2": 0}, {"t1": 0, "x1": -1, "x2": 0}])"));
    EXPECT_THROW(spatial_metric(vertical_metric(m), temporal_metric(m), m.coords, m.sample_points), SignatureError);
}

TEST(SpatialMetric, SingularAtSamplePoint) {
    ModelSpec m = load_model(doc(R"([["1"]])", R"("lagrangian": "v1_1^2 + x1*v2_1^2")",
                                 R"([{"t1": 0, "x1": 0, "x2": 0}])"));
    EXPECT_THROW(spatial_metric(vertical_metric(m), temporal_metric(m), m.coords, m.sample_points),
                 SingularMetricError);
}

TEST(SpatialMetric, IndefiniteSignatureIsRecorded) {
    ModelSpec m = load_model(doc(R"([["1"]])", R"("lagrangian": "v1_1^2 - v2_1^2")", kPoint));
    SpatialMetric g = spatial_metric(vertical_metric(m), temporal_metric(m), m.coords, m.sample_points);
    EXPECT_EQ(g.signature, (std::vector<int>{-1, 1}));
}

// ------------------------------------------------------------ kronecker_metric

TEST(KroneckerMetric, FlatIsEqual) {
    ModelSpec m = corpus::load("flat");
    DTensor h = temporal_metric(m);
    DTensor G = vertical_metric(m);
    SpatialMetric g = spatial_metric(G, h, m.coords, m.sample_points);
    KroneckerMetric k = kronecker_metric(g, inverse_metric(h, "h^alphabeta"), G, m.coords.size());
    EXPECT_TRUE(k.equals_vertical);
    EXPECT_EQ(k.metric({0, 0, 1, 1}), RatFunc(1));
}

TEST(KroneckerMetric, InverseTemporalFactor) {
    ModelSpec m = corpus::load("nonconstant_h");
    DTensor h = temporal_metric(m);
    DTensor G = vertical_metric(m);
    SpatialMetric g = spatial_metric(G, h, m.coords, m.sample_points);
    KroneckerMetric k = kronecker_metric(g, inverse_metric(h, "h^alphabeta"), G, m.coords.size());
    EXPECT_EQ(k.metric({0, 0, 0, 0}), rf("exp(-2*t1)", m.coords));
    EXPECT_TRUE(k.metric({0, 0, 0, 1}).is_zero());
    EXPECT_TRUE(k.equals_vertical);
}

TEST(KroneckerMetric, NonProductGIsFlagged) {
    // G^(1)(1) = 1 and G^(2)(2) = 3 with h = id: no g makes h^ab g equal to G.
    ModelSpec m = load_model_file(corpus::fixture("tensor_nonproduct"));
    DTensor h = temporal_metric(m);
    DTensor G = vertical_metric(m);
    SpatialMetric g = spatial_metric(G, h, m.coords, m.sample_points);
    EXPECT_EQ(g.g({0, 0}), RatFunc(2));
    KroneckerMetric k = kronecker_metric(g, inverse_metric(h, "h^alphabeta"), G, m.coords.size());
    EXPECT_FALSE(k.equals_vertical);
}

TEST(InverseMetric, ThreeByThree) {
    sym::CoordinateSystem c(1, 3);
    DTensor m("g_ij", 1, 3);
    const char* e[3][3] = {{"x1", "1", "0"}, {"1", "x2", "t1"}, {"0", "t1", "2"}};
    m.fill([&](const std::vector<int>& ix) { return rf(e[ix[0]][ix[1]], c); });
    DTensor inv = inverse_metric(m, "g^ij");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            RatFunc s;
            for (int k = 0; k < 3; ++k) s += m({i, k}) * inv({k, j});
            EXPECT_EQ(s, RatFunc(i == j ? 1 : 0));
        }
    DTensor singular("g_ij", 1, 2);
    singular.fill([&](const std::vector<int>&) { return rf("x1", c); });
    EXPECT_THROW(inverse_metric(singular, "g^ij"), SingularMetricError);
}
