#include "jetgeom/verify/verify.hpp"

#include "support/corpus.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace jetgeom;

namespace {

const VerificationReport& ledger(const std::string& name) {
    static std::map<std::string, VerificationReport> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, verify_model(corpus::load(name))).first;
    return it->second;
}

}  // namespace

TEST(CovariantDerivative, MetricsAreParallel) {
    for (const auto& name : corpus::names()) {
        const Geometry& g = corpus::geometry(name);
        for (auto [T, cls] : {std::pair{&g.h, IndexClass::Temporal}, std::pair{&g.spatial.g, IndexClass::Spatial}}) {
            CovariantDerivatives d = covariant_derivative_02(*T, cls, g);
            EXPECT_TRUE(is_zero(d.temporal, g.coords.size()).zero) << name << " " << d.temporal.key();
            EXPECT_TRUE(is_zero(d.spatial, g.coords.size()).zero) << name << " " << d.spatial.key();
            EXPECT_TRUE(d.vertical.is_symbolically_zero()) << name << " " << d.vertical.key();
        }
    }
}

TEST(CovariantDerivative, NonMetricTensorOnFlatModel) {
    const Geometry& g = corpus::geometry("flat");
    DTensor T("T_ij", 1, 2);
    T({0, 0}) = RatFunc::coordinate(g.coords.spatial(0), "x1");
    T({1, 1}) = RatFunc(1);
    CovariantDerivatives d = covariant_derivative_02(T, IndexClass::Spatial, g);
    EXPECT_EQ(d.spatial.key(), "T|_ijk");
    EXPECT_EQ(d.spatial({0, 0, 0}), RatFunc(1));
    // Connection terms vanish on the flat model, so |k is the plain partial derivative.
    auto comp = [](const oracle::Vec& y) { return y[1]; };
    EXPECT_NEAR(oracle::central_difference(comp, {0.5, 0.7, 0.1, 0.2, 0.3}, 1), 1.0, 1e-9);
    d.spatial.for_each([&](const std::vector<int>& ix, const RatFunc& v) {
        if (ix != std::vector<int>{0, 0, 0}) EXPECT_TRUE(v.is_zero());
    });
    EXPECT_TRUE(d.temporal.is_symbolically_zero());
    EXPECT_TRUE(d.vertical.is_symbolically_zero());
}

TEST(CovariantDerivative, RejectsClassMismatch) {
    const Geometry& g = corpus::geometry("flat");
    EXPECT_THROW(covariant_derivative_02(g.h, IndexClass::Spatial, g), std::invalid_argument);
    EXPECT_THROW(covariant_derivative_02(g.spatial.g_inv, IndexClass::Spatial, g), std::invalid_argument);
    EXPECT_THROW(covariant_derivative_02(g.Gamma, IndexClass::Spatial, g), std::invalid_argument);
}

TEST(MetricalConditions, SixSymbolicPasses) {
    for (const auto& name : {"flat", "sphere", "conformal"}) {
        auto checks = metrical_conditions_check(corpus::geometry(name));
        ASSERT_EQ(checks.size(), 6u);
        for (const auto& c : checks) {
            EXPECT_EQ(c.tier, sym::ZeroTier::Symbolic) << name << " " << c.name;
            EXPECT_EQ(c.max_residual, 0.0);
        }
    }
}

TEST(MetricalConditions, ConformalTemporalDerivativeByHand) {
    // g = e^{2t} delta, Gt = delta: 2e^{2t} - e^{2t} - e^{2t} = 0.
    const Geometry& g = corpus::geometry("conformal");
    CovariantDerivatives d = covariant_derivative_02(g.spatial.g, IndexClass::Spatial, g);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_TRUE(d.temporal({i, j, 0}).is_zero());
    RatFunc e2t = sym::canonical(sym::parse_expression("exp(2*t1)", g.coords));
    EXPECT_EQ(delta_t(g.spatial.g({0, 0}), 0, g.conn, g.coords), RatFunc(2) * e2t);
}

TEST(FiniteDifferenceAudit, FlatResidualsAreZero) {
    ModelSpec m = corpus::load("flat");
    for (const auto& r : finite_difference_audit(m, corpus::geometry("flat"))) {
        EXPECT_EQ(r.max_residual, 0.0) << r.name;
        EXPECT_EQ(r.tier, sym::ZeroTier::Numeric);
    }
}

TEST(FiniteDifferenceAudit, SphereChristoffelAtOne) {
    const Geometry& g = corpus::geometry("sphere");
    const double sym = sym::evaluate(g.Gamma({0, 1, 1}), std::vector<double>{0.0, 1.0, 0.7, 0.0, 0.0});
    EXPECT_NEAR(sym, -std::sin(1.0) * std::cos(1.0), 1e-12);
    EXPECT_NEAR(sym, -0.45465, 1e-5);
    auto metric = [](const oracle::Vec& y) -> oracle::Matrix { return {{1, 0}, {0, std::pow(std::sin(y[1]), 2)}}; };
    const double fd = oracle::christoffel(metric, {1, 2}, {0.0, 1.0, 0.7, 0.0, 0.0}, 0, 1, 1);
    EXPECT_LT(std::abs(sym - fd), 1e-6);
}

TEST(FiniteDifferenceAudit, ExponentialTemporalChristoffel) {
    const Geometry& g = corpus::geometry("nonconstant_h");
    auto h = [](const oracle::Vec& y) -> oracle::Matrix { return {{std::exp(2 * y[0])}}; };
    oracle::Vec at = {0.3, 0.5, 0.5, 0.5, 0.5};
    EXPECT_NEAR(oracle::christoffel(h, {0}, at, 0, 0, 0), 1.0, 1e-6);
    EXPECT_EQ(sym::evaluate(g.H_christoffel({0, 0, 0}), at), 1.0);
}

TEST(FiniteDifferenceAudit, CorpusWithinTolerance) {
    for (const auto& name : corpus::names()) {
        auto audit = finite_difference_audit(corpus::load(name), corpus::geometry(name));
        EXPECT_GE(audit.size(), 50u);
        for (const auto& r : audit) {
            EXPECT_LT(r.max_residual, 1e-6) << name << " " << r.name << " at " << r.component;
            EXPECT_TRUE(r.passed()) << name << " " << r.name;
        }
    }
}

TEST(Ledger, CorpusPassesSymbolically) {
    for (const auto& name : corpus::names()) {
        const VerificationReport& rep = ledger(name);
        EXPECT_TRUE(rep.passed()) << name;
        for (const auto& r : rep.checks) {
            if (r.name.starts_with("fd.")) continue;
            EXPECT_EQ(r.tier, sym::ZeroTier::Symbolic) << name << " " << r.name;
        }
    }
}

TEST(Ledger, SortedUniqueAndComplete) {
    const VerificationReport& rep = ledger("flat_polar");
    for (std::size_t k = 1; k < rep.checks.size(); ++k) EXPECT_LT(rep.checks[k - 1].name, rep.checks[k].name);
    for (const char* name : {"connection.C_zero", "connection.L_equals_Gamma", "torsion.S_zero",
                             "curvature.S^l(beta)(gamma)_i(j)(k)_zero", "ricci.P^(alpha)_(i)beta_zero", "em.F_zero",
                             "em.f_zero", "metrical.g|_ijk", "metrical.h/_alphabetagamma",
                             "metrical.g|^(gamma)_ij(k)", "antisymmetry.R^l_ijk", "consistency.L^i_jk",
                             "fd.Gamma^i_jk", "fd.R^l_ijk", "fd.G^(alpha)(beta)_(i)(j)"})
        EXPECT_NE(rep.find(name), nullptr) << name;
    EXPECT_EQ(rep.find("nope"), nullptr);
    EXPECT_EQ(rep.probes, 12);
    EXPECT_EQ(rep.seed, 1u);
}

TEST(Ledger, Deterministic) {
    VerifyOptions o;
    o.seed = 9;
    o.probes = 3;
    VerificationReport a = verify_model(corpus::load("mixed"), o);
    VerificationReport b = verify_model(corpus::load("mixed"), o);
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t k = 0; k < a.checks.size(); ++k) {
        EXPECT_EQ(a.checks[k].name, b.checks[k].name);
        EXPECT_EQ(a.checks[k].max_residual, b.checks[k].max_residual);
    }
}

TEST(NegativeControl, CorruptedFixtureFailsExpectedEntries) {
    VerificationReport rep = verify_model(load_model_file(corpus::fixture("sphere_corrupted")));
    EXPECT_FALSE(rep.passed());
    std::vector<std::string> failed;
    for (const CheckRecord* r : rep.failures()) {
        failed.push_back(r->name);
        EXPECT_TRUE(r->witness.has_value()) << r->name;
    }
    EXPECT_EQ(failed, (std::vector<std::string>{"connection.L_equals_Gamma", "consistency.L^i_jk", "fd.L^i_jk",
                                                "metrical.g|_ijk", "torsion.P^(m)(beta)_(mu)i(j)_zero"}));
}

TEST(NegativeControl, EveryConnectionCoefficientIsCaught) {
    ModelSpec m = corpus::load("flat_polar");
    const Geometry clean = build_geometry(m);
    for (const char* family : {"H^gamma_alphabeta", "Gamma^i_jk", "M^(i)_(alpha)beta", "N^(i)_(alpha)j",
                               "G^k_jgamma", "L^i_jk", "C^i(gamma)_j(k)"}) {
        const DTensor* t = clean.find(family);
        if (t == nullptr && std::string(family) == "Gamma^i_jk") t = &clean.Gamma;
        if (t == nullptr && std::string(family) == "H^gamma_alphabeta") t = &clean.H_christoffel;
        ASSERT_NE(t, nullptr) << family;
        for (std::size_t k = 0; k < t->size(); k += 5) {
            Corruption cor{family, t->index_of(k), Rational(1, 3)};
            Geometry geo = build_geometry(m, {cor});
            VerificationReport rep = theorem_ledger(geo, {});
            auto failed = rep.failures();
            ASSERT_FALSE(failed.empty()) << family << " " << index_label(t->index_of(k));
            EXPECT_TRUE(failed.front()->witness.has_value());
        }
    }
}
