#include "jetgeom/verify/verify.hpp"

#include <algorithm>
#include <stdexcept>

namespace jetgeom {

using sym::CoordinateSystem;
using sym::differentiate;

namespace {

using Ix = std::vector<int>;

RatFunc half(const RatFunc& e) { return e * RatFunc(Rational(1, 2)); }

sym::ZeroTestOptions zero_options(const VerifyOptions& o) { return {o.probes, o.seed, o.zero_tol}; }

CheckRecord zero_check(std::string name, const DTensor& t, const CoordinateSystem& c, const VerifyOptions& o) {
    TensorZeroResult r = is_zero(t, c.size(), zero_options(o));
    return {std::move(name), r.tier, r.max_abs, o.seed, o.zero_tol, r.component, r.witness};
}

CheckRecord equal_check(std::string name, const DTensor& a, const DTensor& b, const CoordinateSystem& c,
                        const VerifyOptions& o) {
    return zero_check(std::move(name), difference(a, b, a.key()), c, o);
}

/// t(ix) + sign * t(ix with slots a, b swapped).
DTensor swapped_sum(const DTensor& t, int a, int b, int sign) {
    DTensor out = t;
    out.fill([&](const Ix& ix) {
        Ix sw = ix;
        std::swap(sw[static_cast<std::size_t>(a)], sw[static_cast<std::size_t>(b)]);
        return sign > 0 ? t.at(ix) + t.at(sw) : t.at(ix) - t.at(sw);
    });
    return out;
}

/// m * m_inv - identity for a (0,2) tensor and its (2,0) inverse.
DTensor inverse_defect(const DTensor& m, const DTensor& m_inv, const CoordinateSystem& c) {
    const int d = m.shape()[0];
    DTensor out(m_inv.slots()[0].index_class == IndexClass::Temporal ? "I^alpha_beta" : "I^i_j", c.p(), c.n());
    out.fill([&](const Ix& ix) {
        RatFunc s(ix[0] == ix[1] ? -1 : 0);
        for (int k = 0; k < d; ++k) s += m_inv({ix[0], k}) * m({k, ix[1]});
        return s;
    });
    return out;
}

std::string lower_labels(const DTensor& T) {
    auto pos = T.key().find('_');
    return pos == std::string::npos ? std::string() : T.key().substr(pos + 1);
}

std::string base_name(const DTensor& T) { return T.key().substr(0, T.key().find_first_of("^_")); }

}  // namespace

// ------------------------------------------------------------ report

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.passed(); });
}

const CheckRecord* VerificationReport::find(std::string_view name) const {
    auto it = std::lower_bound(checks.begin(), checks.end(), name,
                               [](const CheckRecord& r, std::string_view n) { return r.name < n; });
    return it != checks.end() && it->name == name ? &*it : nullptr;
}

std::vector<const CheckRecord*> VerificationReport::failures() const {
    std::vector<const CheckRecord*> out;
    for (const auto& r : checks)
        if (!r.passed()) out.push_back(&r);
    return out;
}

// ------------------------------------------------------------ covariant derivatives

CovariantDerivatives covariant_derivative_02(const DTensor& T, IndexClass cls, const Geometry& geo) {
    const auto& c = geo.coords;
    const int p = c.p(), n = c.n();
    if (T.rank() != 2)
        throw std::invalid_argument("covariant_derivative_02 needs a (0,2) tensor, got " + T.key());
    for (const auto& s : T.slots())
        if (s.variance != Variance::Lower || s.index_class != cls || s.pair >= 0)
            throw std::invalid_argument("index class mismatch for " + T.key());

    const std::string base = base_name(T), labels = lower_labels(T);
    CovariantDerivatives out{DTensor(base + "/_" + labels + "gamma", p, n), DTensor(base + "|_" + labels + "k", p, n),
                             DTensor(base + "|^(gamma)_" + labels + "(k)", p, n)};
    const auto& conn = geo.conn;
    const auto& cc = geo.cartan;
    const int d = cls == IndexClass::Temporal ? p : n;

    out.temporal.fill([&](const Ix& ix) {
        int a = ix[0], b = ix[1], g = ix[2];
        RatFunc s = delta_t(T({a, b}), g, conn, c);
        for (int m = 0; m < d; ++m) {
            if (cls == IndexClass::Temporal) {
                s -= T({m, b}) * cc.H({m, a, g});
                s -= T({a, m}) * cc.H({m, b, g});
            } else {
                s -= T({m, b}) * cc.Gt({m, a, g});
                s -= T({a, m}) * cc.Gt({m, b, g});
            }
        }
        return s;
    });
    out.spatial.fill([&](const Ix& ix) {
        int a = ix[0], b = ix[1], k = ix[2];
        RatFunc s = delta_x(T({a, b}), k, conn, c);
        if (cls == IndexClass::Spatial)
            for (int m = 0; m < n; ++m) {
                s -= T({m, b}) * cc.L({m, a, k});
                s -= T({a, m}) * cc.L({m, b, k});
            }
        return s;
    });
    out.vertical.fill([&](const Ix& ix) {
        int g = ix[0], a = ix[1], b = ix[2], k = ix[3];
        RatFunc s = differentiate(T({a, b}), c.velocity(k, g));
        if (cls == IndexClass::Spatial)
            for (int m = 0; m < n; ++m) {
                s -= T({m, b}) * cc.C({m, g, a, k});
                s -= T({a, m}) * cc.C({m, g, b, k});
            }
        return s;
    });
    return out;
}

std::vector<CheckRecord> metrical_conditions_check(const Geometry& geo, const VerifyOptions& opts) {
    std::vector<CheckRecord> out;
    for (auto [T, cls] : {std::pair{&geo.h, IndexClass::Temporal}, std::pair{&geo.spatial.g, IndexClass::Spatial}}) {
        CovariantDerivatives d = covariant_derivative_02(*T, cls, geo);
        for (const DTensor* t : {&d.temporal, &d.spatial, &d.vertical})
            out.push_back(zero_check("metrical." + t->key(), *t, geo.coords, opts));
    }
    return out;
}

// ------------------------------------------------------------ ledger

VerificationReport theorem_ledger(const Geometry& geo, const VerifyOptions& opts) {
    const auto& c = geo.coords;
    const int p = c.p(), n = c.n();
    VerificationReport rep;
    auto& out = rep.checks;
    auto zero = [&](const std::string& name, const DTensor& t) { out.push_back(zero_check(name, t, c, opts)); };
    auto same = [&](const std::string& name, const DTensor& a, const DTensor& b) {
        out.push_back(equal_check(name, a, b, c, opts));
    };

    const auto& cc = geo.cartan;
    const auto& tor = geo.torsion;
    const auto& cur = geo.curvature;
    const auto& ric = geo.ricci;

    // Connection identities.
    zero("connection.C_zero", cc.C);
    same("connection.L_equals_Gamma", cc.L, geo.Gamma);
    DTensor Gt_partial("G^k_jgamma", p, n);
    Gt_partial.fill([&](const Ix& ix) {
        RatFunc s;
        for (int m = 0; m < n; ++m)
            s += geo.spatial.g_inv({ix[0], m}) * differentiate(geo.spatial.g({m, ix[1]}), c.temporal(ix[2]));
        return half(s);
    });
    same("connection.G_delta_equals_partial", cc.Gt, Gt_partial);

    // Torsion reductions.
    DTensor minus_G("T^m_alphaj", p, n);
    minus_G.fill([&](const Ix& ix) { return -cc.Gt({ix[0], ix[2], ix[1]}); });
    same("torsion.T_equals_minus_G", tor.T, minus_G);
    zero("torsion.P^m(beta)_i(j)_zero", tor.P1);
    zero("torsion.P^(m)(beta)_(mu)i(j)_zero", tor.P2);
    DTensor minus_dG("P^(m)(beta)_(mu)alpha(j)", p, n);
    minus_dG.fill([&](const Ix& ix) { return ix[1] == ix[2] ? -cc.Gt({ix[0], ix[4], ix[3]}) : RatFunc(); });
    same("torsion.P^(m)(beta)_(mu)alpha(j)_equals_minus_G", tor.P3, minus_dG);
    zero("torsion.S_zero", tor.S);

    // Zero curvature and Ricci families.
    zero("curvature.P^l(gamma)_ibeta(k)_zero", cur.Pt);
    zero("curvature.P^l(gamma)_ij(k)_zero", cur.Px);
    zero("curvature.S^l(beta)(gamma)_i(j)(k)_zero", cur.S);
    zero("ricci.P^(alpha)_i(j)_zero", ric.P1);
    zero("ricci.P^(alpha)_(i)j_zero", ric.P2);
    zero("ricci.P^(alpha)_(i)beta_zero", ric.P3);
    zero("ricci.S^(alpha)(beta)_(i)(j)_zero", ric.S);

    zero("em.F_zero", geo.em.F);
    zero("em.f_zero", geo.em.f);

    for (auto& r : metrical_conditions_check(geo, opts)) out.push_back(std::move(r));

    // Index (anti)symmetries.
    zero("antisymmetry.H^alpha_etabetagamma", swapped_sum(cur.H, 2, 3, +1));
    zero("antisymmetry.R^l_ibetagamma", swapped_sum(cur.Rtt, 2, 3, +1));
    zero("antisymmetry.R^l_ijk", swapped_sum(cur.Rxx, 2, 3, +1));
    zero("antisymmetry.R^(m)_(mu)alphabeta", swapped_sum(tor.R1, 2, 3, +1));
    zero("antisymmetry.R^(m)_(mu)ij", swapped_sum(tor.R3, 2, 3, +1));
    zero("antisymmetry.F^(alpha)_(i)j", swapped_sum(geo.em.F, 1, 2, +1));
    zero("antisymmetry.f^(alpha)(beta)_(i)(j)", swapped_sum(geo.em.f, 2, 3, +1));
    zero("symmetry.h_alphabeta", swapped_sum(geo.h, 0, 1, -1));
    zero("symmetry.g_ij", swapped_sum(geo.spatial.g, 0, 1, -1));
    zero("symmetry.H^gamma_alphabeta", swapped_sum(geo.H_christoffel, 1, 2, -1));
    zero("symmetry.Gamma^i_jk", swapped_sum(geo.Gamma, 1, 2, -1));
    zero("symmetry.H_alphabeta", swapped_sum(ric.H, 0, 1, -1));
    zero("symmetry.R_ij", swapped_sum(ric.Rij, 0, 1, -1));

    // Every stored family against its formula applied to the stored inputs.
    auto consistent = [&](const DTensor& stored, const DTensor& recomputed) {
        same("consistency." + stored.key(), stored, recomputed);
    };
    zero("consistency.h^alphabeta", inverse_defect(geo.h, geo.h_inv, c));
    zero("consistency.g^ij", inverse_defect(geo.spatial.g, geo.spatial.g_inv, c));
    DTensor g_avg("g_ij", p, n);
    g_avg.fill([&](const Ix& ix) {
        RatFunc s;
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b) s += geo.h({a, b}) * geo.G({a, b, ix[0], ix[1]});
        return s / RatFunc(p);
    });
    consistent(geo.spatial.g, g_avg);
    consistent(geo.H_christoffel, temporal_christoffel(geo.h, geo.h_inv, c));
    consistent(geo.Gamma, spatial_christoffel(geo.spatial.g, geo.spatial.g_inv, c));
    NonlinearConnection conn = nonlinear_connection(geo.H_christoffel, geo.Gamma, geo.spatial.g, geo.spatial.g_inv, c);
    consistent(geo.conn.M, conn.M);
    consistent(geo.conn.N, conn.N);
    CartanConnection cart = cartan_connection(geo.H_christoffel, geo.Gamma, geo.spatial.g, geo.spatial.g_inv, geo.conn, c);
    consistent(cc.Gt, cart.Gt);
    consistent(cc.L, cart.L);
    consistent(cc.C, cart.C);
    TorsionSet t2 = torsion_set(geo.conn, cc, c);
    for (auto [a, b] : {std::pair{&tor.T, &t2.T}, {&tor.P1, &t2.P1}, {&tor.P2, &t2.P2}, {&tor.P3, &t2.P3},
                        {&tor.R1, &t2.R1}, {&tor.R2, &t2.R2}, {&tor.R3, &t2.R3}, {&tor.S, &t2.S}})
        consistent(*a, *b);
    CurvatureSet k2 = curvature_set(geo.conn, tor, cc, c);
    for (auto [a, b] : {std::pair{&cur.H, &k2.H}, {&cur.Rtt, &k2.Rtt}, {&cur.Rtx, &k2.Rtx}, {&cur.Rxx, &k2.Rxx},
                        {&cur.Pt, &k2.Pt}, {&cur.Px, &k2.Px}, {&cur.S, &k2.S}})
        consistent(*a, *b);
    RicciSet r2 = ricci_and_scalar(geo.h_inv, geo.spatial.g_inv, cur, c);
    for (auto [a, b] : {std::pair{&ric.H, &r2.H}, {&ric.Rit, &r2.Rit}, {&ric.Rij, &r2.Rij}, {&ric.P1, &r2.P1},
                        {&ric.P2, &r2.P2}, {&ric.P3, &r2.P3}, {&ric.S, &r2.S}, {&ric.H_scalar, &r2.H_scalar},
                        {&ric.R_scalar, &r2.R_scalar}, {&ric.Sc, &r2.Sc}})
        consistent(*a, *b);
    EinsteinBlocks e2 = einstein_blocks(geo.h, geo.h_inv, geo.spatial.g, ric, geo.kappa, c);
    for (std::size_t b = 0; b < e2.E.size(); ++b) {
        consistent(geo.einstein.E[b], e2.E[b]);
        consistent(geo.einstein.T[b], e2.T[b]);
    }
    ElectromagneticSet em2 = deflection_and_electromagnetism(geo.h_inv, geo.spatial.g, c);
    for (auto [a, b] : {std::pair{&geo.em.D, &em2.D}, {&geo.em.d, &em2.d}, {&geo.em.F, &em2.F}, {&geo.em.f, &em2.f}})
        consistent(*a, *b);
    consistent(geo.potential.vv, gravitational_potential(geo.h, geo.h_inv, geo.spatial.g, c).vv);

    std::sort(out.begin(), out.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    rep.probes = opts.probes;
    rep.seed = opts.seed;
    rep.zero_tol = opts.zero_tol;
    rep.fd_tol = opts.fd_tol;
    return rep;
}

VerificationReport verify_model(const ModelSpec& model, const VerifyOptions& opts) {
    Geometry geo = build_geometry(model, {model.corruption});
    VerificationReport rep = theorem_ledger(geo, opts);
    for (auto& r : finite_difference_audit(model, geo, opts)) rep.checks.push_back(std::move(r));
    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    for (std::size_t k = 1; k < rep.checks.size(); ++k)
        if (rep.checks[k].name == rep.checks[k - 1].name)
            throw std::logic_error("duplicate verification check " + rep.checks[k].name);
    return rep;
}

}  // namespace jetgeom
