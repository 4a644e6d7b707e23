#include "jetgeom/geometry/geometry.hpp"

namespace jetgeom {

using sym::CoordinateSystem;
using sym::differentiate;

namespace {

using Ix = std::vector<int>;

RatFunc velocity(const CoordinateSystem& c, int i, int a) {
    int id = c.velocity(i, a);
    return RatFunc::coordinate(id, c.name(id));
}

RatFunc half(const RatFunc& e) { return e * RatFunc(Rational(1, 2)); }

ReductionCheck check(std::string name, const DTensor& t, const CoordinateSystem& c) {
    return {std::move(name), is_zero(t, c.size())};
}

}  // namespace

DTensor temporal_christoffel(const DTensor& h, const DTensor& h_inv, const CoordinateSystem& c) {
    const int p = c.p();
    DTensor H("H^gamma_alphabeta", p, c.n());
    H.fill([&](const Ix& ix) {
        int g = ix[0], a = ix[1], b = ix[2];
        RatFunc s;
        for (int mu = 0; mu < p; ++mu) {
            if (h_inv({g, mu}).is_zero()) continue;
            RatFunc bracket = differentiate(h({mu, a}), c.temporal(b)) + differentiate(h({mu, b}), c.temporal(a)) -
                              differentiate(h({a, b}), c.temporal(mu));
            s += h_inv({g, mu}) * bracket;
        }
        return half(s);
    });
    return H;
}

DTensor spatial_christoffel(const DTensor& g, const DTensor& g_inv, const CoordinateSystem& c) {
    const int n = c.n();
    DTensor Gamma("Gamma^i_jk", c.p(), n);
    Gamma.fill([&](const Ix& ix) {
        int i = ix[0], j = ix[1], k = ix[2];
        RatFunc s;
        for (int r = 0; r < n; ++r) {
            if (g_inv({i, r}).is_zero()) continue;
            RatFunc bracket = differentiate(g({j, r}), c.spatial(k)) + differentiate(g({k, r}), c.spatial(j)) -
                              differentiate(g({j, k}), c.spatial(r));
            s += g_inv({i, r}) * bracket;
        }
        return half(s);
    });
    return Gamma;
}

NonlinearConnection nonlinear_connection(const DTensor& H, const DTensor& Gamma, const DTensor& g,
                                         const DTensor& g_inv, const CoordinateSystem& c) {
    const int p = c.p(), n = c.n();
    NonlinearConnection conn{DTensor("M^(i)_(alpha)beta", p, n), DTensor("N^(i)_(alpha)j", p, n)};
    conn.M.fill([&](const Ix& ix) {
        int i = ix[0], a = ix[1], b = ix[2];
        RatFunc s;
        for (int g2 = 0; g2 < p; ++g2) s -= H({g2, a, b}) * velocity(c, i, g2);
        return s;
    });
    conn.N.fill([&](const Ix& ix) {
        int i = ix[0], a = ix[1], j = ix[2];
        RatFunc s;
        for (int m = 0; m < n; ++m) {
            s += Gamma({i, j, m}) * velocity(c, m, a);
            s += half(g_inv({i, m}) * differentiate(g({j, m}), c.temporal(a)));
        }
        return s;
    });
    return conn;
}

RatFunc delta_t(const RatFunc& e, int alpha, const NonlinearConnection& conn, const CoordinateSystem& c) {
    RatFunc s = differentiate(e, c.temporal(alpha));
    for (int j = 0; j < c.n(); ++j)
        for (int b = 0; b < c.p(); ++b) {
            int v = c.velocity(j, b);
            if (e.depends_on(v)) s -= conn.M({j, b, alpha}) * differentiate(e, v);
        }
    return s;
}

RatFunc delta_x(const RatFunc& e, int i, const NonlinearConnection& conn, const CoordinateSystem& c) {
    RatFunc s = differentiate(e, c.spatial(i));
    for (int j = 0; j < c.n(); ++j)
        for (int b = 0; b < c.p(); ++b) {
            int v = c.velocity(j, b);
            if (e.depends_on(v)) s -= conn.N({j, b, i}) * differentiate(e, v);
        }
    return s;
}

CartanConnection cartan_connection(const DTensor& H, const DTensor& Gamma, const DTensor& g, const DTensor& g_inv,
                                   const NonlinearConnection& conn, const CoordinateSystem& c) {
    const int p = c.p(), n = c.n();
    CartanConnection out{H, DTensor("G^k_jgamma", p, n), DTensor("L^i_jk", p, n), DTensor("C^i(gamma)_j(k)", p, n), {}};

    out.Gt.fill([&](const Ix& ix) {
        int k = ix[0], j = ix[1], gm = ix[2];
        RatFunc s;
        for (int m = 0; m < n; ++m) s += g_inv({k, m}) * delta_t(g({m, j}), gm, conn, c);
        return half(s);
    });

    // delta g_ab / delta x^k, shared by every L component
    std::vector<RatFunc> dg(static_cast<std::size_t>(n * n * n));
    auto dgx = [&](int a, int b, int k) -> RatFunc& { return dg[static_cast<std::size_t>((a * n + b) * n + k)]; };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k) dgx(a, b, k) = delta_x(g({a, b}), k, conn, c);
    out.L.fill([&](const Ix& ix) {
        int i = ix[0], j = ix[1], k = ix[2];
        RatFunc s;
        for (int m = 0; m < n; ++m) s += g_inv({i, m}) * (dgx(j, m, k) + dgx(k, m, j) - dgx(j, k, m));
        return half(s);
    });

    out.C.fill([&](const Ix& ix) {
        int i = ix[0], gm = ix[1], j = ix[2], k = ix[3];
        RatFunc s;
        for (int m = 0; m < n; ++m) {
            RatFunc bracket = differentiate(g({j, m}), c.velocity(k, gm)) + differentiate(g({k, m}), c.velocity(j, gm)) -
                              differentiate(g({j, k}), c.velocity(m, gm));
            s += g_inv({i, m}) * bracket;
        }
        return half(s);
    });

    DTensor Gt_partial("G^k_jgamma", p, n);
    Gt_partial.fill([&](const Ix& ix) {
        RatFunc s;
        for (int m = 0; m < n; ++m) s += g_inv({ix[0], m}) * differentiate(g({m, ix[1]}), c.temporal(ix[2]));
        return half(s);
    });
    out.reductions.push_back(check("cartan.G_delta_equals_partial", difference(out.Gt, Gt_partial, "G-G"), c));
    out.reductions.push_back(check("cartan.L_equals_Gamma", difference(out.L, Gamma, "L-Gamma"), c));
    out.reductions.push_back(check("cartan.C_zero", out.C, c));
    return out;
}

TorsionSet torsion_set(const NonlinearConnection& conn, const CartanConnection& cc, const CoordinateSystem& c) {
    const int p = c.p(), n = c.n();
    TorsionSet t{DTensor("T^m_alphaj", p, n),
                 DTensor("P^m(beta)_i(j)", p, n),
                 DTensor("P^(m)(beta)_(mu)i(j)", p, n),
                 DTensor("P^(m)(beta)_(mu)alpha(j)", p, n),
                 DTensor("R^(m)_(mu)alphabeta", p, n),
                 DTensor("R^(m)_(mu)alphaj", p, n),
                 DTensor("R^(m)_(mu)ij", p, n),
                 DTensor("S^(m)(alpha)(beta)_(mu)(i)(j)", p, n),
                 {}};

    t.T.fill([&](const Ix& ix) { return -cc.Gt({ix[0], ix[2], ix[1]}); });
    t.P1.fill([&](const Ix& ix) { return cc.C({ix[0], ix[1], ix[2], ix[3]}); });
    t.P2.fill([&](const Ix& ix) {
        int m = ix[0], b = ix[1], mu = ix[2], i = ix[3], j = ix[4];
        RatFunc s = differentiate(conn.N({m, mu, i}), c.velocity(j, b));
        if (b == mu) s -= cc.L({m, i, j});
        return s;
    });
    t.P3.fill([&](const Ix& ix) {
        int m = ix[0], b = ix[1], mu = ix[2], a = ix[3], j = ix[4];
        RatFunc s = differentiate(conn.M({m, mu, a}), c.velocity(j, b));
        if (b == mu) s -= cc.Gt({m, j, a});
        if (m == j) s += cc.H({b, mu, a});
        return s;
    });
    t.R1.fill([&](const Ix& ix) {
        int m = ix[0], mu = ix[1], a = ix[2], b = ix[3];
        return delta_t(conn.M({m, mu, a}), b, conn, c) - delta_t(conn.M({m, mu, b}), a, conn, c);
    });
    t.R2.fill([&](const Ix& ix) {
        int m = ix[0], mu = ix[1], a = ix[2], j = ix[3];
        return delta_x(conn.M({m, mu, a}), j, conn, c) - delta_t(conn.N({m, mu, j}), a, conn, c);
    });
    t.R3.fill([&](const Ix& ix) {
        int m = ix[0], mu = ix[1], i = ix[2], j = ix[3];
        return delta_x(conn.N({m, mu, i}), j, conn, c) - delta_x(conn.N({m, mu, j}), i, conn, c);
    });
    t.S.fill([&](const Ix& ix) {
        int m = ix[0], a = ix[1], b = ix[2], mu = ix[3], i = ix[4], j = ix[5];
        RatFunc s;
        if (a == mu) s += cc.C({m, b, i, j});
        if (b == mu) s -= cc.C({m, a, j, i});
        return s;
    });

    DTensor T_plus("T^m_alphaj", p, n);
    T_plus.fill([&](const Ix& ix) { return t.T.at(ix) + cc.Gt({ix[0], ix[2], ix[1]}); });
    DTensor P3_plus("P^(m)(beta)_(mu)alpha(j)", p, n);
    P3_plus.fill([&](const Ix& ix) {
        RatFunc s = t.P3.at(ix);
        if (ix[1] == ix[2]) s += cc.Gt({ix[0], ix[4], ix[3]});
        return s;
    });
    t.reductions.push_back(check("torsion.T_equals_minus_G", T_plus, c));
    t.reductions.push_back(check("torsion.P^m(beta)_i(j)_zero", t.P1, c));
    t.reductions.push_back(check("torsion.P^(m)(beta)_(mu)i(j)_zero", t.P2, c));
    t.reductions.push_back(check("torsion.P^(m)(beta)_(mu)alpha(j)_equals_minus_G", P3_plus, c));
    t.reductions.push_back(check("torsion.S_zero", t.S, c));
    return t;
}

CurvatureSet curvature_set(const NonlinearConnection& conn, const TorsionSet& tor, const CartanConnection& cc,
                           const CoordinateSystem& c) {
    const int p = c.p(), n = c.n();
    CurvatureSet k{DTensor("H^alpha_etabetagamma", p, n), DTensor("R^l_ibetagamma", p, n),
                   DTensor("R^l_ibetak", p, n),           DTensor("R^l_ijk", p, n),
                   DTensor("P^l(gamma)_ibeta(k)", p, n),  DTensor("P^l(gamma)_ij(k)", p, n),
                   DTensor("S^l(beta)(gamma)_i(j)(k)", p, n), {}};
    const DTensor& H = cc.H;
    const DTensor& Gt = cc.Gt;
    const DTensor& L = cc.L;
    const DTensor& C = cc.C;

    k.H.fill([&](const Ix& ix) {
        int a = ix[0], e = ix[1], b = ix[2], g = ix[3];
        RatFunc s = differentiate(H({a, e, b}), c.temporal(g)) - differentiate(H({a, e, g}), c.temporal(b));
        for (int mu = 0; mu < p; ++mu) s += H({mu, e, b}) * H({a, mu, g}) - H({mu, e, g}) * H({a, mu, b});
        return s;
    });
    k.Rtt.fill([&](const Ix& ix) {
        int l = ix[0], i = ix[1], b = ix[2], g = ix[3];
        RatFunc s = differentiate(Gt({l, i, b}), c.temporal(g)) - differentiate(Gt({l, i, g}), c.temporal(b));
        for (int m = 0; m < n; ++m) s += Gt({m, i, b}) * Gt({l, m, g}) - Gt({m, i, g}) * Gt({l, m, b});
        return s;
    });
    k.Rtx.fill([&](const Ix& ix) {
        int l = ix[0], i = ix[1], b = ix[2], kk = ix[3];
        RatFunc s = differentiate(Gt({l, i, b}), c.spatial(kk)) - differentiate(L({l, i, kk}), c.temporal(b));
        for (int m = 0; m < n; ++m) s += Gt({m, i, b}) * L({l, m, kk}) - L({m, i, kk}) * Gt({l, m, b});
        return s;
    });
    k.Rxx.fill([&](const Ix& ix) {
        int l = ix[0], i = ix[1], j = ix[2], kk = ix[3];
        RatFunc s = differentiate(L({l, i, j}), c.spatial(kk)) - differentiate(L({l, i, kk}), c.spatial(j));
        for (int m = 0; m < n; ++m) s += L({m, i, j}) * L({l, m, kk}) - L({m, i, kk}) * L({l, m, j});
        return s;
    });

    // Horizontal covariant derivatives of C^l(gamma)_i(k): temporal slots are corrected by H
    // under "/beta" only, spatial slots by G under "/beta" and by L under "|j".
    auto C_t = [&](int l, int g, int i, int kk, int b) {
        RatFunc s = delta_t(C({l, g, i, kk}), b, conn, c);
        for (int m = 0; m < n; ++m) {
            s += C({m, g, i, kk}) * Gt({l, m, b});
            s -= C({l, g, m, kk}) * Gt({m, i, b});
            s -= C({l, g, i, m}) * Gt({m, kk, b});
        }
        for (int mu = 0; mu < p; ++mu) s += C({l, mu, i, kk}) * H({g, mu, b});
        return s;
    };
    auto C_x = [&](int l, int g, int i, int kk, int j) {
        RatFunc s = delta_x(C({l, g, i, kk}), j, conn, c);
        for (int m = 0; m < n; ++m) {
            s += C({m, g, i, kk}) * L({l, m, j});
            s -= C({l, g, m, kk}) * L({m, i, j});
            s -= C({l, g, i, m}) * L({m, kk, j});
        }
        return s;
    };
    k.Pt.fill([&](const Ix& ix) {
        int l = ix[0], g = ix[1], i = ix[2], b = ix[3], kk = ix[4];
        RatFunc s = differentiate(Gt({l, i, b}), c.velocity(kk, g)) - C_t(l, g, i, kk, b);
        for (int m = 0; m < n; ++m)
            for (int mu = 0; mu < p; ++mu) s += C({l, mu, i, m}) * tor.P3({m, g, mu, b, kk});
        return s;
    });
    k.Px.fill([&](const Ix& ix) {
        int l = ix[0], g = ix[1], i = ix[2], j = ix[3], kk = ix[4];
        RatFunc s = differentiate(L({l, i, j}), c.velocity(kk, g)) - C_x(l, g, i, kk, j);
        for (int m = 0; m < n; ++m)
            for (int mu = 0; mu < p; ++mu) s += C({l, mu, i, m}) * tor.P2({m, g, mu, j, kk});
        return s;
    });
    k.S.fill([&](const Ix& ix) {
        int l = ix[0], b = ix[1], g = ix[2], i = ix[3], j = ix[4], kk = ix[5];
        RatFunc s = differentiate(C({l, b, i, j}), c.velocity(kk, g)) - differentiate(C({l, g, i, kk}), c.velocity(j, b));
        for (int m = 0; m < n; ++m) s += C({m, b, i, j}) * C({l, g, m, kk}) - C({m, g, i, kk}) * C({l, b, m, j});
        return s;
    });

    k.reductions.push_back(check("curvature.P^l(gamma)_ibeta(k)_zero", k.Pt, c));
    k.reductions.push_back(check("curvature.P^l(gamma)_ij(k)_zero", k.Px, c));
    k.reductions.push_back(check("curvature.S^l(beta)(gamma)_i(j)(k)_zero", k.S, c));
    return k;
}

RicciSet ricci_and_scalar(const DTensor& h_inv, const DTensor& g_inv, const CurvatureSet& k, const CoordinateSystem& c) {
    const int p = c.p(), n = c.n();
    RicciSet r{DTensor("H_alphabeta", p, n),          DTensor("R_ialpha", p, n),
               DTensor("R_ij", p, n),                 DTensor("P^(alpha)_i(j)", p, n),
               DTensor("P^(alpha)_(i)j", p, n),       DTensor("P^(alpha)_(i)beta", p, n),
               DTensor("S^(alpha)(beta)_(i)(j)", p, n), DTensor("H", p, n),
               DTensor("R", p, n),                    DTensor("Sc", p, n),
               {}};
    r.H.fill([&](const Ix& ix) {
        RatFunc s;
        for (int mu = 0; mu < p; ++mu) s += k.H({mu, ix[0], ix[1], mu});
        return s;
    });
    r.Rit.fill([&](const Ix& ix) {
        RatFunc s;
        for (int m = 0; m < n; ++m) s += k.Rtx({m, ix[0], ix[1], m});
        return s;
    });
    r.Rij.fill([&](const Ix& ix) {
        RatFunc s;
        for (int m = 0; m < n; ++m) s += k.Rxx({m, ix[0], ix[1], m});
        return s;
    });
    r.P1.fill([&](const Ix& ix) {
        int a = ix[0], i = ix[1], j = ix[2];
        RatFunc s;
        for (int m = 0; m < n; ++m) s -= k.Px({m, a, i, m, j});
        return s;
    });
    r.P2.fill([&](const Ix& ix) {
        int a = ix[0], i = ix[1], j = ix[2];
        RatFunc s;
        for (int m = 0; m < n; ++m) s += k.Px({m, a, i, j, m});
        return s;
    });
    r.P3.fill([&](const Ix& ix) {
        int a = ix[0], i = ix[1], b = ix[2];
        RatFunc s;
        for (int m = 0; m < n; ++m) s += k.Pt({m, a, i, b, m});
        return s;
    });
    r.S.fill([&](const Ix& ix) {
        int a = ix[0], b = ix[1], i = ix[2], j = ix[3];
        RatFunc s;
        for (int m = 0; m < n; ++m) s += k.S({m, b, a, i, j, m});
        return s;
    });

    RatFunc Hs, Rs;
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) Hs += h_inv({a, b}) * r.H({a, b});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Rs += g_inv({i, j}) * r.Rij({i, j});
    r.H_scalar({}) = Hs;
    r.R_scalar({}) = Rs;
    r.Sc({}) = Hs + Rs;

    r.reductions.push_back(check("ricci.P^(alpha)_i(j)_zero", r.P1, c));
    r.reductions.push_back(check("ricci.P^(alpha)_(i)j_zero", r.P2, c));
    r.reductions.push_back(check("ricci.P^(alpha)_(i)beta_zero", r.P3, c));
    r.reductions.push_back(check("ricci.S^(alpha)(beta)_(i)(j)_zero", r.S, c));
    return r;
}

EinsteinBlocks einstein_blocks(const DTensor& h, const DTensor& h_inv, const DTensor& g, const RicciSet& r,
                               const Rational& kappa, const CoordinateSystem& c) {
    const int p = c.p(), n = c.n();
    const RatFunc half_sc = half(r.Sc({}));
    EinsteinBlocks out;

    DTensor Eab("E_alphabeta", p, n);
    Eab.fill([&](const Ix& ix) { return r.H.at(ix) - half_sc * h.at(ix); });
    DTensor Eij("E_ij", p, n);
    Eij.fill([&](const Ix& ix) { return r.Rij.at(ix) - half_sc * g.at(ix); });
    DTensor Evv("E^(alpha)(beta)_(i)(j)", p, n);
    Evv.fill([&](const Ix& ix) { return -half_sc * h_inv({ix[0], ix[1]}) * g({ix[2], ix[3]}); });
    DTensor Eia("E_ialpha", p, n);
    Eia.fill([&](const Ix& ix) { return r.Rit.at(ix); });

    // Mixed blocks: the potential has no mixed components, so E equals the Ricci block,
    // and blocks with no Ricci counterpart vanish.
    DTensor Eai("E_alphai", p, n);
    DTensor Eaib("E^(alpha)_(i)beta", p, n);
    Eaib.fill([&](const Ix& ix) { return r.P3.at(ix); });
    DTensor Ebai("E^(beta)_alpha(i)", p, n);
    DTensor Eaij1("E^(alpha)_i(j)", p, n);
    Eaij1.fill([&](const Ix& ix) { return r.P1.at(ix); });
    DTensor Eaij2("E^(alpha)_(i)j", p, n);
    Eaij2.fill([&](const Ix& ix) { return r.P2.at(ix); });

    out.E = {Eab, Eij, Evv, Eia, Eai, Eaib, Ebai, Eaij1, Eaij2};
    const RatFunc k(kappa);
    for (const auto& e : out.E) {
        DTensor t("calT" + e.key().substr(1), p, n);
        t.fill([&](const Ix& ix) { return e.at(ix) / k; });
        out.T.push_back(std::move(t));
    }
    return out;
}

ElectromagneticSet deflection_and_electromagnetism(const DTensor& h_inv, const DTensor& g, const CoordinateSystem& c) {
    const int p = c.p(), n = c.n();
    ElectromagneticSet em{DTensor("D^(alpha)_(i)j", p, n), DTensor("d^(alpha)(beta)_(i)(j)", p, n),
                          DTensor("F^(alpha)_(i)j", p, n), DTensor("f^(alpha)(beta)_(i)(j)", p, n), {}};
    em.D.fill([&](const Ix& ix) {
        int a = ix[0], i = ix[1], j = ix[2];
        RatFunc s;
        for (int mu = 0; mu < p; ++mu) s -= h_inv({a, mu}) * differentiate(g({i, j}), c.temporal(mu));
        return half(s);
    });
    em.d.fill([&](const Ix& ix) { return h_inv({ix[0], ix[1]}) * g({ix[2], ix[3]}); });
    em.F.fill([&](const Ix& ix) { return half(em.D({ix[0], ix[1], ix[2]}) - em.D({ix[0], ix[2], ix[1]})); });
    em.f.fill([&](const Ix& ix) {
        return half(em.d({ix[0], ix[1], ix[2], ix[3]}) - em.d({ix[0], ix[1], ix[3], ix[2]}));
    });
    em.reductions.push_back(check("em.F_zero", em.F, c));
    em.reductions.push_back(check("em.f_zero", em.f, c));
    return em;
}

GravitationalPotential gravitational_potential(const DTensor& h, const DTensor& h_inv, const DTensor& g,
                                               const CoordinateSystem& c) {
    GravitationalPotential pot{h, g, DTensor("calG^(alpha)(beta)_(i)(j)", c.p(), c.n())};
    pot.vv.fill([&](const Ix& ix) { return h_inv({ix[0], ix[1]}) * g({ix[2], ix[3]}); });
    return pot;
}

void require_reductions(const std::vector<ReductionCheck>& checks) {
    for (const auto& ch : checks) {
        if (ch.result.zero) continue;
        std::string msg = "claimed identity failed: " + ch.name + " at component " + ch.result.component;
        if (ch.name.starts_with("em.")) throw TrivialityViolation(msg);
        throw ReductionMismatch(msg);
    }
}

// ---------------------------------------------------------------- pipeline

std::vector<const DTensor*> Geometry::families() const {
    std::vector<const DTensor*> out = {&h,        &h_inv,         &G,          &spatial.g,   &spatial.g_inv,
                                       &kronecker.metric, &cartan.H, &Gamma,   &conn.M,      &conn.N,
                                       &cartan.Gt, &cartan.L,     &cartan.C,   &torsion.T,   &torsion.P1,
                                       &torsion.P2, &torsion.P3,  &torsion.R1, &torsion.R2,  &torsion.R3,
                                       &torsion.S, &curvature.H,  &curvature.Rtt, &curvature.Rtx, &curvature.Rxx,
                                       &curvature.Pt, &curvature.Px, &curvature.S, &ricci.H,  &ricci.Rit,
                                       &ricci.Rij, &ricci.P1,     &ricci.P2,   &ricci.P3,    &ricci.S,
                                       &ricci.H_scalar, &ricci.R_scalar, &ricci.Sc};
    for (const auto& e : einstein.E) out.push_back(&e);
    for (const auto& t : einstein.T) out.push_back(&t);
    for (const DTensor* t : {&em.D, &em.d, &em.F, &em.f}) out.push_back(t);
    return out;
}

const DTensor* Geometry::find(std::string_view key) const {
    for (const DTensor* t : families())
        if (t->key() == key) return t;
    return nullptr;
}

std::vector<ReductionCheck> Geometry::reductions() const {
    std::vector<ReductionCheck> out;
    for (const auto* list : {&cartan.reductions, &torsion.reductions, &curvature.reductions, &ricci.reductions,
                             &em.reductions})
        out.insert(out.end(), list->begin(), list->end());
    return out;
}

namespace {

class Corrupter {
public:
    explicit Corrupter(const std::optional<Corruption>& c) : c_(c) {}

    void operator()(DTensor& t) {
        if (!c_ || applied_ || t.key() != c_->family) return;
        if (c_->index.size() != static_cast<std::size_t>(t.rank()))
            throw ModelError("fixture_corruption.index has the wrong length for " + t.key());
        for (int s = 0; s < t.rank(); ++s)
            if (c_->index[static_cast<std::size_t>(s)] >= t.shape()[static_cast<std::size_t>(s)])
                throw ModelError("fixture_corruption.index is out of range for " + t.key());
        t.at(c_->index) += RatFunc(c_->delta);
        applied_ = true;
    }

    void finish() const {
        if (c_ && !applied_) throw ModelError("fixture_corruption names an unknown family '" + c_->family + "'");
    }

private:
    const std::optional<Corruption>& c_;
    bool applied_ = false;
};

}  // namespace

Geometry build_geometry(const ModelSpec& model, const BuildOptions& options) {
    const auto& c = model.coords;
    Corrupter corrupt(options.corruption);
    Geometry geo(c);
    geo.kappa = model.einstein_constant;

    geo.h = temporal_metric(model);
    geo.h_inv = inverse_metric(geo.h, "h^alphabeta");
    corrupt(geo.h_inv);
    geo.G = vertical_metric(model);
    corrupt(geo.G);
    geo.spatial = spatial_metric(geo.G, geo.h, c, model.sample_points);
    corrupt(geo.spatial.g);
    corrupt(geo.spatial.g_inv);
    geo.kronecker = kronecker_metric(geo.spatial, geo.h_inv, geo.G, c.size());

    geo.H_christoffel = temporal_christoffel(geo.h, geo.h_inv, c);
    corrupt(geo.H_christoffel);
    geo.Gamma = spatial_christoffel(geo.spatial.g, geo.spatial.g_inv, c);
    corrupt(geo.Gamma);
    geo.conn = nonlinear_connection(geo.H_christoffel, geo.Gamma, geo.spatial.g, geo.spatial.g_inv, c);
    corrupt(geo.conn.M);
    corrupt(geo.conn.N);

    geo.cartan = cartan_connection(geo.H_christoffel, geo.Gamma, geo.spatial.g, geo.spatial.g_inv, geo.conn, c);
    corrupt(geo.cartan.Gt);
    corrupt(geo.cartan.L);
    corrupt(geo.cartan.C);

    geo.torsion = torsion_set(geo.conn, geo.cartan, c);
    for (DTensor* t : {&geo.torsion.T, &geo.torsion.P1, &geo.torsion.P2, &geo.torsion.P3, &geo.torsion.R1,
                       &geo.torsion.R2, &geo.torsion.R3, &geo.torsion.S})
        corrupt(*t);
    geo.curvature = curvature_set(geo.conn, geo.torsion, geo.cartan, c);
    for (DTensor* t : {&geo.curvature.H, &geo.curvature.Rtt, &geo.curvature.Rtx, &geo.curvature.Rxx, &geo.curvature.Pt,
                       &geo.curvature.Px, &geo.curvature.S})
        corrupt(*t);
    geo.ricci = ricci_and_scalar(geo.h_inv, geo.spatial.g_inv, geo.curvature, c);
    geo.einstein = einstein_blocks(geo.h, geo.h_inv, geo.spatial.g, geo.ricci, geo.kappa, c);
    geo.em = deflection_and_electromagnetism(geo.h_inv, geo.spatial.g, c);
    geo.potential = gravitational_potential(geo.h, geo.h_inv, geo.spatial.g, c);
    corrupt.finish();
    return geo;
}

Geometry analyze(const ModelSpec& model) {
    Geometry geo = build_geometry(model, {model.corruption});
    require_reductions(geo.reductions());
    return geo;
}

}  // namespace jetgeom
