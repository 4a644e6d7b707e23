#include "jetgeom/verify/verify.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>

namespace jetgeom {

namespace {

using Ix = std::vector<int>;
using sym::CoordinateSystem;
using sym::Point;

// Second velocity differences of the Lagrangian are taken around zero velocity with a
// dyadic step. G does not depend on the velocities, and a quadratic form has no
// truncation error, so only rounding remains and it stays far below the audit tolerance.
constexpr double kHessianStep = 0.0625;

/// Numeric view of the stored geometry around one probe point. Every derivative is a
/// central difference of a stored component; nothing here calls the symbolic differentiator.
class Probe {
public:
    Probe(const Geometry& geo, Point x, double step) : geo_(geo), c_(geo.coords), x_(std::move(x)), h_(step) {}

    const Point& point() const { return x_; }
    double coord(int id) const { return x_[id]; }

    double v(const DTensor& t, const Ix& ix) const { return sym::evaluate(t.at(ix), x_.values); }

    double d(const DTensor& t, const Ix& ix, int id) const {
        Point up = x_, down = x_;
        up[id] += h_;
        down[id] -= h_;
        return (sym::evaluate(t.at(ix), up.values) - sym::evaluate(t.at(ix), down.values)) / (2 * h_);
    }

    /// delta/delta t^alpha with the stored M.
    double dt(const DTensor& t, const Ix& ix, int alpha) const {
        double s = d(t, ix, c_.temporal(alpha));
        for (int j = 0; j < c_.n(); ++j)
            for (int b = 0; b < c_.p(); ++b) s -= v(geo_.conn.M, {j, b, alpha}) * d(t, ix, c_.velocity(j, b));
        return s;
    }

    /// delta/delta x^i with the stored N.
    double dx(const DTensor& t, const Ix& ix, int i) const {
        double s = d(t, ix, c_.spatial(i));
        for (int j = 0; j < c_.n(); ++j)
            for (int b = 0; b < c_.p(); ++b) s -= v(geo_.conn.N, {j, b, i}) * d(t, ix, c_.velocity(j, b));
        return s;
    }

    double dv(const DTensor& t, const Ix& ix, int i, int alpha) const { return d(t, ix, c_.velocity(i, alpha)); }

    Eigen::MatrixXd matrix(const DTensor& t) const {
        const int r = t.shape()[0];
        Eigen::MatrixXd m(r, r);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) m(a, b) = v(t, {a, b});
        return m;
    }

private:
    const Geometry& geo_;
    const CoordinateSystem& c_;
    Point x_;
    double h_;
};

using Formula = std::function<double(const Probe&, const Ix&)>;

struct Family {
    const DTensor* target;
    Formula formula;
};

double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

/// Calls `audit` on every family while the formulas' captured references are alive.
void for_each_family(const ModelSpec& model, const Geometry& geo, const std::function<void(const Family&)>& audit) {
    const auto& c = geo.coords;
    const int p = c.p(), n = c.n();
    const DTensor& h = geo.h;
    const DTensor& hi = geo.h_inv;
    const DTensor& G = geo.G;
    const DTensor& g = geo.spatial.g;
    const DTensor& gi = geo.spatial.g_inv;
    const DTensor& Hc = geo.H_christoffel;
    const DTensor& Ga = geo.Gamma;
    const DTensor& M = geo.conn.M;
    const DTensor& N = geo.conn.N;
    const DTensor& H = geo.cartan.H;
    const DTensor& Gt = geo.cartan.Gt;
    const DTensor& L = geo.cartan.L;
    const DTensor& C = geo.cartan.C;
    const auto& tor = geo.torsion;
    const auto& cur = geo.curvature;
    const auto& ric = geo.ricci;

    std::vector<Family> out;

    if (const auto* src = std::get_if<LagrangianSource>(&model.metric_source)) {
        sym::Expr lag = src->lagrangian;
        out.push_back({&G, [lag, &c](const Probe& P, const Ix& ix) {
                           const int a = c.velocity(ix[2], ix[0]), b = c.velocity(ix[3], ix[1]);
                           const double s = kHessianStep;
                           auto at = [&](double da, double db) {
                               Point y = P.point();
                               for (int i = 0; i < c.n(); ++i)
                                   for (int al = 0; al < c.p(); ++al) y[c.velocity(i, al)] = 0;
                               y[a] += da;
                               y[b] += db;
                               return sym::eval_numeric(lag, y);
                           };
                           return (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (8 * s * s);
                       }});
    }
    out.push_back({&hi, [&](const Probe& P, const Ix& ix) { return P.matrix(h).inverse()(ix[0], ix[1]); }});
    out.push_back({&g, [&, p](const Probe& P, const Ix& ix) {
                       double s = 0;
                       for (int a = 0; a < p; ++a)
                           for (int b = 0; b < p; ++b) s += P.v(h, {a, b}) * P.v(G, {a, b, ix[0], ix[1]});
                       return s / p;
                   }});
    out.push_back({&gi, [&](const Probe& P, const Ix& ix) { return P.matrix(g).inverse()(ix[0], ix[1]); }});

    out.push_back({&Hc, [&, p](const Probe& P, const Ix& ix) {
                       int gm = ix[0], a = ix[1], b = ix[2];
                       double s = 0;
                       for (int mu = 0; mu < p; ++mu)
                           s += P.v(hi, {gm, mu}) * (P.d(h, {mu, a}, c.temporal(b)) + P.d(h, {mu, b}, c.temporal(a)) -
                                                     P.d(h, {a, b}, c.temporal(mu)));
                       return s / 2;
                   }});
    out.push_back({&Ga, [&, n](const Probe& P, const Ix& ix) {
                       int i = ix[0], j = ix[1], k = ix[2];
                       double s = 0;
                       for (int m = 0; m < n; ++m)
                           s += P.v(gi, {i, m}) * (P.d(g, {j, m}, c.spatial(k)) + P.d(g, {k, m}, c.spatial(j)) -
                                                   P.d(g, {j, k}, c.spatial(m)));
                       return s / 2;
                   }});
    out.push_back({&M, [&, p](const Probe& P, const Ix& ix) {
                       double s = 0;
                       for (int gm = 0; gm < p; ++gm) s -= P.v(Hc, {gm, ix[1], ix[2]}) * P.coord(c.velocity(ix[0], gm));
                       return s;
                   }});
    out.push_back({&N, [&, n](const Probe& P, const Ix& ix) {
                       int i = ix[0], a = ix[1], j = ix[2];
                       double s = 0;
                       for (int m = 0; m < n; ++m)
                           s += P.v(Ga, {i, j, m}) * P.coord(c.velocity(m, a)) +
                                P.v(gi, {i, m}) * P.d(g, {j, m}, c.temporal(a)) / 2;
                       return s;
                   }});

    out.push_back({&Gt, [&, n](const Probe& P, const Ix& ix) {
                       double s = 0;
                       for (int m = 0; m < n; ++m) s += P.v(gi, {ix[0], m}) * P.dt(g, {m, ix[1]}, ix[2]);
                       return s / 2;
                   }});
    out.push_back({&L, [&, n](const Probe& P, const Ix& ix) {
                       int i = ix[0], j = ix[1], k = ix[2];
                       double s = 0;
                       for (int m = 0; m < n; ++m)
                           s += P.v(gi, {i, m}) * (P.dx(g, {j, m}, k) + P.dx(g, {k, m}, j) - P.dx(g, {j, k}, m));
                       return s / 2;
                   }});
    out.push_back({&C, [&, n](const Probe& P, const Ix& ix) {
                       int i = ix[0], gm = ix[1], j = ix[2], k = ix[3];
                       double s = 0;
                       for (int m = 0; m < n; ++m)
                           s += P.v(gi, {i, m}) *
                                (P.dv(g, {j, m}, k, gm) + P.dv(g, {k, m}, j, gm) - P.dv(g, {j, k}, m, gm));
                       return s / 2;
                   }});

    // Torsion.
    out.push_back({&tor.T, [&](const Probe& P, const Ix& ix) { return -P.v(Gt, {ix[0], ix[2], ix[1]}); }});
    out.push_back({&tor.P1, [&](const Probe& P, const Ix& ix) { return P.v(C, ix); }});
    out.push_back({&tor.P2, [&](const Probe& P, const Ix& ix) {
                       int m = ix[0], b = ix[1], mu = ix[2], i = ix[3], j = ix[4];
                       return P.dv(N, {m, mu, i}, j, b) - kron(b, mu) * P.v(L, {m, i, j});
                   }});
    out.push_back({&tor.P3, [&](const Probe& P, const Ix& ix) {
                       int m = ix[0], b = ix[1], mu = ix[2], a = ix[3], j = ix[4];
                       return P.dv(M, {m, mu, a}, j, b) - kron(b, mu) * P.v(Gt, {m, j, a}) +
                              kron(m, j) * P.v(H, {b, mu, a});
                   }});
    out.push_back({&tor.R1, [&](const Probe& P, const Ix& ix) {
                       int m = ix[0], mu = ix[1], a = ix[2], b = ix[3];
                       return P.dt(M, {m, mu, a}, b) - P.dt(M, {m, mu, b}, a);
                   }});
    out.push_back({&tor.R2, [&](const Probe& P, const Ix& ix) {
                       int m = ix[0], mu = ix[1], a = ix[2], j = ix[3];
                       return P.dx(M, {m, mu, a}, j) - P.dt(N, {m, mu, j}, a);
                   }});
    out.push_back({&tor.R3, [&](const Probe& P, const Ix& ix) {
                       int m = ix[0], mu = ix[1], i = ix[2], j = ix[3];
                       return P.dx(N, {m, mu, i}, j) - P.dx(N, {m, mu, j}, i);
                   }});
    out.push_back({&tor.S, [&](const Probe& P, const Ix& ix) {
                       int m = ix[0], a = ix[1], b = ix[2], mu = ix[3], i = ix[4], j = ix[5];
                       return kron(a, mu) * P.v(C, {m, b, i, j}) - kron(b, mu) * P.v(C, {m, a, j, i});
                   }});

    // Curvature.
    out.push_back({&cur.H, [&, p](const Probe& P, const Ix& ix) {
                       int a = ix[0], e = ix[1], b = ix[2], gm = ix[3];
                       double s = P.d(H, {a, e, b}, c.temporal(gm)) - P.d(H, {a, e, gm}, c.temporal(b));
                       for (int mu = 0; mu < p; ++mu)
                           s += P.v(H, {mu, e, b}) * P.v(H, {a, mu, gm}) - P.v(H, {mu, e, gm}) * P.v(H, {a, mu, b});
                       return s;
                   }});
    out.push_back({&cur.Rtt, [&, n](const Probe& P, const Ix& ix) {
                       int l = ix[0], i = ix[1], b = ix[2], gm = ix[3];
                       double s = P.d(Gt, {l, i, b}, c.temporal(gm)) - P.d(Gt, {l, i, gm}, c.temporal(b));
                       for (int m = 0; m < n; ++m)
                           s += P.v(Gt, {m, i, b}) * P.v(Gt, {l, m, gm}) - P.v(Gt, {m, i, gm}) * P.v(Gt, {l, m, b});
                       return s;
                   }});
    out.push_back({&cur.Rtx, [&, n](const Probe& P, const Ix& ix) {
                       int l = ix[0], i = ix[1], b = ix[2], k = ix[3];
                       double s = P.d(Gt, {l, i, b}, c.spatial(k)) - P.d(L, {l, i, k}, c.temporal(b));
                       for (int m = 0; m < n; ++m)
                           s += P.v(Gt, {m, i, b}) * P.v(L, {l, m, k}) - P.v(L, {m, i, k}) * P.v(Gt, {l, m, b});
                       return s;
                   }});
    out.push_back({&cur.Rxx, [&, n](const Probe& P, const Ix& ix) {
                       int l = ix[0], i = ix[1], j = ix[2], k = ix[3];
                       double s = P.d(L, {l, i, j}, c.spatial(k)) - P.d(L, {l, i, k}, c.spatial(j));
                       for (int m = 0; m < n; ++m)
                           s += P.v(L, {m, i, j}) * P.v(L, {l, m, k}) - P.v(L, {m, i, k}) * P.v(L, {l, m, j});
                       return s;
                   }});
    // C^l(gamma)_i(k) under "/beta" and "|j".
    auto C_t = [&, p, n](const Probe& P, int l, int gm, int i, int k, int b) {
        double s = P.dt(C, {l, gm, i, k}, b);
        for (int m = 0; m < n; ++m)
            s += P.v(C, {m, gm, i, k}) * P.v(Gt, {l, m, b}) - P.v(C, {l, gm, m, k}) * P.v(Gt, {m, i, b}) -
                 P.v(C, {l, gm, i, m}) * P.v(Gt, {m, k, b});
        for (int mu = 0; mu < p; ++mu) s += P.v(C, {l, mu, i, k}) * P.v(H, {gm, mu, b});
        return s;
    };
    auto C_x = [&, n](const Probe& P, int l, int gm, int i, int k, int j) {
        double s = P.dx(C, {l, gm, i, k}, j);
        for (int m = 0; m < n; ++m)
            s += P.v(C, {m, gm, i, k}) * P.v(L, {l, m, j}) - P.v(C, {l, gm, m, k}) * P.v(L, {m, i, j}) -
                 P.v(C, {l, gm, i, m}) * P.v(L, {m, k, j});
        return s;
    };
    out.push_back({&cur.Pt, [&, C_t, p, n](const Probe& P, const Ix& ix) {
                       int l = ix[0], gm = ix[1], i = ix[2], b = ix[3], k = ix[4];
                       double s = P.dv(Gt, {l, i, b}, k, gm) - C_t(P, l, gm, i, k, b);
                       for (int m = 0; m < n; ++m)
                           for (int mu = 0; mu < p; ++mu) s += P.v(C, {l, mu, i, m}) * P.v(tor.P3, {m, gm, mu, b, k});
                       return s;
                   }});
    out.push_back({&cur.Px, [&, C_x, p, n](const Probe& P, const Ix& ix) {
                       int l = ix[0], gm = ix[1], i = ix[2], j = ix[3], k = ix[4];
                       double s = P.dv(L, {l, i, j}, k, gm) - C_x(P, l, gm, i, k, j);
                       for (int m = 0; m < n; ++m)
                           for (int mu = 0; mu < p; ++mu) s += P.v(C, {l, mu, i, m}) * P.v(tor.P2, {m, gm, mu, j, k});
                       return s;
                   }});
    out.push_back({&cur.S, [&, n](const Probe& P, const Ix& ix) {
                       int l = ix[0], b = ix[1], gm = ix[2], i = ix[3], j = ix[4], k = ix[5];
                       double s = P.dv(C, {l, b, i, j}, k, gm) - P.dv(C, {l, gm, i, k}, j, b);
                       for (int m = 0; m < n; ++m)
                           s += P.v(C, {m, b, i, j}) * P.v(C, {l, gm, m, k}) - P.v(C, {m, gm, i, k}) * P.v(C, {l, b, m, j});
                       return s;
                   }});

    // Ricci contractions and scalars.
    auto trace = [](int count, auto&& term) {
        double s = 0;
        for (int m = 0; m < count; ++m) s += term(m);
        return s;
    };
    out.push_back({&ric.H, [&, p, trace](const Probe& P, const Ix& ix) {
                       return trace(p, [&](int mu) { return P.v(cur.H, {mu, ix[0], ix[1], mu}); });
                   }});
    out.push_back({&ric.Rit, [&, n, trace](const Probe& P, const Ix& ix) {
                       return trace(n, [&](int m) { return P.v(cur.Rtx, {m, ix[0], ix[1], m}); });
                   }});
    out.push_back({&ric.Rij, [&, n, trace](const Probe& P, const Ix& ix) {
                       return trace(n, [&](int m) { return P.v(cur.Rxx, {m, ix[0], ix[1], m}); });
                   }});
    out.push_back({&ric.P1, [&, n, trace](const Probe& P, const Ix& ix) {
                       return -trace(n, [&](int m) { return P.v(cur.Px, {m, ix[0], ix[1], m, ix[2]}); });
                   }});
    out.push_back({&ric.P2, [&, n, trace](const Probe& P, const Ix& ix) {
                       return trace(n, [&](int m) { return P.v(cur.Px, {m, ix[0], ix[1], ix[2], m}); });
                   }});
    out.push_back({&ric.P3, [&, n, trace](const Probe& P, const Ix& ix) {
                       return trace(n, [&](int m) { return P.v(cur.Pt, {m, ix[0], ix[1], ix[2], m}); });
                   }});
    out.push_back({&ric.S, [&, n, trace](const Probe& P, const Ix& ix) {
                       return trace(n, [&](int m) { return P.v(cur.S, {m, ix[1], ix[0], ix[2], ix[3], m}); });
                   }});
    auto H_scalar = [&, p](const Probe& P) {
        double s = 0;
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b) s += P.v(hi, {a, b}) * P.v(ric.H, {a, b});
        return s;
    };
    auto R_scalar = [&, n](const Probe& P) {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += P.v(gi, {i, j}) * P.v(ric.Rij, {i, j});
        return s;
    };
    out.push_back({&ric.H_scalar, [H_scalar](const Probe& P, const Ix&) { return H_scalar(P); }});
    out.push_back({&ric.R_scalar, [R_scalar](const Probe& P, const Ix&) { return R_scalar(P); }});
    out.push_back({&ric.Sc, [&](const Probe& P, const Ix&) { return P.v(ric.H_scalar, {}) + P.v(ric.R_scalar, {}); }});

    // Einstein blocks, in the order of EinsteinBlocks::E.
    const auto& E = geo.einstein.E;
    auto half_sc = [&](const Probe& P) { return P.v(ric.Sc, {}) / 2; };
    std::vector<Formula> blocks = {
        [&, half_sc](const Probe& P, const Ix& ix) { return P.v(ric.H, ix) - half_sc(P) * P.v(h, ix); },
        [&, half_sc](const Probe& P, const Ix& ix) { return P.v(ric.Rij, ix) - half_sc(P) * P.v(g, ix); },
        [&, half_sc](const Probe& P, const Ix& ix) {
            return -half_sc(P) * P.v(hi, {ix[0], ix[1]}) * P.v(g, {ix[2], ix[3]});
        },
        [&](const Probe& P, const Ix& ix) { return P.v(ric.Rit, ix); },
        [](const Probe&, const Ix&) { return 0.0; },
        [&](const Probe& P, const Ix& ix) { return P.v(ric.P3, ix); },
        [](const Probe&, const Ix&) { return 0.0; },
        [&](const Probe& P, const Ix& ix) { return P.v(ric.P1, ix); },
        [&](const Probe& P, const Ix& ix) { return P.v(ric.P2, ix); },
    };
    const double kappa = geo.kappa.get_d();
    for (std::size_t b = 0; b < E.size() && b < blocks.size(); ++b) {
        out.push_back({&E[b], blocks[b]});
        const DTensor* e = &E[b];
        out.push_back({&geo.einstein.T[b], [e, kappa](const Probe& P, const Ix& ix) { return P.v(*e, ix) / kappa; }});
    }

    // Deflection and electromagnetism, gravitational potential.
    const auto& em = geo.em;
    out.push_back({&em.D, [&, p](const Probe& P, const Ix& ix) {
                       double s = 0;
                       for (int mu = 0; mu < p; ++mu) s -= P.v(hi, {ix[0], mu}) * P.d(g, {ix[1], ix[2]}, c.temporal(mu));
                       return s / 2;
                   }});
    out.push_back({&em.d, [&](const Probe& P, const Ix& ix) {
                       return P.v(hi, {ix[0], ix[1]}) * P.v(g, {ix[2], ix[3]});
                   }});
    out.push_back({&em.F, [&](const Probe& P, const Ix& ix) {
                       return (P.v(em.D, {ix[0], ix[1], ix[2]}) - P.v(em.D, {ix[0], ix[2], ix[1]})) / 2;
                   }});
    out.push_back({&em.f, [&](const Probe& P, const Ix& ix) {
                       return (P.v(em.d, {ix[0], ix[1], ix[2], ix[3]}) - P.v(em.d, {ix[0], ix[1], ix[3], ix[2]})) / 2;
                   }});
    out.push_back({&geo.potential.vv, [&](const Probe& P, const Ix& ix) {
                       return P.v(hi, {ix[0], ix[1]}) * P.v(g, {ix[2], ix[3]});
                   }});
    for (const auto& f : out) audit(f);
}

}  // namespace

std::vector<CheckRecord> finite_difference_audit(const ModelSpec& model, const Geometry& geo,
                                                 const VerifyOptions& opts) {
    const int dim = geo.coords.size();
    std::vector<CheckRecord> out;
    for_each_family(model, geo, [&](const Family& f) {
        CheckRecord r{"fd." + f.target->key(), sym::ZeroTier::Numeric, 0.0, opts.seed, opts.fd_tol, {}, {}};
        Point worst;
        sym::for_each_probe(dim, opts.probes, opts.seed, [&](const Point& x) {
            Probe P(geo, x, opts.fd_step);
            for (std::size_t k = 0; k < f.target->size(); ++k) {
                Ix ix = f.target->index_of(k);
                const double s = P.v(*f.target, ix);
                const double want = f.formula(P, ix);
                double res = std::abs(s - want) / std::max(1.0, std::abs(want));
                if (std::isnan(res)) res = std::numeric_limits<double>::infinity();
                if (res > r.max_residual) {
                    r.max_residual = res;
                    r.component = index_label(ix);
                    worst = x;
                }
            }
        });
        if (r.max_residual > opts.fd_tol) {
            r.tier = sym::ZeroTier::Failed;
            r.witness = worst;
        }
        out.push_back(std::move(r));
    });
    return out;
}

}  // namespace jetgeom
