#pragma once

#include "jetgeom/geometry/dtensor.hpp"
#include "jetgeom/model/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetgeom {

/// A claimed identity failed to hold; this signals an engine bug, not a model property.
class ReductionMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// F or f failed to vanish.
class TrivialityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One zero test recorded while building the geometry.
struct ReductionCheck {
    std::string name;
    TensorZeroResult result;
};

struct NonlinearConnection {
    DTensor M;  // M^(i)_(alpha)beta
    DTensor N;  // N^(i)_(alpha)j
};

struct CartanConnection {
    DTensor H;   // H^gamma_alphabeta
    DTensor Gt;  // G^k_jgamma
    DTensor L;   // L^i_jk
    DTensor C;   // C^i(gamma)_j(k)
    std::vector<ReductionCheck> reductions;
};

struct TorsionSet {
    DTensor T;     // T^m_alphaj
    DTensor P1;    // P^m(beta)_i(j)
    DTensor P2;    // P^(m)(beta)_(mu)i(j)
    DTensor P3;    // P^(m)(beta)_(mu)alpha(j)
    DTensor R1;    // R^(m)_(mu)alphabeta
    DTensor R2;    // R^(m)_(mu)alphaj
    DTensor R3;    // R^(m)_(mu)ij
    DTensor S;     // S^(m)(alpha)(beta)_(mu)(i)(j)
    std::vector<ReductionCheck> reductions;
};

struct CurvatureSet {
    DTensor H;    // H^alpha_etabetagamma
    DTensor Rtt;  // R^l_ibetagamma
    DTensor Rtx;  // R^l_ibetak
    DTensor Rxx;  // R^l_ijk
    DTensor Pt;   // P^l(gamma)_ibeta(k)
    DTensor Px;   // P^l(gamma)_ij(k)
    DTensor S;    // S^l(beta)(gamma)_i(j)(k)
    std::vector<ReductionCheck> reductions;
};

struct RicciSet {
    DTensor H;    // H_alphabeta = H^mu_alphabetamu
    DTensor Rit;  // R_ialpha = R^m_ialpham
    DTensor Rij;  // R_ij = R^m_ijm
    DTensor P1;   // P^(alpha)_i(j) = -P^m(alpha)_im(j)
    DTensor P2;   // P^(alpha)_(i)j = P^m(alpha)_ij(m)
    DTensor P3;   // P^(alpha)_(i)beta = P^m(alpha)_ibeta(m)
    DTensor S;    // S^(alpha)(beta)_(i)(j) = S^m(beta)(alpha)_i(j)(m)
    DTensor H_scalar;  // H = h^alphabeta H_alphabeta
    DTensor R_scalar;  // R = g^ij R_ij
    DTensor Sc;        // H + R
    std::vector<ReductionCheck> reductions;
};

/// Left-hand sides E of the field equations; stress-energy is E / kappa.
struct EinsteinBlocks {
    std::vector<DTensor> E;  // nonzero blocks first, then the zero blocks
    std::vector<DTensor> T;  // calT blocks, same order
};

struct ElectromagneticSet {
    DTensor D;  // D^(alpha)_(i)j
    DTensor d;  // d^(alpha)(beta)_(i)(j)
    DTensor F;  // F^(alpha)_(i)j
    DTensor f;  // f^(alpha)(beta)_(i)(j)
    std::vector<ReductionCheck> reductions;
};

/// The three diagonal blocks of the gravitational potential in the co-frame (dt, dx, delta x).
struct GravitationalPotential {
    DTensor hh;  // h_alphabeta, on dt (x) dt
    DTensor gg;  // g_ij, on dx (x) dx
    DTensor vv;  // h^alphabeta g_ij, on delta x (x) delta x
};

// ------------------------------------------------------------ operations

DTensor temporal_christoffel(const DTensor& h, const DTensor& h_inv, const sym::CoordinateSystem& coords);
DTensor spatial_christoffel(const DTensor& g, const DTensor& g_inv, const sym::CoordinateSystem& coords);
NonlinearConnection nonlinear_connection(const DTensor& H, const DTensor& Gamma, const DTensor& g,
                                         const DTensor& g_inv, const sym::CoordinateSystem& coords);

/// delta/delta t^alpha and delta/delta x^i of the nonlinear connection.
RatFunc delta_t(const RatFunc& e, int alpha, const NonlinearConnection& conn, const sym::CoordinateSystem& coords);
RatFunc delta_x(const RatFunc& e, int i, const NonlinearConnection& conn, const sym::CoordinateSystem& coords);

/// The Cartan coefficients from their general formulas. Records the reductions
/// dg/dt = partial g/partial t, L = Gamma, C = 0 without throwing.
CartanConnection cartan_connection(const DTensor& H, const DTensor& Gamma, const DTensor& g, const DTensor& g_inv,
                                   const NonlinearConnection& conn, const sym::CoordinateSystem& coords);

TorsionSet torsion_set(const NonlinearConnection& conn, const CartanConnection& cartan,
                       const sym::CoordinateSystem& coords);
CurvatureSet curvature_set(const NonlinearConnection& conn, const TorsionSet& torsion, const CartanConnection& cartan,
                           const sym::CoordinateSystem& coords);
RicciSet ricci_and_scalar(const DTensor& h_inv, const DTensor& g_inv, const CurvatureSet& curvature,
                          const sym::CoordinateSystem& coords);
EinsteinBlocks einstein_blocks(const DTensor& h, const DTensor& h_inv, const DTensor& g, const RicciSet& ricci,
                               const Rational& kappa, const sym::CoordinateSystem& coords);
ElectromagneticSet deflection_and_electromagnetism(const DTensor& h_inv, const DTensor& g,
                                                   const sym::CoordinateSystem& coords);
GravitationalPotential gravitational_potential(const DTensor& h, const DTensor& h_inv, const DTensor& g,
                                               const sym::CoordinateSystem& coords);

/// Throws ReductionMismatch (or TrivialityViolation for F, f) naming the first failed check.
void require_reductions(const std::vector<ReductionCheck>& checks);

// ------------------------------------------------------------ full pipeline

struct Geometry {
    explicit Geometry(sym::CoordinateSystem c) : coords(std::move(c)) {}

    sym::CoordinateSystem coords;
    DTensor h, h_inv;
    DTensor G;  // vertical metric
    SpatialMetric spatial;
    KroneckerMetric kronecker;
    DTensor H_christoffel;  // H^gamma_alphabeta
    DTensor Gamma;          // Gamma^i_jk
    NonlinearConnection conn;
    CartanConnection cartan;
    TorsionSet torsion;
    CurvatureSet curvature;
    RicciSet ricci;
    EinsteinBlocks einstein;
    ElectromagneticSet em;
    GravitationalPotential potential;
    Rational kappa;

    /// Every tensor family in report order.
    std::vector<const DTensor*> families() const;
    const DTensor* find(std::string_view key) const;
    /// All reduction checks recorded by the stages.
    std::vector<ReductionCheck> reductions() const;
};

struct BuildOptions {
    /// Applied to the named family right after it is computed; downstream stages see it.
    std::optional<Corruption> corruption;
};

/// Runs every stage without enforcing reductions.
Geometry build_geometry(const ModelSpec& model, const BuildOptions& options = {});

/// build_geometry with the model's own fixture corruption, then require_reductions.
Geometry analyze(const ModelSpec& model);

}  // namespace jetgeom
