#pragma once

#include "jetgeom/geometry/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jetgeom {

struct VerifyOptions {
    int probes = 12;
    std::uint64_t seed = 1;
    double zero_tol = 1e-8;  // absolute, numeric tier of zero tests
    double fd_tol = 1e-6;    // relative, finite-difference audit
    double fd_step = 1e-5;
};

struct CheckRecord {
    std::string name;
    sym::ZeroTier tier = sym::ZeroTier::Failed;
    double max_residual = 0.0;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::string component;              // index label of the worst component
    std::optional<sym::Point> witness;  // set on failure

    bool passed() const { return tier != sym::ZeroTier::Failed; }
};

struct VerificationReport {
    std::vector<CheckRecord> checks;  // sorted by name, names unique
    int probes = 0;
    std::uint64_t seed = 0;
    double zero_tol = 0.0;
    double fd_tol = 0.0;

    bool passed() const;
    const CheckRecord* find(std::string_view name) const;
    std::vector<const CheckRecord*> failures() const;
};

/// The three covariant derivatives "/gamma", "|k" and "|(gamma)(k)" of a pure (0,2)
/// d-tensor under the Cartan connection. Throws std::invalid_argument unless both slots
/// of T are lower slots of class `cls`.
struct CovariantDerivatives {
    DTensor temporal;    // T_ab/gamma
    DTensor spatial;     // T_ab|k
    DTensor vertical;    // T_ab|(gamma)(k)
};
CovariantDerivatives covariant_derivative_02(const DTensor& T, IndexClass cls, const Geometry& geo);

/// h and g under each of the three derivatives: six zero checks.
std::vector<CheckRecord> metrical_conditions_check(const Geometry& geo, const VerifyOptions& opts = {});

/// Re-evaluates every family's defining formula numerically from its stored inputs with
/// central differences in place of symbolic partials.
std::vector<CheckRecord> finite_difference_audit(const ModelSpec& model, const Geometry& geo,
                                                 const VerifyOptions& opts = {});

/// Reductions, zero families, metrical conditions, (anti)symmetries and a one-level
/// consistency recomputation of every stored family.
VerificationReport theorem_ledger(const Geometry& geo, const VerifyOptions& opts = {});

/// Builds the geometry (applying any fixture corruption) and runs the ledger plus the audit.
VerificationReport verify_model(const ModelSpec& model, const VerifyOptions& opts = {});

}  // namespace jetgeom
