#pragma once

#include "jetgeom/geometry/geometry.hpp"
#include "jetgeom/verify/verify.hpp"

#include <string>
#include <string_view>

namespace jetgeom {

std::string_view engine_version();

/// Index convention stated once in every report.
std::string_view index_convention();

/// GeometryReport as canonical JSON: sorted keys, two-space indent, trailing newline.
/// Every family appears as {"1,2,1": "<expression>"} over all of its components.
std::string geometry_report_json(const ModelSpec& model, const Geometry& geo);

/// VerificationReport in the same serialization.
std::string verification_report_json(const VerificationReport& report);

/// Standalone LaTeX document listing the nonzero components of every family.
std::string geometry_report_latex(const ModelSpec& model, const Geometry& geo);

/// Parses and re-serializes a report document canonically.
std::string canonical_json(std::string_view document);

}  // namespace jetgeom
