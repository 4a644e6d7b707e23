#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jetgeom::cli {

/// Runs `jetgeom <args...>` (program name excluded) and returns the exit status.
///
///   analyze MODEL [-o OUT] [--latex TEX]   0 ok, 1 load/validation error, 2 reduction mismatch
///   verify MODEL [--probes N] [--seed S] [--tol T] [--json OUT]
///                                           0 all pass, 1 some check failed, 2 load error
///   eval MODEL --at "t1=0,x1=1,..."         0 ok, 1 unassigned coordinate or domain error
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jetgeom::cli
