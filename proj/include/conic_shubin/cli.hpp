#pragma once

#include <iosfwd>
#include <string>

#include "conic_shubin/aniso.hpp"
#include "conic_shubin/grid.hpp"

namespace conic_shubin {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotElliptic = 2;

/// "l1,l2,l3".
AnisotropyVector parse_aniso_flag(const std::string& text);
/// "t0,t1,nt,nz", inline JSON or a path to a JSON file.
GridSpec parse_grid_flag(const std::string& text);

/// Runs the command line and returns the exit code. Artifacts go to the --out directory;
/// `out` receives a one-line summary per artifact, `err` the diagnostics.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conic_shubin
