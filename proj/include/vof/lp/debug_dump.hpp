#pragma once

#include <iosfwd>

#include "vof/lp/problem.hpp"

namespace vof::lp {

// Writes a human-readable listing of the program (objective, rows, bounds).
// Layout is for eyeballs and bug reports, not a stability contract.
void dump_lp(const LinearProgram& lp, std::ostream& os);

}  // namespace vof::lp
