#pragma once

#include <string>

#include "gapcert/process.hpp"

namespace gapcert {

/// Standalone SVG with two panels: the pseudo-time view (states and clock vs
/// s) and the time-expanded view (states vs t = y0(s)).
void write_process_svg(const std::string& path, const ProblemSpec& p,
                       const ExtendedProcess& proc);

}  // namespace gapcert
