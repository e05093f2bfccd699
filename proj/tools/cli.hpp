#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "prcg/prcg.h"

namespace prcg_cli {

// Parses "cg:6", "be:6", "fe", "tr:2", "trbdf2:2", "gauss4:6", "erk4".
// The number is M for cg (required) and J otherwise (default 1).
// Throws std::invalid_argument on malformed input.
prcg_propagator_spec parse_spec(const std::string& text);
std::string spec_string(const prcg_propagator_spec& spec);

// Runs the command line (args[0] is the program name) and returns the exit
// code. Progress and diagnostics go to `log`.
int run(const std::vector<std::string>& args, std::ostream& log);

}  // namespace prcg_cli
