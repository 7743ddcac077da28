#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "match_arena/graph.hpp"

namespace match_arena {

using AnyInstance = std::variant<ArrivalInstance, EdgeArrivalInstance>;

// Text format, one item per line, '#' starts a comment:
//
//   mode vertex            mode edge
//   n <N>                  n <N>
//   arrive <v> [<u>...]    edge <u> <v>
//
// `arrive` lines must appear in arrival order (v = 0, 1, ...).

/// Throws std::runtime_error with a line number on malformed input.
AnyInstance read_instance(std::istream& in);
AnyInstance read_instance_file(const std::string& path);

void write_instance(std::ostream& out, const ArrivalInstance& inst);
void write_instance(std::ostream& out, const EdgeArrivalInstance& inst);
void write_instance(std::ostream& out, const AnyInstance& inst);

}  // namespace match_arena
