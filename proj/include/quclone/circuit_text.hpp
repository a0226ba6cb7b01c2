#pragma once
// Human-readable circuit text.  Grammar (see FORMAT.md for the full spec):
//
//   file   := header line*
//   header := "wires" INT            -- declared input wire count
//   line   := token (WS token)*      -- one layer per line
//   token  := "H@"i | "T@"i | "TOF@"i","j","k | "PREP" | "TR@"i
//           | "X@"i | "CNOT@"i","j | "Z@"i
//
// Blank lines and lines starting with '#' are ignored.

#include <string>

#include "quclone/circuit.hpp"

namespace quclone {

Circuit parse_circuit_text(const std::string& text);
std::string format_circuit_text(const Circuit& c);

}  // namespace quclone
