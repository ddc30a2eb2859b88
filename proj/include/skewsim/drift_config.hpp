#pragma once

#include <filesystem>
#include <string>

#include "skewsim/drift_model.hpp"

namespace skewsim {

// Text drift definition. One `key = value` per line, '#' starts a comment.
//
//   builtin = b1 | b2 | constant     (mu, z1, z2 allowed for constant)
//   z1 = 0
//   z2 = 1
//   left   = <expr>                  piece on (-inf, z1)
//   middle = <expr>                  piece on (z1, z2)
//   right  = <expr>                  piece on (z2, inf)
//
// <expr> is a '+'-separated sum of poly(c0, c1, ...), sin(A, w, p) and cos(A, w, p),
// meaning c0 + c1 x + ..., A sin(w x + p) and A cos(w x + p). Outer pieces must be
// bounded, so they may not contain a polynomial of degree >= 1.
DriftSpec parse_drift_config(const std::string& text);
DriftSpec load_drift_config(const std::filesystem::path& path);

// A piece expression on its own, e.g. "cos(1, 1, -1) + poly(0.5)".
DriftPiece parse_piece(const std::string& expr, bool must_be_bounded = false);

// "b1", "b2", "constant:<mu>" or a path to a config file.
DriftSpec resolve_drift(const std::string& name_or_path);

}  // namespace skewsim
