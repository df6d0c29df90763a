#pragma once

#include <string>

#include "finsler/manifold.hpp"

namespace finsler {

// Loads a manifold description from JSON:
//   {"dimension": n, "family": "riemannian"|"randers"|"generic",
//    "a": [[expr]], "b": [expr], "F": expr, "measure": expr}
// "measure" defaults to "1". Unknown keys and family/field mismatches are
// rejected with ErrorCode::SpecSchema; malformed JSON carries a byte offset.
ManifoldSpec load_spec_json(const std::string& text);
ManifoldSpec load_spec_file(const std::string& path);

} // namespace finsler
