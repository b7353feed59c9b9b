#pragma once

#include "defim/model.hpp"
#include "defim/types.hpp"

namespace defim {

enum class Tri { True, False, Unknown };

// Independent subtyping oracle: unfolds atoms through their ext entries at
// most `depth` times, then decides structurally; anything it cannot settle
// within the budget is Unknown.  Kept deliberately separate from
// Session::leq (no memoization, no coinduction) so it can cross-check it.
Tri oracle_leq(const PartialModel& m, const TypeExpr& a, const TypeExpr& b, int depth);

const char* tri_name(Tri t);

}  // namespace defim
