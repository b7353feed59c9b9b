#pragma once

#include "defim/typing.hpp"

namespace defim {

// Pure λΩ-terms only (no test constructs).
bool is_pure(const TermPtr& m);

// True iff m = Ω or m = λx⃗. y M₁…Mₖ with every Mⱼ βΩ-normal.
bool is_bohm_normal(const TermPtr& m);

// ω(M): Ω when the head is a redex (or Ω); otherwise the head-variable
// spine with every argument collapsed to its direct approximant.
TermPtr direct_approximant(const TermPtr& m);

// 𝔅(M) up to fuel head steps: ω of every prefix of the deterministic head
// sequence, deduplicated, in order (a chain).
std::vector<TermPtr> approximants(const TermPtr& m, Session& s, size_t fuel);

struct ApproxVerdict {
  bool found = false;
  TermPtr witness;  // set iff found
};

// Searches the approximant chain for one whose instance inhabits the
// target, running both the checker and the test oracle (they must agree).
// budget bounds the number of approximants tried; fuel is per-oracle run.
ApproxVerdict approximability_check(const TermPtr& m,
                                    const std::vector<std::pair<std::string, TypeExpr>>& env_values,
                                    const TypeExpr& target, Session& s, size_t fuel,
                                    size_t budget, const CheckOptions& opt = {});

}  // namespace defim
