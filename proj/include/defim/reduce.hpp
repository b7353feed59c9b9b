#pragma once

#include <optional>

#include "defim/model.hpp"
#include "defim/syntax.hpp"

namespace defim {

enum class RuleId {
  Beta,        // (λx.M) N
  TauBar,      // (Σ τ̄_α(Q)) N
  Tau,         // τ_α(λx.M)
  TauTauBar,   // τ_α(Σ τ̄_β(Q))
  ProdSum,     // ×+ distribution
  TauBarPlus,  // τ̄_α over a sum splits
  OmegaLam,
  OmegaApp,
  OmegaTau,
};
const char* rule_name(RuleId r);

// One reduction step: the rule, the redex position in the pre-step AST
// (child indices; multiset children indexed in canonical order), and the
// whole AST after the step.
struct Step {
  RuleId rule;
  std::vector<int> path;
  Node result;
};

struct ReductionOutcome {
  enum class K { Converged, Refuted, FuelExhausted };
  K k;
  Node final_state;
  std::vector<Step> trace;
};

struct ReduceLimits {
  size_t tautaubar_max = 16;  // subset blowup guard for rule ττ̄
};

// All head steps (Fig. 1 side conditions); one entry per reducible summand
// position.  step_head picks the first.
std::vector<Step> head_steps(const Node& t, Session& s, const ReduceLimits& lim = {});
std::optional<Step> step_head(const Node& t, Session& s, const ReduceLimits& lim = {});

// All one-step reducts under the free contextual closure.
std::vector<Step> enumerate_steps(const Node& t, Session& s, const ReduceLimits& lim = {});

bool is_mhnf(const Node& t);

// Fuel-bounded may-evaluation: head steps, round-robin across summand
// positions (fair schedule).  Stuck non-mhnf nodes other than the empty test
// sum are reported FuelExhausted (divergent-equivalent); the empty test sum
// is Refuted.
ReductionOutcome eval(const Node& t, Session& s, size_t fuel, const ReduceLimits& lim = {});
// Same engine with β steps forbidden.
ReductionOutcome eval_no_beta(const Node& t, Session& s, size_t fuel,
                              const ReduceLimits& lim = {});

struct BetaSplit {
  std::vector<Step> beta_trace;  // pure β prefix
  std::vector<Step> test_trace;  // non-β completion to mhnf
};
// β-postponement splitter: leftmost β prefix (shortest one that works),
// then a β-free run to mhnf.
std::optional<BetaSplit> split_beta_first(const Node& t, Session& s, size_t fuel,
                                          const ReduceLimits& lim = {});

}  // namespace defim
