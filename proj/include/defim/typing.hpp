#pragma once

#include <memory>
#include <optional>

#include "defim/reduce.hpp"
#include "defim/syntax.hpp"

namespace defim {

// Ordered environment x1:a1, ..., xn:an; distinct variables.
struct Environment {
  std::vector<std::pair<std::string, TypeExpr>> binds;

  std::optional<TypeExpr> lookup(const std::string& x) const;
  Environment extended(const std::string& x, const TypeExpr& t) const;
  std::string str() const;
};

// A witness derivation in the declarative system (axiom + weakening +
// subsumption + λ + app + ∧; τ, τ̄-sum, test-sum, test-prod).  The
// algorithmic checker emits the syntax-directed normal form of such
// derivations; recheck() validates every node against the rule set.
struct Derivation {
  std::string rule;  // ax | top | lam | app | barsum | tau | sum | prod
  Environment env;
  Node subject;
  std::optional<TypeExpr> target;     // absent for test judgments
  std::vector<TypeExpr> aux;          // app: argument type; barsum: chosen labels
  std::vector<std::shared_ptr<const Derivation>> premises;

  std::string str(int indent = 0) const;
};
using DerivPtr = std::shared_ptr<const Derivation>;

struct CheckOptions {
  int universe_depth = 2;     // app-rule candidate pool depth
  size_t universe_cap = 0;    // 0 = uncapped
  size_t budget = 200000;     // judgment visits before ResourceError
};

struct CheckResult {
  bool derivable = false;
  DerivPtr deriv;  // set iff derivable
};

// Syntax-directed search for Γ ⊢ M : target / Γ ⊢ Q.  NotFound
// (derivable=false) is not a proof of non-membership.
CheckResult check_term(const Environment& env, const TermPtr& m, const TypeExpr& target,
                       Session& s, const CheckOptions& opt = {});
CheckResult check_test(const Environment& env, const TestPtr& q, Session& s,
                       const CheckOptions& opt = {});

// Validates a witness derivation rule-by-rule; empty report means sound.
std::vector<std::string> recheck(const DerivPtr& d, Session& s);

// Definability oracle: builds τ_target(M[ε̄_αᵢ/xᵢ]) and evaluates it.
// env_values must cover FV(M); target must not be ω.
ReductionOutcome oracle(const TermPtr& m,
                        const std::vector<std::pair<std::string, TypeExpr>>& env_values,
                        const TypeExpr& target, Session& s, size_t fuel);

struct InterpOptions {
  int type_depth = 2;
  size_t universe_cap = 0;
  size_t family_max = 3;   // existential family size bound (completeness bound)
  size_t fuel = 2000000;   // membership evaluations before ResourceError
};

// Brute-force direct interpretation, restricted to the type universe.
// vars fixes the environment coordinate order and must cover FV(m).
bool interp_member(const TermPtr& m, const std::vector<std::string>& vars,
                   const std::vector<TypeExpr>& env, const TypeExpr& target, Session& s,
                   const InterpOptions& opt = {});
// All (env tuple, target) pairs over the universe that interp_member accepts.
std::vector<std::pair<std::vector<TypeExpr>, TypeExpr>> interp_enumerate(
    const TermPtr& m, Session& s, const InterpOptions& opt = {});

}  // namespace defim
