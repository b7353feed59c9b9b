#include "defim/approx.hpp"

namespace defim {

bool is_pure(const TermPtr& m) {
  switch (m->k) {
    case Term::K::Var:
    case Term::K::Omega:
      return true;
    case Term::K::Lam:
      return is_pure(m->t1);
    case Term::K::App:
      return is_pure(m->t1) && is_pure(m->t2);
    case Term::K::BarSum:
      return false;
  }
  return false;
}

bool is_bohm_normal(const TermPtr& m) {
  if (m->k == Term::K::Omega) return true;
  TermPtr t = m;
  while (t->k == Term::K::Lam) t = t->t1;
  std::vector<TermPtr> args;
  while (t->k == Term::K::App) {
    args.push_back(t->t2);
    t = t->t1;
  }
  if (t->k != Term::K::Var) return false;
  for (const auto& a : args)
    if (!is_bohm_normal(a)) return false;
  return true;
}

TermPtr direct_approximant(const TermPtr& m) {
  if (!is_pure(m)) throw ModelError("direct_approximant: term has test constructs");
  std::vector<std::string> lams;
  TermPtr t = m;
  while (t->k == Term::K::Lam) {
    lams.push_back(t->name);
    t = t->t1;
  }
  std::vector<TermPtr> args;
  while (t->k == Term::K::App) {
    args.push_back(t->t2);
    t = t->t1;
  }
  if (t->k != Term::K::Var) return mk_omega();  // head redex or Ω
  TermPtr out = t;
  for (auto it = args.rbegin(); it != args.rend(); ++it)
    out = mk_app(out, direct_approximant(*it));
  for (auto it = lams.rbegin(); it != lams.rend(); ++it) out = mk_lam(*it, out);
  return out;
}

std::vector<TermPtr> approximants(const TermPtr& m, Session& s, size_t fuel) {
  if (!is_pure(m)) throw ModelError("approximants: term has test constructs");
  std::vector<TermPtr> out;
  auto push = [&](const TermPtr& a) {
    for (const auto& x : out)
      if (alpha_eq(x, a)) return;
    out.push_back(a);
  };
  TermPtr cur = m;
  push(direct_approximant(cur));
  for (size_t i = 0; i < fuel; ++i) {
    auto st = step_head(Node(cur), s);
    if (!st) break;
    cur = std::get<TermPtr>(st->result);
    push(direct_approximant(cur));
  }
  return out;
}

ApproxVerdict approximability_check(
    const TermPtr& m, const std::vector<std::pair<std::string, TypeExpr>>& env_values,
    const TypeExpr& target, Session& s, size_t fuel, size_t budget, const CheckOptions& opt) {
  auto chain = approximants(m, s, budget);
  Environment env;
  for (const auto& [x, a] : env_values) env = env.extended(x, a);
  size_t tried = 0;
  for (const auto& a : chain) {
    if (++tried > budget) break;
    bool derivable;
    try {
      derivable = check_term(env, a, target, s, opt).derivable;
    } catch (const ResourceError&) {
      derivable = false;
    }
    auto out = oracle(a, env_values, target, s, fuel);
    bool converged = out.k == ReductionOutcome::K::Converged;
    if (derivable != converged)
      throw ModelError("approximability_check: checker and oracle disagree on " +
                       print_term(a));
    if (converged) return {true, a};
  }
  return {};
}

}  // namespace defim
