#include <functional>
#include <map>

#include "defim/typing.hpp"

namespace defim {

// Brute-force evaluation of the direct-interpretation clauses (variable,
// abstraction, application), with existential witnesses drawn from the type
// universe and family sizes bounded by opt.family_max.  An accepted
// membership is genuine; a rejection may be a completeness artifact of the
// bounds.

namespace {

struct Interp {
  Session& s;
  const InterpOptions& opt;
  std::vector<TypeExpr> uni;
  size_t used = 0;
  std::map<std::string, bool> memo;

  void count() {
    if (++used > opt.fuel) throw ResourceError("interp: fuel exhausted");
  }

  // vars is the environment coordinate order; env matches it positionally,
  // extended on the right when descending under binders.
  bool mem(const TermPtr& m, const std::vector<std::string>& vars,
           const std::vector<TypeExpr>& env, const TypeExpr& beta) {
    count();
    std::string key = print_term(m) + "|" + beta.str();
    for (size_t i = 0; i < vars.size(); ++i) key += "|" + vars[i] + ":" + env[i].str();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    memo[key] = false;  // conservative while evaluating (no cyclic clauses)
    bool r = mem_raw(m, vars, env, beta);
    memo[key] = r;
    return r;
  }

  bool mem_raw(const TermPtr& m, const std::vector<std::string>& vars,
               const std::vector<TypeExpr>& env, const TypeExpr& beta) {
    if (s.leq(s.top(), beta)) return true;  // every clause admits the empty family
    switch (m->k) {
      case Term::K::Omega:
        return false;  // ⟦Ω⟧ reaches only ω
      case Term::K::Var: {
        for (size_t i = 0; i < vars.size(); ++i)
          if (vars[i] == m->name) return s.leq(env[i], beta);
        return false;
      }
      case Term::K::Lam: {
        // β ≥ ⋀ᵢ(βᵢ→γᵢ) with (env·βᵢ, γᵢ) in the body's interpretation.
        auto vars2 = vars;
        vars2.push_back(m->name);
        std::vector<std::pair<TypeExpr, TypeExpr>> picked;
        std::function<bool(size_t)> go = [&](size_t depth) -> bool {
          if (depth > 0) {
            std::vector<TypeExpr> arrows;
            for (const auto& [b, g] : picked) arrows.push_back(TypeExpr::arrow(b, g));
            if (s.leq(TypeExpr::meet_all(arrows), beta)) {
              bool all = true;
              for (const auto& [b, g] : picked) {
                auto env2 = env;
                env2.push_back(b);
                if (!mem(m->t1, vars2, env2, g)) {
                  all = false;
                  break;
                }
              }
              if (all) return true;
            }
          }
          if (depth == opt.family_max) return false;
          for (const auto& b : uni)
            for (const auto& g : uni) {
              picked.push_back({b, g});
              if (go(depth + 1)) return true;
              picked.pop_back();
            }
          return false;
        };
        return go(0);
      }
      case Term::K::App: {
        // β ≥ ⋀ᵢβᵢ with ⋀ᵢ(γᵢ→βᵢ) in ⟦M⟧ and ⋀ᵢγᵢ in ⟦N⟧.
        std::vector<std::pair<TypeExpr, TypeExpr>> picked;  // (γᵢ, βᵢ)
        std::function<bool(size_t)> go = [&](size_t depth) -> bool {
          if (depth > 0) {
            std::vector<TypeExpr> arrows, gammas, betas;
            for (const auto& [g, b] : picked) {
              arrows.push_back(TypeExpr::arrow(g, b));
              gammas.push_back(g);
              betas.push_back(b);
            }
            if (s.leq(TypeExpr::meet_all(betas), beta) &&
                mem(m->t1, vars, env, TypeExpr::meet_all(arrows)) &&
                mem(m->t2, vars, env, TypeExpr::meet_all(gammas)))
              return true;
          }
          if (depth == opt.family_max) return false;
          for (const auto& g : uni)
            for (const auto& b : uni) {
              picked.push_back({g, b});
              if (go(depth + 1)) return true;
              picked.pop_back();
            }
          return false;
        };
        return go(0);
      }
      case Term::K::BarSum:
        throw ModelError("interp_enumerate: subject must be a pure λΩ-term");
    }
    return false;
  }
};

}  // namespace

bool interp_member(const TermPtr& m, const std::vector<std::string>& vars,
                   const std::vector<TypeExpr>& env, const TypeExpr& target, Session& s,
                   const InterpOptions& opt) {
  Interp in{s, opt, s.universe(opt.type_depth, opt.universe_cap)};
  return in.mem(m, vars, env, target);
}

std::vector<std::pair<std::vector<TypeExpr>, TypeExpr>> interp_enumerate(
    const TermPtr& m, Session& s, const InterpOptions& opt) {
  std::vector<std::string> vars;
  for (const auto& v : free_vars(m)) vars.push_back(v);
  Interp in{s, opt, s.universe(opt.type_depth, opt.universe_cap)};
  std::vector<std::pair<std::vector<TypeExpr>, TypeExpr>> out;
  std::vector<TypeExpr> env(vars.size(), TypeExpr::top());
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == vars.size()) {
      for (const auto& b : in.uni)
        if (!b.is_top() && in.mem(m, vars, env, b)) out.push_back({env, b});
      return;
    }
    for (const auto& a : in.uni) {
      env[i] = a;
      go(i + 1);
    }
  };
  go(0);
  return out;
}

}  // namespace defim
