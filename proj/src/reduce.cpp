#include "defim/reduce.hpp"

#include <algorithm>
#include <functional>

namespace defim {

const char* rule_name(RuleId r) {
  switch (r) {
    case RuleId::Beta: return "beta";
    case RuleId::TauBar: return "taubar";
    case RuleId::Tau: return "tau";
    case RuleId::TauTauBar: return "tautaubar";
    case RuleId::ProdSum: return "x+";
    case RuleId::TauBarPlus: return "taubar+";
    case RuleId::OmegaLam: return "omega-lam";
    case RuleId::OmegaApp: return "omega-app";
    case RuleId::OmegaTau: return "omega-tau";
  }
  return "?";
}

namespace {

bool label_is_omega(Session& s, const TypeExpr& t) {
  return t.is_top() || s.eq(t, TypeExpr::top());
}

// (τ̄): (Σᵢ τ̄_{αᵢ}(Qᵢ)) N → Σᵢ Σ_{(β,γ)∈ext(αᵢ)} τ̄_γ(Qᵢ × τ_β(N)),
// with the caption conventions τ_ω(N) := ε and τ̄_ω dropped.
TermPtr rule_taubar(const TermPtr& bar, const TermPtr& n, Session& s) {
  std::vector<Term::Entry> out;
  for (const auto& e : bar->entries) {
    for (const auto& [beta, gamma] : s.ext_of(e.label)) {
      if (label_is_omega(s, gamma)) continue;
      TestPtr factor = label_is_omega(s, beta) ? mk_eps() : mk_tau(beta, n);
      out.push_back({gamma, mk_prod({e.body, factor})});
    }
  }
  return mk_barsum(std::move(out));
}

// (τ): τ_α(λx.M) → Π_{(β,γ)∈ext(α)} τ_γ(M[ε̄_β/x]), with ε̄_ω := 0t and
// τ_ω(·) := ε.
TestPtr rule_tau(const TypeExpr& alpha, const TermPtr& lam, Session& s) {
  std::vector<TestPtr> factors;
  for (const auto& [beta, gamma] : s.ext_of(alpha)) {
    TermPtr arg = label_is_omega(s, beta) ? mk_barsum({}) : mk_ebar(beta);
    TermPtr body = substitute(lam->t1, lam->name, arg);
    if (!label_is_omega(s, gamma)) factors.push_back(mk_tau(gamma, body));
  }
  return mk_prod(std::move(factors));
}

// (ττ̄): τ_α(Σ_{i∈I} τ̄_{βᵢ}(Qᵢ)) → Σ_{I′⊆I, α ≥ ⋀_{I′}βᵢ} Π_{i∈I′}Qᵢ.
TestPtr rule_tautaubar(const TypeExpr& alpha, const TermPtr& bar, Session& s,
                       const ReduceLimits& lim) {
  size_t n = bar->entries.size();
  if (n > lim.tautaubar_max)
    throw ResourceError("tautaubar: sum of " + std::to_string(n) + " exceeds subset guard");
  std::vector<TestPtr> summands;
  for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
    std::vector<TypeExpr> labels;
    std::vector<TestPtr> qs;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t(1) << i)) {
        labels.push_back(bar->entries[i].label);
        qs.push_back(bar->entries[i].body);
      }
    if (s.leq(TypeExpr::meet_all(labels), alpha)) summands.push_back(mk_prod(std::move(qs)));
  }
  return mk_sum(std::move(summands));
}

// (×+): one-step cartesian distribution of every sum factor.
TestPtr rule_prodsum(const TestPtr& prod) {
  std::vector<TestPtr> fixed;
  std::vector<std::vector<TestPtr>> choices;
  for (const auto& i : prod->items) {
    if (i->k == Test::K::Sum)
      choices.push_back(i->items);
    else
      fixed.push_back(i);
  }
  std::vector<TestPtr> summands;
  std::vector<size_t> idx(choices.size(), 0);
  while (true) {
    std::vector<TestPtr> fs = fixed;
    bool dead = false;
    for (size_t c = 0; c < choices.size(); ++c) {
      if (choices[c].empty()) {
        dead = true;  // a 0 factor annihilates the product
        break;
      }
      fs.push_back(choices[c][idx[c]]);
    }
    if (dead) break;
    summands.push_back(mk_prod(std::move(fs)));
    size_t c = 0;
    for (; c < choices.size(); ++c) {
      if (++idx[c] < choices[c].size()) break;
      idx[c] = 0;
    }
    if (c == choices.size()) break;
  }
  return mk_sum(std::move(summands));
}

// τ̄+ split of entry i of a BarSum whose body is a sum.
TermPtr rule_taubarplus(const TermPtr& bar, size_t i) {
  std::vector<Term::Entry> out;
  for (size_t j = 0; j < bar->entries.size(); ++j) {
    if (j != i) {
      out.push_back(bar->entries[j]);
      continue;
    }
    for (const auto& q : bar->entries[i].body->items)
      out.push_back({bar->entries[i].label, q});
  }
  return mk_barsum(std::move(out));
}

struct Collector {
  Session& s;
  const ReduceLimits& lim;
  bool head_only;
  std::vector<Step> out;

  void add(RuleId r, std::vector<int> path, Node n) {
    out.push_back({r, std::move(path), std::move(n)});
  }

  // Each visit works on a subtree; `wrap` rebuilds the whole AST around a
  // replaced subtree and `path` locates it.
  using TermWrap = std::function<Node(const TermPtr&)>;
  using TestWrap = std::function<Node(const TestPtr&)>;

  void term(const TermPtr& t, std::vector<int> path, const TermWrap& wrap) {
    switch (t->k) {
      case Term::K::Var:
      case Term::K::Omega:
        return;
      case Term::K::Lam: {
        if (t->t1->k == Term::K::Omega) {
          add(RuleId::OmegaLam, path, wrap(mk_omega()));
          return;  // λx.Ω → Ω is the only rule touching this node's redex
        }
        auto p = path;
        p.push_back(0);
        std::string binder = t->name;
        term(t->t1, p, [&wrap, binder](const TermPtr& b) { return wrap(mk_lam(binder, b)); });
        return;
      }
      case Term::K::App: {
        const TermPtr& f = t->t1;
        const TermPtr& a = t->t2;
        if (f->k == Term::K::Lam)
          add(RuleId::Beta, path, wrap(substitute(f->t1, f->name, a)));
        else if (f->k == Term::K::Omega)
          add(RuleId::OmegaApp, path, wrap(mk_omega()));
        else if (f->k == Term::K::BarSum)
          add(RuleId::TauBar, path, wrap(rule_taubar(f, a, s)));
        if (!head_only || f->k == Term::K::App) {
          auto p = path;
          p.push_back(0);
          term(f, p, [&wrap, a](const TermPtr& f2) { return wrap(mk_app(f2, a)); });
        }
        if (!head_only) {
          auto p = path;
          p.push_back(1);
          term(a, p, [&wrap, f](const TermPtr& a2) { return wrap(mk_app(f, a2)); });
        }
        return;
      }
      case Term::K::BarSum: {
        for (size_t i = 0; i < t->entries.size(); ++i) {
          auto p = path;
          p.push_back(int(i));
          if (t->entries[i].body->k == Test::K::Sum) {
            add(RuleId::TauBarPlus, p, wrap(rule_taubarplus(t, i)));
            continue;  // (h-cτ̄) requires a non-sum body
          }
          size_t idx = i;
          TermPtr whole = t;
          test(t->entries[i].body, p, [&wrap, whole, idx](const TestPtr& q) {
            std::vector<Term::Entry> es = whole->entries;
            es[idx].body = q;
            return wrap(mk_barsum(std::move(es)));
          });
        }
        return;
      }
    }
  }

  void test(const TestPtr& t, std::vector<int> path, const TestWrap& wrap) {
    switch (t->k) {
      case Test::K::Tau: {
        const TermPtr& m = t->body;
        TypeExpr alpha = t->label;
        if (m->k == Term::K::Lam)
          add(RuleId::Tau, path, wrap(rule_tau(alpha, m, s)));
        else if (m->k == Term::K::Omega)
          add(RuleId::OmegaTau, path, wrap(mk_zero()));
        else if (m->k == Term::K::BarSum)
          add(RuleId::TauTauBar, path, wrap(rule_tautaubar(alpha, m, s, lim)));
        if (!head_only || m->k == Term::K::App) {
          auto p = path;
          p.push_back(0);
          term(m, p, [&wrap, alpha](const TermPtr& m2) { return wrap(mk_tau(alpha, m2)); });
        }
        return;
      }
      case Test::K::Sum: {
        for (size_t i = 0; i < t->items.size(); ++i) {
          auto p = path;
          p.push_back(int(i));
          size_t idx = i;
          TestPtr whole = t;
          test(t->items[i], p, [&wrap, whole, idx](const TestPtr& q) {
            std::vector<TestPtr> is = whole->items;
            is[idx] = q;
            return wrap(mk_sum(std::move(is)));
          });
        }
        return;
      }
      case Test::K::Prod: {
        bool has_sum = false;
        for (const auto& i : t->items)
          if (i->k == Test::K::Sum) has_sum = true;
        if (has_sum) add(RuleId::ProdSum, path, wrap(rule_prodsum(t)));
        for (size_t i = 0; i < t->items.size(); ++i) {
          if (t->items[i]->k == Test::K::Sum) continue;  // (h-c×)/(c×): not a sum
          auto p = path;
          p.push_back(int(i));
          size_t idx = i;
          TestPtr whole = t;
          test(t->items[i], p, [&wrap, whole, idx](const TestPtr& q) {
            std::vector<TestPtr> is = whole->items;
            is[idx] = q;
            return wrap(mk_prod(std::move(is)));
          });
        }
        return;
      }
    }
  }
};

std::vector<Step> collect(const Node& t, Session& s, const ReduceLimits& lim, bool head_only) {
  Collector c{s, lim, head_only, {}};
  if (std::holds_alternative<TermPtr>(t))
    c.term(std::get<TermPtr>(t), {}, [](const TermPtr& x) { return Node(x); });
  else
    c.test(std::get<TestPtr>(t), {}, [](const TestPtr& x) { return Node(x); });
  return std::move(c.out);
}

// mhnf helpers.

bool var_spine(const TermPtr& t) {
  const Term* p = t.get();
  while (p->k == Term::K::App) p = p->t1.get();
  return p->k == Term::K::Var;
}

// Π τ_{αᵢ}(xᵢ M̄ᵢ): a sum-free head-normal test (ε included).
bool value_prod(const TestPtr& q) {
  if (q->k == Test::K::Sum) return false;
  if (q->k == Test::K::Tau) return var_spine(q->body);
  for (const auto& i : q->items) {
    if (i->k != Test::K::Tau || !var_spine(i->body)) return false;
  }
  return true;
}

}  // namespace

std::vector<Step> head_steps(const Node& t, Session& s, const ReduceLimits& lim) {
  return collect(t, s, lim, true);
}

std::optional<Step> step_head(const Node& t, Session& s, const ReduceLimits& lim) {
  auto v = head_steps(t, s, lim);
  if (v.empty()) return std::nullopt;
  return v.front();
}

std::vector<Step> enumerate_steps(const Node& t, Session& s, const ReduceLimits& lim) {
  return collect(t, s, lim, false);
}

bool is_mhnf(const Node& n) {
  if (std::holds_alternative<TermPtr>(n)) {
    TermPtr t = std::get<TermPtr>(n);
    while (t->k == Term::K::Lam) t = t->t1;
    if (var_spine(t)) return true;
    if (t->k == Term::K::BarSum) {
      for (const auto& e : t->entries)
        if (value_prod(e.body)) return true;
    }
    return false;
  }
  TestPtr q = std::get<TestPtr>(n);
  if (q->k == Test::K::Sum) {
    for (const auto& i : q->items)
      if (value_prod(i)) return true;
    return false;
  }
  return value_prod(q);
}

namespace {

ReductionOutcome run(const Node& start, Session& s, size_t fuel, const ReduceLimits& lim,
                     bool allow_beta) {
  ReductionOutcome out;
  out.final_state = start;
  Node cur = start;
  size_t rr = 0;
  while (true) {
    if (is_mhnf(cur)) {
      out.k = ReductionOutcome::K::Converged;
      out.final_state = cur;
      return out;
    }
    auto steps = head_steps(cur, s, lim);
    if (!allow_beta)
      steps.erase(std::remove_if(steps.begin(), steps.end(),
                                 [](const Step& st) { return st.rule == RuleId::Beta; }),
                  steps.end());
    if (steps.empty()) {
      bool is_zero = std::holds_alternative<TestPtr>(cur) &&
                     std::get<TestPtr>(cur)->k == Test::K::Sum &&
                     std::get<TestPtr>(cur)->items.empty();
      out.k = is_zero ? ReductionOutcome::K::Refuted : ReductionOutcome::K::FuelExhausted;
      out.final_state = cur;
      return out;
    }
    if (fuel == 0) {
      out.k = ReductionOutcome::K::FuelExhausted;
      out.final_state = cur;
      return out;
    }
    // Fair "may" scheduling: rotate across the reducible positions.
    const Step& st = steps[rr++ % steps.size()];
    out.trace.push_back(st);
    cur = st.result;
    --fuel;
  }
}

}  // namespace

ReductionOutcome eval(const Node& t, Session& s, size_t fuel, const ReduceLimits& lim) {
  return run(t, s, fuel, lim, true);
}

ReductionOutcome eval_no_beta(const Node& t, Session& s, size_t fuel, const ReduceLimits& lim) {
  return run(t, s, fuel, lim, false);
}

std::optional<BetaSplit> split_beta_first(const Node& t, Session& s, size_t fuel,
                                          const ReduceLimits& lim) {
  // Leftmost-outermost β sequence, capped by fuel; then the shortest prefix
  // whose endpoint may-converges without β.
  std::vector<Step> betas;
  Node cur = t;
  for (size_t i = 0; i < fuel; ++i) {
    auto steps = enumerate_steps(cur, s, lim);
    auto it = std::find_if(steps.begin(), steps.end(),
                           [](const Step& st) { return st.rule == RuleId::Beta; });
    if (it == steps.end()) break;
    betas.push_back(*it);
    cur = it->result;
  }
  for (size_t k = 0; k <= betas.size(); ++k) {
    Node from = k == 0 ? t : betas[k - 1].result;
    // Success means the β-free run finishes: mhnf, or all the way down to 0
    // (the paper's Scott trace ends at 0 with its single β up front).
    auto out = eval_no_beta(from, s, fuel, lim);
    if (out.k != ReductionOutcome::K::FuelExhausted) {
      BetaSplit bs;
      bs.beta_trace.assign(betas.begin(), betas.begin() + k);
      bs.test_trace = std::move(out.trace);
      return bs;
    }
  }
  return std::nullopt;
}

}  // namespace defim
