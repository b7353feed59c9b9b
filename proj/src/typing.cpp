#include "defim/typing.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace defim {

std::optional<TypeExpr> Environment::lookup(const std::string& x) const {
  for (const auto& [v, t] : binds)
    if (v == x) return t;
  return std::nullopt;
}

Environment Environment::extended(const std::string& x, const TypeExpr& t) const {
  Environment e = *this;
  for (auto& [v, u] : e.binds)
    if (v == x) {
      u = t;
      return e;
    }
  e.binds.push_back({x, t});
  return e;
}

std::string Environment::str() const {
  std::string out;
  for (const auto& [v, t] : binds) {
    if (!out.empty()) out += ", ";
    out += v + ":" + t.str();
  }
  return out;
}

std::string Derivation::str(int indent) const {
  std::ostringstream os;
  os << std::string(indent * 2, ' ') << "[" << rule << "] " << env.str() << " |- "
     << print_node(subject);
  if (target) os << " : " << target->str();
  os << "\n";
  for (const auto& p : premises) os << p->str(indent + 1);
  return os.str();
}

// ---------------------------------------------------------------------------
// Syntax-directed search.

namespace {

struct Checker {
  Session& s;
  const CheckOptions& opt;
  std::vector<TypeExpr> pool;  // app-rule argument candidates
  size_t visits = 0;
  // Memo key: env | subject | target; value nullopt while in progress (a
  // revisit inside its own subtree cannot contribute a finite derivation).
  std::map<std::string, std::optional<CheckResult>> memo;

  void count() {
    if (++visits > opt.budget) throw ResourceError("check: judgment budget exhausted");
  }

  DerivPtr node(std::string rule, const Environment& env, Node subject,
                std::optional<TypeExpr> target, std::vector<TypeExpr> aux,
                std::vector<DerivPtr> prem) {
    auto d = std::make_shared<Derivation>();
    d->rule = std::move(rule);
    d->env = env;
    d->subject = std::move(subject);
    d->target = std::move(target);
    d->aux = std::move(aux);
    d->premises = std::move(prem);
    return d;
  }

  CheckResult term(const Environment& env, const TermPtr& m, const TypeExpr& t) {
    count();
    // Subterm pointers are stable during a search, so identity is a sound key.
    std::string key =
        env.str() + "|" + std::to_string(reinterpret_cast<uintptr_t>(m.get())) + ":" + t.str();
    auto it = memo.find(key);
    if (it != memo.end()) {
      if (!it->second) return {};  // in progress: cut the cycle
      return *it->second;
    }
    memo[key] = std::nullopt;
    CheckResult r = term_raw(env, m, t);
    memo[key] = r;
    return r;
  }

  CheckResult term_raw(const Environment& env, const TermPtr& m, const TypeExpr& t) {
    // Γ ⊢ M : ω always holds (empty intersection).
    if (s.leq(s.top(), t)) return {true, node("top", env, m, t, {}, {})};
    switch (m->k) {
      case Term::K::Var: {
        auto bound = env.lookup(m->name);
        if (bound && s.leq(*bound, t)) return {true, node("ax", env, m, t, {}, {})};
        return {};
      }
      case Term::K::Omega:
        return {};  // ⟦Ω⟧ only reaches ω, handled above
      case Term::K::Lam: {
        // Extensional λ: for every (β,γ) ∈ ext(target), the body inhabits γ
        // under x:β.  (Equivalent to λ + ∧ + subsumption.)
        std::vector<DerivPtr> prem;
        for (const auto& [beta, gamma] : s.ext_of(t)) {
          CheckResult r = term(env.extended(m->name, beta), m->t1, gamma);
          if (!r.derivable) return {};
          prem.push_back(r.deriv);
        }
        return {true, node("lam", env, m, t, {}, std::move(prem))};
      }
      case Term::K::App: {
        // Argument first: its judgments are independent of the result type,
        // so they memoize across every target this subject is tried at.
        for (const auto& cand : pool) {
          CheckResult ra = term(env, m->t2, cand);
          if (!ra.derivable) continue;
          CheckResult rf = term(env, m->t1, TypeExpr::arrow(cand, t));
          if (!rf.derivable) continue;
          return {true, node("app", env, m, t, {cand}, {rf.deriv, ra.deriv})};
        }
        return {};
      }
      case Term::K::BarSum: {
        // Sub-multisets whose label-meet is below the target; all chosen
        // bodies must succeed.
        size_t n = m->entries.size();
        if (n > 16) throw ResourceError("check: bar-sum too wide");
        for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
          std::vector<TypeExpr> labels;
          for (size_t i = 0; i < n; ++i)
            if (mask & (size_t(1) << i)) labels.push_back(m->entries[i].label);
          if (!s.leq(TypeExpr::meet_all(labels), t)) continue;
          std::vector<DerivPtr> prem;
          bool ok = true;
          for (size_t i = 0; i < n && ok; ++i)
            if (mask & (size_t(1) << i)) {
              CheckResult r = test(env, m->entries[i].body);
              if (!r.derivable)
                ok = false;
              else
                prem.push_back(r.deriv);
            }
          if (ok) return {true, node("barsum", env, m, t, labels, std::move(prem))};
        }
        return {};
      }
    }
    return {};
  }

  CheckResult test(const Environment& env, const TestPtr& q) {
    count();
    std::string key = env.str() + "|" + std::to_string(reinterpret_cast<uintptr_t>(q.get()));
    auto it = memo.find(key);
    if (it != memo.end()) {
      if (!it->second) return {};
      return *it->second;
    }
    memo[key] = std::nullopt;
    CheckResult r = test_raw(env, q);
    memo[key] = r;
    return r;
  }

  CheckResult test_raw(const Environment& env, const TestPtr& q) {
    switch (q->k) {
      case Test::K::Tau: {
        CheckResult r = term(env, q->body, q->label);
        if (!r.derivable) return {};
        return {true, node("tau", env, q, std::nullopt, {}, {r.deriv})};
      }
      case Test::K::Sum: {
        for (const auto& i : q->items) {
          CheckResult r = test(env, i);
          if (r.derivable) return {true, node("sum", env, q, std::nullopt, {}, {r.deriv})};
        }
        return {};
      }
      case Test::K::Prod: {
        std::vector<DerivPtr> prem;
        for (const auto& i : q->items) {
          CheckResult r = test(env, i);
          if (!r.derivable) return {};
          prem.push_back(r.deriv);
        }
        return {true, node("prod", env, q, std::nullopt, {}, std::move(prem))};
      }
    }
    return {};
  }
};

std::vector<TypeExpr> candidate_pool(const Node& subject, const Environment& env, Session& s,
                                     const CheckOptions& opt) {
  std::vector<TypeExpr> pool = s.universe(opt.universe_depth, opt.universe_cap);
  // Labels occurring in the subject, and the environment types.
  std::vector<TypeExpr> extra;
  std::function<void(const TermPtr&)> vt;
  std::function<void(const TestPtr&)> vq;
  vt = [&](const TermPtr& t) {
    switch (t->k) {
      case Term::K::Lam:
        vt(t->t1);
        break;
      case Term::K::App:
        vt(t->t1);
        vt(t->t2);
        break;
      case Term::K::BarSum:
        for (const auto& e : t->entries) {
          extra.push_back(e.label);
          vq(e.body);
        }
        break;
      default:
        break;
    }
  };
  vq = [&](const TestPtr& q) {
    if (q->k == Test::K::Tau) {
      extra.push_back(q->label);
      vt(q->body);
    } else {
      for (const auto& i : q->items) vq(i);
    }
  };
  if (std::holds_alternative<TermPtr>(subject))
    vt(std::get<TermPtr>(subject));
  else
    vq(std::get<TestPtr>(subject));
  for (const auto& [v, t] : env.binds) extra.push_back(t);
  std::set<std::string> seen;
  for (const auto& p : pool) seen.insert(p.str());
  for (const auto& t : extra)
    if (seen.insert(t.str()).second) pool.push_back(t);
  // Application cuts are often meets of universe elements (e.g. the type of
  // a self-applied argument), so close the pool under binary meets once.
  size_t base = pool.size();
  for (size_t i = 0; i < base; ++i)
    for (size_t j = i + 1; j < base; ++j) {
      TypeExpr mt = s.meet(pool[i], pool[j]);
      if (seen.insert(mt.str()).second) pool.push_back(mt);
    }
  return pool;
}

}  // namespace

CheckResult check_term(const Environment& env, const TermPtr& m, const TypeExpr& target,
                       Session& s, const CheckOptions& opt) {
  Checker c{s, opt, candidate_pool(m, env, s, opt)};
  return c.term(env, m, target);
}

CheckResult check_test(const Environment& env, const TestPtr& q, Session& s,
                       const CheckOptions& opt) {
  Checker c{s, opt, candidate_pool(q, env, s, opt)};
  return c.test(env, q);
}

// ---------------------------------------------------------------------------
// Derivation re-checking.

namespace {

void recheck_node(const DerivPtr& d, Session& s, std::vector<std::string>& out) {
  auto fail = [&](const std::string& msg) { out.push_back("[" + d->rule + "] " + msg); };
  for (const auto& p : d->premises) recheck_node(p, s, out);

  if (!d->target) {  // test judgment
    if (!std::holds_alternative<TestPtr>(d->subject)) {
      fail("test rule on a term subject");
      return;
    }
    TestPtr q = std::get<TestPtr>(d->subject);
    if (d->rule == "tau") {
      if (q->k != Test::K::Tau || d->premises.size() != 1 ||
          !d->premises[0]->target || !(*d->premises[0]->target == q->label) ||
          !alpha_eq(d->premises[0]->subject, Node(q->body)))
        fail("tau premise mismatch");
    } else if (d->rule == "sum") {
      if (q->k != Test::K::Sum || d->premises.size() != 1)
        return fail("sum needs one summand premise");
      bool found = false;
      for (const auto& i : q->items)
        if (alpha_eq(d->premises[0]->subject, Node(i))) found = true;
      if (!found) fail("sum premise is not a summand");
    } else if (d->rule == "prod") {
      if (q->k != Test::K::Prod || d->premises.size() != q->items.size())
        return fail("prod premise count mismatch");
      for (size_t i = 0; i < q->items.size(); ++i)
        if (!alpha_eq(d->premises[i]->subject, Node(q->items[i])))
          fail("prod premise mismatch");
    } else {
      fail("unknown test rule");
    }
    return;
  }

  if (!std::holds_alternative<TermPtr>(d->subject)) {
    fail("term rule on a test subject");
    return;
  }
  TermPtr m = std::get<TermPtr>(d->subject);
  const TypeExpr& t = *d->target;
  if (d->rule == "top") {
    if (!s.leq(s.top(), t)) fail("target not equivalent to w");
  } else if (d->rule == "ax") {
    auto bound = d->env.lookup(m->name);
    if (m->k != Term::K::Var || !bound || !s.leq(*bound, t))
      fail("axiom+subsumption side condition fails");
  } else if (d->rule == "lam") {
    if (m->k != Term::K::Lam) return fail("lam rule on non-abstraction");
    auto pairs = s.ext_of(t);
    if (d->premises.size() != pairs.size()) return fail("lam premise count mismatch");
    for (size_t i = 0; i < pairs.size(); ++i) {
      const auto& p = d->premises[i];
      if (!p->target || !(*p->target == pairs[i].second))
        fail("lam premise target mismatch");
      auto bound = p->env.lookup(m->name);
      if (!bound || !(*bound == pairs[i].first)) fail("lam premise binder type mismatch");
    }
  } else if (d->rule == "app") {
    if (m->k != Term::K::App || d->aux.size() != 1 || d->premises.size() != 2)
      return fail("app shape mismatch");
    const auto& pf = d->premises[0];
    const auto& pa = d->premises[1];
    if (!pf->target || !(*pf->target == TypeExpr::arrow(d->aux[0], t)))
      fail("app function premise type mismatch");
    if (!pa->target || !(*pa->target == d->aux[0])) fail("app argument premise mismatch");
  } else if (d->rule == "barsum") {
    if (m->k != Term::K::BarSum) return fail("barsum rule on non-sum");
    // aux lists the chosen labels; their meet must be below the target and
    // each chosen body must be a premise.
    if (!s.leq(TypeExpr::meet_all(d->aux), t)) fail("label meet not below target");
    if (d->premises.size() != d->aux.size()) return fail("barsum premise count mismatch");
    for (size_t i = 0; i < d->aux.size(); ++i) {
      bool ok = false;
      for (const auto& e : m->entries)
        if (e.label == d->aux[i] && alpha_eq(d->premises[i]->subject, Node(e.body))) ok = true;
      if (!ok) fail("barsum premise does not match a chosen entry");
    }
  } else {
    fail("unknown term rule");
  }
}

}  // namespace

std::vector<std::string> recheck(const DerivPtr& d, Session& s) {
  std::vector<std::string> out;
  recheck_node(d, s, out);
  return out;
}

// ---------------------------------------------------------------------------
// Definability oracle.

ReductionOutcome oracle(const TermPtr& m,
                        const std::vector<std::pair<std::string, TypeExpr>>& env_values,
                        const TypeExpr& target, Session& s, size_t fuel) {
  TermPtr inst = m;
  for (const auto& [x, a] : env_values)
    inst = substitute(inst, x, a.is_top() ? mk_barsum({}) : mk_ebar(a));
  return eval(Node(mk_tau(target, inst)), s, fuel);
}

}  // namespace defim
