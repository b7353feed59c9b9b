#include "defim/syntax.hpp"

#include <algorithm>
#include <functional>

namespace defim {

namespace {

TermPtr make(Term t) { return std::make_shared<Term>(std::move(t)); }
TestPtr make(Test t) { return std::make_shared<Test>(std::move(t)); }

}  // namespace

TermPtr mk_var(const std::string& name) {
  Term t;
  t.k = Term::K::Var;
  t.name = name;
  return make(std::move(t));
}

TermPtr mk_lam(const std::string& binder, TermPtr body) {
  Term t;
  t.k = Term::K::Lam;
  t.name = binder;
  t.t1 = std::move(body);
  return make(std::move(t));
}

TermPtr mk_app(TermPtr fun, TermPtr arg) {
  Term t;
  t.k = Term::K::App;
  t.t1 = std::move(fun);
  t.t2 = std::move(arg);
  return make(std::move(t));
}

TermPtr mk_omega() {
  Term t;
  t.k = Term::K::Omega;
  return make(std::move(t));
}

TermPtr mk_barsum(std::vector<Term::Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Term::Entry& a, const Term::Entry& b) {
    if (a.label.str() != b.label.str()) return a.label.str() < b.label.str();
    return print_test(a.body) < print_test(b.body);
  });
  Term t;
  t.k = Term::K::BarSum;
  t.entries = std::move(entries);
  return make(std::move(t));
}

TermPtr mk_ebar(const TypeExpr& label) { return mk_barsum({{label, mk_eps()}}); }

TestPtr mk_tau(const TypeExpr& label, TermPtr body) {
  Test t;
  t.k = Test::K::Tau;
  t.label = label;
  t.body = std::move(body);
  return make(std::move(t));
}

TestPtr mk_sum(std::vector<TestPtr> items) {
  std::vector<TestPtr> flat;
  for (auto& i : items) {
    if (i->k == Test::K::Sum)
      flat.insert(flat.end(), i->items.begin(), i->items.end());
    else
      flat.push_back(i);
  }
  if (flat.size() == 1) return flat[0];
  std::sort(flat.begin(), flat.end(),
            [](const TestPtr& a, const TestPtr& b) { return print_test(a) < print_test(b); });
  Test t;
  t.k = Test::K::Sum;
  t.items = std::move(flat);
  return make(std::move(t));
}

TestPtr mk_prod(std::vector<TestPtr> items) {
  std::vector<TestPtr> flat;
  for (auto& i : items) {
    if (i->k == Test::K::Prod)
      flat.insert(flat.end(), i->items.begin(), i->items.end());
    else
      flat.push_back(i);
  }
  if (flat.size() == 1) return flat[0];
  std::sort(flat.begin(), flat.end(),
            [](const TestPtr& a, const TestPtr& b) { return print_test(a) < print_test(b); });
  Test t;
  t.k = Test::K::Prod;
  t.items = std::move(flat);
  return make(std::move(t));
}

TestPtr mk_eps() { return mk_prod({}); }
TestPtr mk_zero() { return mk_sum({}); }

// ---------------------------------------------------------------------------
// Printing.

namespace {

bool is_atom_print(const Term& t) {
  switch (t.k) {
    case Term::K::Var:
    case Term::K::Omega:
      return true;
    case Term::K::BarSum:
      return t.entries.size() <= 1;  // `0t` and `bar[..](..)` read as atoms
    default:
      return false;
  }
}

}  // namespace

std::string print_term(const TermPtr& t) {
  switch (t->k) {
    case Term::K::Var:
      return t->name;
    case Term::K::Omega:
      return "Omega";
    case Term::K::Lam: {
      std::string binders = t->name;
      TermPtr body = t->t1;
      while (body->k == Term::K::Lam) {
        binders += " " + body->name;
        body = body->t1;
      }
      return "\\" + binders + ". " + print_term(body);
    }
    case Term::K::App: {
      std::string f = print_term(t->t1);
      if (!is_atom_print(*t->t1) && t->t1->k != Term::K::App) f = "(" + f + ")";
      std::string a = print_term(t->t2);
      if (!is_atom_print(*t->t2)) a = "(" + a + ")";
      return f + " " + a;
    }
    case Term::K::BarSum: {
      if (t->entries.empty()) return "0t";
      std::string out;
      for (const auto& e : t->entries) {
        if (!out.empty()) out += " + ";
        if (e.body->k == Test::K::Prod && e.body->items.empty())
          out += "ebar[" + e.label.str() + "]";
        else
          out += "bar[" + e.label.str() + "](" + print_test(e.body) + ")";
      }
      return out;
    }
  }
  return "?";
}

std::string print_test(const TestPtr& t) {
  switch (t->k) {
    case Test::K::Tau:
      return "tau[" + t->label.str() + "](" + print_term(t->body) + ")";
    case Test::K::Sum: {
      if (t->items.empty()) return "0";
      std::string out;
      for (const auto& i : t->items) {
        if (!out.empty()) out += " + ";
        out += print_test(i);
      }
      return out;
    }
    case Test::K::Prod: {
      if (t->items.empty()) return "eps";
      std::string out;
      for (const auto& i : t->items) {
        if (!out.empty()) out += " * ";
        std::string s = print_test(i);
        if (i->k == Test::K::Sum) s = "(" + s + ")";
        out += s;
      }
      return out;
    }
  }
  return "?";
}

std::string print_node(const Node& n) {
  if (std::holds_alternative<TermPtr>(n)) return print_term(std::get<TermPtr>(n));
  return print_test(std::get<TestPtr>(n));
}

// ---------------------------------------------------------------------------
// Canonicalization (rebuild through the constructors).

TermPtr canonicalize(const TermPtr& t) {
  switch (t->k) {
    case Term::K::Var:
    case Term::K::Omega:
      return t;
    case Term::K::Lam:
      return mk_lam(t->name, canonicalize(t->t1));
    case Term::K::App:
      return mk_app(canonicalize(t->t1), canonicalize(t->t2));
    case Term::K::BarSum: {
      std::vector<Term::Entry> es;
      for (const auto& e : t->entries) es.push_back({e.label, canonicalize(e.body)});
      return mk_barsum(std::move(es));
    }
  }
  return t;
}

TestPtr canonicalize(const TestPtr& t) {
  switch (t->k) {
    case Test::K::Tau:
      return mk_tau(t->label, canonicalize(t->body));
    case Test::K::Sum: {
      std::vector<TestPtr> is;
      for (const auto& i : t->items) is.push_back(canonicalize(i));
      return mk_sum(std::move(is));
    }
    case Test::K::Prod: {
      std::vector<TestPtr> is;
      for (const auto& i : t->items) is.push_back(canonicalize(i));
      return mk_prod(std::move(is));
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Free variables and substitution.

namespace {

void fv_term(const TermPtr& t, std::vector<std::string>& bound, std::set<std::string>& out);

void fv_test(const TestPtr& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  if (t->k == Test::K::Tau) {
    fv_term(t->body, bound, out);
  } else {
    for (const auto& i : t->items) fv_test(i, bound, out);
  }
}

void fv_term(const TermPtr& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (t->k) {
    case Term::K::Var:
      if (std::find(bound.begin(), bound.end(), t->name) == bound.end()) out.insert(t->name);
      break;
    case Term::K::Lam:
      bound.push_back(t->name);
      fv_term(t->t1, bound, out);
      bound.pop_back();
      break;
    case Term::K::App:
      fv_term(t->t1, bound, out);
      fv_term(t->t2, bound, out);
      break;
    case Term::K::BarSum:
      for (const auto& e : t->entries) fv_test(e.body, bound, out);
      break;
    case Term::K::Omega:
      break;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string n = base;
  while (avoid.count(n)) n += "'";
  return n;
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  fv_term(t, bound, out);
  return out;
}

std::set<std::string> free_vars(const TestPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  fv_test(t, bound, out);
  return out;
}

TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& n) {
  switch (m->k) {
    case Term::K::Var:
      return m->name == x ? n : m;
    case Term::K::Omega:
      return m;
    case Term::K::App:
      return mk_app(substitute(m->t1, x, n), substitute(m->t2, x, n));
    case Term::K::Lam: {
      if (m->name == x) return m;
      auto fvn = free_vars(n);
      if (fvn.count(m->name) && free_vars(m->t1).count(x)) {
        auto avoid = fvn;
        avoid.insert(x);
        for (const auto& v : free_vars(m->t1)) avoid.insert(v);
        std::string y = fresh_name(m->name, avoid);
        TermPtr body = substitute(m->t1, m->name, mk_var(y));
        return mk_lam(y, substitute(body, x, n));
      }
      return mk_lam(m->name, substitute(m->t1, x, n));
    }
    case Term::K::BarSum: {
      std::vector<Term::Entry> es;
      for (const auto& e : m->entries) es.push_back({e.label, substitute(e.body, x, n)});
      return mk_barsum(std::move(es));
    }
  }
  return m;
}

TestPtr substitute(const TestPtr& q, const std::string& x, const TermPtr& n) {
  switch (q->k) {
    case Test::K::Tau:
      return mk_tau(q->label, substitute(q->body, x, n));
    case Test::K::Sum: {
      std::vector<TestPtr> is;
      for (const auto& i : q->items) is.push_back(substitute(i, x, n));
      return mk_sum(std::move(is));
    }
    case Test::K::Prod: {
      std::vector<TestPtr> is;
      for (const auto& i : q->items) is.push_back(substitute(i, x, n));
      return mk_prod(std::move(is));
    }
  }
  return q;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence: recursive matching with a binder correspondence;
// multiset children are matched by backtracking (sums are small).

namespace {

using Env = std::vector<std::pair<std::string, std::string>>;

bool aeq_term(const TermPtr& a, const TermPtr& b, Env& env);

bool aeq_test(const TestPtr& a, const TestPtr& b, Env& env) {
  if (a->k != b->k) return false;
  if (a->k == Test::K::Tau)
    return a->label == b->label && aeq_term(a->body, b->body, env);
  if (a->items.size() != b->items.size()) return false;
  std::vector<bool> used(b->items.size(), false);
  std::function<bool(size_t)> match = [&](size_t i) {
    if (i == a->items.size()) return true;
    for (size_t j = 0; j < b->items.size(); ++j) {
      if (used[j]) continue;
      if (aeq_test(a->items[i], b->items[j], env)) {
        used[j] = true;
        if (match(i + 1)) return true;
        used[j] = false;
      }
    }
    return false;
  };
  return match(0);
}

bool aeq_term(const TermPtr& a, const TermPtr& b, Env& env) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case Term::K::Omega:
      return true;
    case Term::K::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == a->name || it->second == b->name)
          return it->first == a->name && it->second == b->name;
      }
      return a->name == b->name;
    }
    case Term::K::Lam: {
      env.push_back({a->name, b->name});
      bool r = aeq_term(a->t1, b->t1, env);
      env.pop_back();
      return r;
    }
    case Term::K::App:
      return aeq_term(a->t1, b->t1, env) && aeq_term(a->t2, b->t2, env);
    case Term::K::BarSum: {
      if (a->entries.size() != b->entries.size()) return false;
      std::vector<bool> used(b->entries.size(), false);
      std::function<bool(size_t)> match = [&](size_t i) {
        if (i == a->entries.size()) return true;
        for (size_t j = 0; j < b->entries.size(); ++j) {
          if (used[j]) continue;
          if (a->entries[i].label == b->entries[j].label &&
              aeq_test(a->entries[i].body, b->entries[j].body, env)) {
            used[j] = true;
            if (match(i + 1)) return true;
            used[j] = false;
          }
        }
        return false;
      };
      return match(0);
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  Env env;
  return aeq_term(a, b, env);
}

bool alpha_eq(const TestPtr& a, const TestPtr& b) {
  Env env;
  return aeq_test(a, b, env);
}

bool alpha_eq(const Node& a, const Node& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<TermPtr>(a))
    return alpha_eq(std::get<TermPtr>(a), std::get<TermPtr>(b));
  return alpha_eq(std::get<TestPtr>(a), std::get<TestPtr>(b));
}

// ---------------------------------------------------------------------------
// Parsing.

namespace {

struct Parser {
  const std::string& text;
  const PartialModel& model;
  size_t pos = 0;

  void ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                 text[pos] == '\r'))
      ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos, msg); }
  bool eat(char c) {
    ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  static bool ident_start(char c) { return isalpha((unsigned char)c) || c == '_'; }
  static bool ident_char(char c) {
    return isalnum((unsigned char)c) || c == '_' || c == '\'';
  }
  std::string peek_word() {
    ws();
    size_t p = pos;
    if (p < text.size() && text.compare(p, 2, "0t") == 0 &&
        (p + 2 >= text.size() || !ident_char(text[p + 2])))
      return "0t";
    if (p < text.size() && text[p] == '0' && (p + 1 >= text.size() || !ident_char(text[p + 1])))
      return "0";
    if (p >= text.size() || !ident_start(text[p])) return "";
    std::string w;
    while (p < text.size() && ident_char(text[p])) w += text[p++];
    return w;
  }
  std::string take_word() {
    std::string w = peek_word();
    ws();
    pos += w.size();
    return w;
  }

  TypeExpr bracket_label() {
    expect('[');
    size_t start = pos;
    while (pos < text.size() && text[pos] != ']') ++pos;
    if (pos == text.size()) fail("unterminated '[' in label");
    std::string ty = text.substr(start, pos - start);
    ++pos;  // ']'
    TypeExpr t;
    try {
      t = parse_type(ty, model);
    } catch (const ModelError& e) {
      pos = start;
      fail(std::string("bad label: ") + e.what());
    }
    if (t.is_top()) {
      pos = start;
      fail("label error: w is not a valid tau/bar label");
    }
    return t;
  }

  // --- terms ---

  TermPtr term() {
    TermPtr first = app_seq();
    ws();
    if (pos < text.size() && text[pos] == '+') {
      std::vector<Term::Entry> entries;
      auto merge = [&](const TermPtr& t) {
        if (t->k != Term::K::BarSum) fail("term sums may only combine bar[...] summands");
        for (const auto& e : t->entries) entries.push_back(e);
      };
      merge(first);
      while (eat('+')) merge(app_seq());
      return mk_barsum(std::move(entries));
    }
    return first;
  }

  TermPtr app_seq() {
    ws();
    TermPtr acc;
    while (true) {
      ws();
      if (pos < text.size() && text[pos] == '\\') {
        TermPtr l = lambda();
        acc = acc ? mk_app(acc, l) : l;
        return acc;  // a lambda extends to the end of the sequence
      }
      std::optional<TermPtr> a = try_atom();
      if (!a) break;
      acc = acc ? mk_app(acc, *a) : *a;
    }
    if (!acc) fail("expected a term");
    return acc;
  }

  TermPtr lambda() {
    expect('\\');
    std::vector<std::string> binders;
    while (true) {
      std::string w = peek_word();
      if (w.empty() || w == "0" || w == "0t") break;
      binders.push_back(take_word());
    }
    if (binders.empty()) fail("expected binder after '\\'");
    expect('.');
    TermPtr body = term();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = mk_lam(*it, body);
    return body;
  }

  std::optional<TermPtr> try_atom() {
    ws();
    if (pos >= text.size()) return std::nullopt;
    if (text[pos] == '(') {
      ++pos;
      TermPtr t = term();
      expect(')');
      return t;
    }
    std::string w = peek_word();
    if (w.empty()) return std::nullopt;
    if (w == "Omega") {
      take_word();
      return mk_omega();
    }
    if (w == "0t") {
      take_word();
      return mk_barsum({});
    }
    if (w == "ebar") {
      take_word();
      return mk_ebar(bracket_label());
    }
    if (w == "bar") {
      take_word();
      TypeExpr l = bracket_label();
      expect('(');
      TestPtr q = test();
      expect(')');
      return mk_barsum({{l, q}});
    }
    if (w == "0" || w == "eps" || w == "tau") return std::nullopt;  // test keywords
    take_word();
    return mk_var(w);
  }

  // --- tests ---

  TestPtr test() {
    std::vector<TestPtr> sums;
    sums.push_back(prod_seq());
    while (eat('+')) sums.push_back(prod_seq());
    return mk_sum(std::move(sums));
  }

  TestPtr prod_seq() {
    std::vector<TestPtr> ps;
    ps.push_back(test_atom());
    while (eat('*')) ps.push_back(test_atom());
    return mk_prod(std::move(ps));
  }

  TestPtr test_atom() {
    ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      TestPtr t = test();
      expect(')');
      return t;
    }
    std::string w = peek_word();
    if (w == "eps") {
      take_word();
      return mk_eps();
    }
    if (w == "0") {
      take_word();
      return mk_zero();
    }
    if (w == "tau") {
      take_word();
      TypeExpr l = bracket_label();
      expect('(');
      TermPtr m = term();
      expect(')');
      return mk_tau(l, m);
    }
    fail("expected a test (eps, 0, tau[...], or parentheses)");
  }

  void end() {
    ws();
    if (pos != text.size()) fail("unexpected trailing input");
  }
};

}  // namespace

TermPtr parse_term(const std::string& text, const PartialModel& m) {
  Parser p{text, m};
  TermPtr t = p.term();
  p.end();
  return t;
}

TestPtr parse_test(const std::string& text, const PartialModel& m) {
  Parser p{text, m};
  TestPtr t = p.test();
  p.end();
  return t;
}

}  // namespace defim
