#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "defim/reduce.hpp"

using namespace defim;

static PartialModel load(const char* name) {
  return load_model_file(std::string(DEFIM_MODEL_DIR) + "/" + name + ".dm");
}

static std::string rules(const ReductionOutcome& o) {
  std::string out;
  for (const auto& st : o.trace) {
    if (!out.empty()) out += " ";
    out += rule_name(st.rule);
  }
  return out;
}

TEST_CASE("park trace") {
  auto m = load("pinf");
  Session s(m);
  auto o = eval(Node(parse_test("tau[*](\\x. x x)", m)), s, 100);
  CHECK(o.k == ReductionOutcome::K::Converged);
  CHECK(print_node(o.final_state) == "eps");
  CHECK(rules(o) == "tau taubar tautaubar tautaubar");
}

TEST_CASE("scott traces") {
  auto m = load("dinf");
  Session s(m);
  auto good = eval(Node(parse_test("tau[*]((\\x y. x y) ebar[*])", m)), s, 100);
  CHECK(good.k == ReductionOutcome::K::Converged);
  CHECK(rules(good) == "beta tau taubar tautaubar");
  auto bad = eval(Node(parse_test("tau[*]((\\x y. y x) ebar[*])", m)), s, 100);
  CHECK(bad.k == ReductionOutcome::K::Refuted);
  CHECK(print_node(bad.final_state) == "0");
  CHECK(rules(bad) == "beta tau taubar tautaubar");
}

TEST_CASE("norm traces") {
  auto m = load("norm");
  Session s(m);
  auto p = eval(Node(parse_test("tau[p](\\x. x)", m)), s, 100);
  CHECK(p.k == ReductionOutcome::K::Converged);
  CHECK(rules(p) == "tau tautaubar");
  auto q = eval(Node(parse_test("tau[q](\\x. x)", m)), s, 100);
  CHECK(q.k == ReductionOutcome::K::Refuted);
}

TEST_CASE("z traces") {
  auto m = load("z5");
  Session s(m);
  auto a = eval(Node(parse_test("tau[z2](ebar[z0] Omega Omega)", m)), s, 100);
  CHECK(a.k == ReductionOutcome::K::Converged);
  CHECK(rules(a) == "taubar taubar tautaubar");
  auto b = eval(Node(parse_test("tau[z2](ebar[z3] Omega)", m)), s, 100);
  CHECK(b.k == ReductionOutcome::K::Refuted);
}

TEST_CASE("omega rules") {
  auto m = load("dinf");
  Session s(m);
  auto o1 = eval(Node(parse_term("\\x. Omega", m)), s, 10);
  CHECK(print_node(o1.final_state) == "Omega");
  auto o2 = eval(Node(parse_term("Omega (\\x. x)", m)), s, 10);
  CHECK(print_node(o2.final_state) == "Omega");
  auto o3 = eval(Node(parse_test("tau[*](Omega)", m)), s, 10);
  CHECK(o3.k == ReductionOutcome::K::Refuted);
  CHECK(print_node(o3.final_state) == "0");
}

TEST_CASE("mhnf recognizer") {
  auto m = load("norm");
  Session s(m);
  CHECK(is_mhnf(Node(parse_term("\\x y. x Omega", m))));
  CHECK(is_mhnf(Node(parse_term("x (\\y. y)", m))));
  CHECK(!is_mhnf(Node(parse_term("(\\x. x) y", m))));
  CHECK(!is_mhnf(Node(parse_term("Omega", m))));
  CHECK(is_mhnf(Node(parse_test("eps", m))));
  CHECK(is_mhnf(Node(parse_test("tau[p](x)", m))));
  CHECK(!is_mhnf(Node(parse_test("tau[p](\\x. x)", m))));
  CHECK(!is_mhnf(Node(parse_test("0", m))));
  CHECK(is_mhnf(Node(parse_term("ebar[p]", m))));
  // a sum is mhnf as soon as one summand is
  CHECK(is_mhnf(Node(parse_test("tau[p](x) + tau[q](\\y. y)", m))));
}

TEST_CASE("head vs contextual step sets") {
  auto m = load("dinf");
  Session s(m);
  auto n = Node(parse_test("tau[*]((\\x. x) ((\\y. y) (\\z. z)))", m));
  CHECK(head_steps(n, s).size() == 1);       // only the outer beta is head
  CHECK(enumerate_steps(n, s).size() == 2);  // inner beta too
  auto st = step_head(n, s);
  REQUIRE(st);
  CHECK(st->rule == RuleId::Beta);
  CHECK(st->path == std::vector<int>{0});
  // mhnf has no head steps but may still have contextual ones
  auto h = Node(parse_term("x ((\\y. y) z)", m));
  CHECK(head_steps(h, s).empty());
  CHECK(enumerate_steps(h, s).size() == 1);
}

TEST_CASE("empty sum refutes, stuck non-mhnf exhausts") {
  auto m = load("dinf");
  Session s(m);
  CHECK(eval(Node(parse_test("0", m)), s, 10).k == ReductionOutcome::K::Refuted);
  // beta-blocked test neither converges nor refutes
  auto blocked = eval_no_beta(Node(parse_test("tau[*]((\\x y. x y) ebar[*])", m)), s, 100);
  CHECK(blocked.k == ReductionOutcome::K::FuelExhausted);
}

TEST_CASE("divergence exhausts fuel") {
  auto m = load("dinf");
  Session s(m);
  auto o = eval(Node(parse_term("(\\x. x x) (\\x. x x)", m)), s, 50);
  CHECK(o.k == ReductionOutcome::K::FuelExhausted);
  CHECK(o.trace.size() == 50);
}

TEST_CASE("beta-first split on the scott example") {
  auto m = load("dinf");
  Session s(m);
  auto sp = split_beta_first(Node(parse_test("tau[*]((\\x y. x y) ebar[*])", m)), s, 1000);
  REQUIRE(sp);
  for (const auto& st : sp->beta_trace) CHECK(st.rule == RuleId::Beta);
  for (const auto& st : sp->test_trace) CHECK(st.rule != RuleId::Beta);
  CHECK(!sp->beta_trace.empty());
  // no split for a genuinely diverging term
  auto none = split_beta_first(Node(parse_test("tau[*]((\\x. x x) (\\x. x x))", m)), s, 200);
  CHECK(!none);
}

TEST_CASE("replaying a trace reproduces the endpoint") {
  auto m = load("z5");
  Session s(m);
  auto n = Node(parse_test("tau[z2](ebar[z0] Omega Omega)", m));
  auto o = eval(n, s, 100);
  Node cur = n;
  for (const auto& st : o.trace) {
    auto steps = head_steps(cur, s);
    bool found = false;
    for (const auto& c : steps)
      if (c.rule == st.rule && c.path == st.path && alpha_eq(c.result, st.result)) {
        cur = c.result;
        found = true;
        break;
      }
    CHECK(found);
  }
  CHECK(alpha_eq(cur, o.final_state));
}
