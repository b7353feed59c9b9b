#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "defim/typing.hpp"

using namespace defim;

static PartialModel load(const char* name) {
  return load_model_file(std::string(DEFIM_MODEL_DIR) + "/" + name + ".dm");
}

TEST_CASE("norm separates p and q on the identity") {
  auto m = load("norm");
  Session s(m);
  auto I = parse_term("\\x. x", m);
  CHECK(check_term({}, I, parse_type("p", m), s).derivable);
  CHECK(!check_term({}, I, parse_type("q", m), s).derivable);
  CHECK(oracle(I, {}, parse_type("p", m), s, 100).k == ReductionOutcome::K::Converged);
  CHECK(oracle(I, {}, parse_type("q", m), s, 100).k == ReductionOutcome::K::Refuted);
}

TEST_CASE("subsumption at variables") {
  auto m = load("norm");
  Session s(m);
  Environment env = Environment{}.extended("x", parse_type("q", m));
  CHECK(check_term(env, parse_term("x", m), parse_type("p", m), s).derivable);  // q <= p
  Environment env2 = Environment{}.extended("x", parse_type("p", m));
  CHECK(!check_term(env2, parse_term("x", m), parse_type("q", m), s).derivable);
}

TEST_CASE("everything has type w") {
  auto m = load("dinf");
  Session s(m);
  CHECK(check_term({}, parse_term("Omega", m), parse_type("w", m), s).derivable);
  CHECK(check_term({}, parse_term("(\\x. x x) (\\x. x x)", m), parse_type("w", m), s)
            .derivable);
  CHECK(!check_term({}, parse_term("Omega", m), parse_type("*", m), s).derivable);
}

TEST_CASE("application needs a meet cut") {
  // (\x. x x) I : * -> * forces the cut (*->*) /\ ((*->*)->(*->*))
  auto m = load("dinf");
  Session s(m);
  auto t = parse_term("(\\x. x x) (\\x. x)", m);
  auto r = check_term({}, t, parse_type("* -> *", m), s);
  REQUIRE(r.derivable);
  CHECK(recheck(r.deriv, s).empty());
}

TEST_CASE("derivations recheck and a tampered one does not") {
  auto m = load("norm");
  Session s(m);
  auto r = check_term({}, parse_term("\\x y. y", m), parse_type("w -> p", m), s);
  REQUIRE(r.derivable);
  REQUIRE(recheck(r.deriv, s).empty());
  auto lie = std::make_shared<Derivation>(*r.deriv);
  lie->target = parse_type("w -> q", m);  // conclusion no longer matches the premises
  CHECK(!recheck(lie, s).empty());
}

TEST_CASE("test judgments: tau, sum picks one, prod needs all") {
  auto m = load("norm");
  Session s(m);
  CHECK(check_test({}, parse_test("tau[p](\\x. x)", m), s).derivable);
  CHECK(!check_test({}, parse_test("tau[q](\\x. x)", m), s).derivable);
  CHECK(check_test({}, parse_test("tau[p](\\x. x) + tau[q](\\x. x)", m), s).derivable);
  CHECK(!check_test({}, parse_test("tau[p](\\x. x) * tau[q](\\x. x)", m), s).derivable);
  CHECK(check_test({}, parse_test("eps", m), s).derivable);
  CHECK(!check_test({}, parse_test("0", m), s).derivable);
}

TEST_CASE("bar sums take label sub-multisets") {
  auto m = load("norm");
  Session s(m);
  // q = p /\ q, so the two-entry bar inhabits q only if both bodies pass
  auto good = parse_term("bar[p](eps) + bar[q](eps)", m);
  CHECK(check_term({}, good, parse_type("q", m), s).derivable);
  auto bad = parse_term("bar[p](eps) + bar[q](0)", m);
  CHECK(check_term({}, bad, parse_type("p", m), s).derivable);   // p-entry alone
  CHECK(!check_term({}, bad, parse_type("q", m), s).derivable);  // needs the 0 body
}

TEST_CASE("oracle on open terms substitutes ebar") {
  auto m = load("norm");
  Session s(m);
  auto x = parse_term("x", m);
  CHECK(oracle(x, {{"x", parse_type("q", m)}}, parse_type("p", m), s, 100).k ==
        ReductionOutcome::K::Converged);
  CHECK(oracle(x, {{"x", parse_type("p", m)}}, parse_type("q", m), s, 100).k ==
        ReductionOutcome::K::Refuted);
}

TEST_CASE("kerth V inhabits b but the oracle loops") {
  auto m = load("kerth");
  Session s(m);
  auto V = parse_term("(\\x y. y (x x)) (\\x y. y (x x))", m);
  CheckOptions opt;
  opt.universe_depth = 1;
  opt.budget = 5000000;
  auto r = check_term({}, V, parse_type("b", m), s, opt);
  REQUIRE(r.derivable);
  CHECK(recheck(r.deriv, s).empty());
  CHECK(oracle(V, {}, parse_type("b", m), s, 5000).k ==
        ReductionOutcome::K::FuelExhausted);
}

TEST_CASE("budget raises rather than lying") {
  auto m = load("norm");
  Session s(m);
  CheckOptions opt;
  opt.budget = 5;
  CHECK_THROWS_AS(
      check_term({}, parse_term("(\\x. x x) (\\x. x x)", m), parse_type("p", m), s, opt),
      ResourceError);
}

TEST_CASE("direct interpretation agrees with the checker on samples") {
  auto m = load("norm");
  Session s(m);
  InterpOptions io;
  io.type_depth = 1;
  auto I = parse_term("\\x. x", m);
  CHECK(interp_member(I, {}, {}, parse_type("p", m), s, io));
  CHECK(!interp_member(I, {}, {}, parse_type("q", m), s, io));
  CHECK(interp_member(parse_term("\\x y. x", m), {}, {}, parse_type("p -> w -> p", m), s, io));
}

TEST_CASE("enumerating a variable lists exactly the order") {
  auto m = load("norm");
  Session s(m);
  InterpOptions io;
  io.type_depth = 1;
  auto entries = interp_enumerate(parse_term("x", m), s, io);
  CHECK(!entries.empty());
  for (const auto& [env, t] : entries) {
    REQUIRE(env.size() == 1);
    CHECK(s.leq(env[0], t));  // [[x]] = { (a, b) | a <= b }
  }
  // and conversely every non-top pair of the universe shows up
  size_t expect = 0;
  for (const auto& a : s.universe(1))
    for (const auto& b : s.universe(1))
      if (!b.is_top() && s.leq(a, b)) ++expect;
  CHECK(entries.size() == expect);
}
