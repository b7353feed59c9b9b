#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "defim/model.hpp"
#include "defim/syntax.hpp"

using namespace defim;

static PartialModel norm() {
  return load_model_file(std::string(DEFIM_MODEL_DIR) + "/norm.dm");
}

TEST_CASE("term round trips") {
  auto m = norm();
  for (const char* t : {
           "\\x. x",
           "\\x y. x y",
           "(\\x. x) (\\y. y)",
           "x (\\y. y x) Omega",
           "ebar[p]",
           "ebar[p] + ebar[q]",
           "bar[q](tau[p](x))",
           "0t",
       }) {
    auto p = parse_term(t, m);
    CHECK(print_term(p) == t);
    CHECK(alpha_eq(parse_term(print_term(p), m), p));
  }
}

TEST_CASE("test round trips") {
  auto m = norm();
  for (const char* t : {
           "0",
           "eps",
           "tau[p](\\x. x)",
           "tau[p](x) + tau[q](y)",
           "tau[p](x) * tau[q](y)",
           "tau[p /\\ q](x)",
       }) {
    auto p = parse_test(t, m);
    CHECK(print_test(p) == t);
  }
}

TEST_CASE("canonical form") {
  auto m = norm();
  // sums and products are multisets: print order is canonical
  CHECK(print_test(parse_test("(tau[p](x) + eps) * tau[q](y)", m)) ==
        "(eps + tau[p](x)) * tau[q](y)");
  CHECK(print_test(parse_test("tau[q](y) + tau[p](x)", m)) == "tau[p](x) + tau[q](y)");
  // nested sums flatten, singletons collapse
  CHECK(print_test(parse_test("(eps + 0) + tau[p](x)", m)) ==
        print_test(parse_test("0 + eps + tau[p](x)", m)));
  // ebar is sugar for a one-entry bar with body eps
  CHECK(print_term(parse_term("bar[p](eps)", m)) == "ebar[p]");
  for (const char* t : {"\\x. x (\\y. x y)", "ebar[p] + bar[q](0)"}) {
    auto once = canonicalize(parse_term(t, m));
    CHECK(print_term(canonicalize(once)) == print_term(once));  // idempotent
  }
}

TEST_CASE("substitution avoids capture") {
  auto m = norm();
  auto body = parse_term("\\y. x y", m);
  auto r = substitute(body, "x", parse_term("y", m));
  CHECK(print_term(r) == "\\y'. y y'");
  CHECK(free_vars(r) == std::set<std::string>{"y"});
  // no-op when the variable is not free
  auto s = substitute(parse_term("\\x. x", m), "x", parse_term("z", m));
  CHECK(alpha_eq(s, parse_term("\\x. x", m)));
}

TEST_CASE("alpha equivalence") {
  auto m = norm();
  CHECK(alpha_eq(parse_term("\\x. x", m), parse_term("\\y. y", m)));
  CHECK(!alpha_eq(parse_term("\\x y. x", m), parse_term("\\x y. y", m)));
  CHECK(alpha_eq(parse_term("\\x. x z", m), parse_term("\\y. y z", m)));
  CHECK(!alpha_eq(parse_term("\\x. x z", m), parse_term("\\y. y w", m)));
  // multiset members that mention outer binders
  CHECK(alpha_eq(parse_test("tau[p](\\x. x) + tau[q](\\x. x x)", m),
                 parse_test("tau[q](\\z. z z) + tau[p](\\w. w)", m)));
}

TEST_CASE("free variables") {
  auto m = norm();
  CHECK(free_vars(parse_term("\\x. x y (\\z. z u)", m)) ==
        std::set<std::string>{"y", "u"});
  CHECK(free_vars(parse_test("tau[p](x) * tau[q](\\x. x)", m)) ==
        std::set<std::string>{"x"});
}

TEST_CASE("parse errors carry positions") {
  auto m = norm();
  auto at = [&](auto f) -> size_t {
    try {
      f();
    } catch (const ParseError& e) {
      return e.pos;
    }
    return size_t(-1);
  };
  CHECK(at([&] { parse_term("(\\x. x", m); }) == 6);
  CHECK(at([&] { parse_term("\\x. x)", m); }) == 5);
  CHECK(at([&] { parse_term("", m); }) != size_t(-1));
  CHECK_THROWS_AS(parse_test("tau[w](x)", m), ParseError);    // w is not a label
  CHECK_THROWS_AS(parse_term("ebar[w]", m), ParseError);
  CHECK_THROWS_AS(parse_test("tau[nosuch](x)", m), ParseError);
  CHECK_THROWS_AS(parse_term("x + y", m), ParseError);  // term sums need bars
}
