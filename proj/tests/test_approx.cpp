#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "defim/approx.hpp"

using namespace defim;

static PartialModel load(const char* name) {
  return load_model_file(std::string(DEFIM_MODEL_DIR) + "/" + name + ".dm");
}

TEST_CASE("direct approximant") {
  auto m = load("dinf");
  auto d = [&](const char* t) { return print_term(direct_approximant(parse_term(t, m))); };
  CHECK(d("(\\x. x x) (\\x. x x)") == "Omega");
  CHECK(d("\\x y. x ((\\z. z) y)") == "\\x y. x Omega");
  CHECK(d("x (\\y. y) ((\\y. y) z)") == "x (\\y. y) Omega");
  CHECK(d("Omega") == "Omega");
  CHECK(d("\\x. Omega") == "Omega");  // lambdas over an Omega head collapse too
  CHECK_THROWS_AS(direct_approximant(parse_term("ebar[*]", m)), ModelError);
}

TEST_CASE("bohm normal recognizer") {
  auto m = load("dinf");
  CHECK(is_bohm_normal(parse_term("Omega", m)));
  CHECK(is_bohm_normal(parse_term("\\x. x (y Omega)", m)));
  CHECK(!is_bohm_normal(parse_term("(\\x. x) y", m)));
  CHECK(!is_bohm_normal(parse_term("\\x. x ((\\y. y) z)", m)));
}

TEST_CASE("approximant chain of a fixed-point iterator") {
  auto m = load("dinf");
  Session s(m);
  auto M = parse_term("(\\x. f (x x)) (\\x. f (x x))", m);
  auto chain = approximants(M, s, 10);
  REQUIRE(chain.size() == 2);  // head stops once the spine head is f
  CHECK(print_term(chain[0]) == "Omega");
  CHECK(print_term(chain[1]) == "f Omega");
}

TEST_CASE("approximants of a normal form are just itself") {
  auto m = load("dinf");
  Session s(m);
  auto I = parse_term("\\x. x", m);
  auto chain = approximants(I, s, 10);
  REQUIRE(chain.size() == 1);
  CHECK(alpha_eq(chain[0], I));
}

TEST_CASE("approximability finds the identity witness") {
  auto m = load("norm");
  Session s(m);
  auto v = approximability_check(parse_term("(\\y. y) (\\x. x)", m), {},
                                 parse_type("p", m), s, 200, 50);
  REQUIRE(v.found);
  CHECK(alpha_eq(v.witness, parse_term("\\x. x", m)));
}

TEST_CASE("kerth V has no approximant witness") {
  auto m = load("kerth");
  Session s(m);
  auto V = parse_term("(\\x y. y (x x)) (\\x y. y (x x))", m);
  auto chain = approximants(V, s, 1000);
  REQUIRE(chain.size() == 2);  // {Omega, \y. y Omega} and nothing more
  CHECK(print_term(chain[0]) == "Omega");
  CHECK(print_term(chain[1]) == "\\y. y Omega");
  CheckOptions opt;
  opt.universe_depth = 1;
  auto v = approximability_check(V, {}, parse_type("b", m), s, 2000, 1000, opt);
  CHECK(!v.found);
}
