#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "defim/model.hpp"
#include "defim/unfold_oracle.hpp"

using namespace defim;

static PartialModel load(const char* name) {
  return load_model_file(std::string(DEFIM_MODEL_DIR) + "/" + name + ".dm");
}

TEST_CASE("shipped models are valid") {
  for (const char* n : {"dinf", "pinf", "norm", "z5", "u3", "kerth"}) {
    auto m = load(n);
    auto viol = check_model(m);
    for (const auto& v : viol) MESSAGE(n, ": ", v);
    CHECK(viol.empty());
  }
}

TEST_CASE("bad presentations are rejected") {
  CHECK_THROWS_AS(parse_model("model x\natoms w a\nmeet a b = a\n"), ModelError);
  CHECK_THROWS_AS(parse_model("model x\natoms w a a\n"), ModelError);
  CHECK_THROWS_AS(parse_model("atoms w a\n"), ModelError);  // missing header
  // well-formed text, broken axiom: ext pair not below the arrow table entry
  auto m = parse_model(
      "model x\natoms w a b\narrow w a = b\next a = (w -> a)\next b = (w -> b)\n");
  CHECK(!check_model(m).empty());
}

TEST_CASE("dinf order") {
  auto m = load("dinf");
  Session s(m);
  auto t = [&](const char* x) { return parse_type(x, m); };
  CHECK(s.leq(t("*"), t("w")));
  CHECK(!s.leq(t("w"), t("*")));
  CHECK(s.eq(t("*"), t("w -> *")));  // * = w -> *
  CHECK(s.leq(t("*"), t("* -> *")));
  CHECK(!s.leq(t("* -> *"), t("*")));
  CHECK(s.leq(t("*"), t("(* -> *) -> *")));  // * <= g -> * for every g
  CHECK(!s.leq(t("(* -> *) -> *"), t("*")));
  // arrows contravariant / covariant
  CHECK(!s.leq(t("* -> *"), t("(* -> *) -> (* -> *)")));
  CHECK(!s.leq(t("(* -> *) -> (* -> *)"), t("* -> *")));
}

TEST_CASE("pinf order") {
  auto m = load("pinf");
  Session s(m);
  auto t = [&](const char* x) { return parse_type(x, m); };
  CHECK(s.eq(t("*"), t("* -> *")));  // * = * -> *
  CHECK(s.leq(t("w -> *"), t("*")));
  CHECK(!s.leq(t("*"), t("w -> *")));  // strict: P-inf is not extensional at w
}

TEST_CASE("norm order") {
  auto m = load("norm");
  Session s(m);
  auto t = [&](const char* x) { return parse_type(x, m); };
  CHECK(s.leq(t("q"), t("p")));  // p /\ q = q makes q the smaller one
  CHECK(!s.leq(t("p"), t("q")));
  CHECK(s.eq(t("p /\\ q"), t("q")));
  CHECK(s.eq(t("p"), t("q -> p")));
  CHECK(s.eq(t("q"), t("p -> q")));
  CHECK(s.leq(t("q"), t("p -> p")));
  CHECK(!s.leq(t("p -> p"), t("q")));
}

TEST_CASE("z5 order") {
  auto m = load("z5");
  Session s(m);
  auto t = [&](const char* x) { return parse_type(x, m); };
  CHECK(s.leq(t("s"), t("z0")));
  CHECK(s.leq(t("s"), t("z3")));
  CHECK(!s.leq(t("z0"), t("z1")));  // numerals pairwise incomparable
  CHECK(!s.leq(t("z1"), t("z0")));
  CHECK(s.eq(t("z0"), t("w -> z1")));
  CHECK(s.eq(t("s"), t("w -> s")));
  CHECK(s.leq(t("z5"), t("s -> s")));
}

TEST_CASE("kerth order") {
  auto m = load("kerth");
  Session s(m);
  auto t = [&](const char* x) { return parse_type(x, m); };
  CHECK(s.leq(t("a"), t("b")));  // a below every other atom
  CHECK(s.leq(t("a"), t("c")));
  CHECK(s.leq(t("a"), t("d")));
  CHECK(!s.leq(t("b"), t("a")));
  CHECK(s.eq(t("c"), t("(c /\\ d) -> b")));
  CHECK(s.eq(t("b"), t("(b -> a) -> a")));
  CHECK(s.eq(t("d"), t("w -> a -> a")));
  CHECK(s.leq(t("c /\\ d"), t("c")));
  CHECK(s.leq(t("c /\\ d"), t("d")));
}

TEST_CASE("ext reconstruction: every atom equals the meet of its ext arrows") {
  for (const char* n : {"dinf", "pinf", "norm", "z5", "u3", "kerth"}) {
    auto m = load(n);
    Session s(m);
    for (const auto& a : m.atoms) {
      if (m.is_omega(a)) continue;
      std::vector<TypeExpr> arrows;
      for (const auto& [src, dst] : m.ext_atom(a))
        arrows.push_back(TypeExpr::arrow(src, dst));
      CHECK_MESSAGE(s.eq(TypeExpr::atom(a), TypeExpr::meet_all(arrows)), n, ".", a);
    }
  }
}

TEST_CASE("meet is a glb on the norm universe") {
  auto m = load("norm");
  Session s(m);
  auto uni = s.universe(2, 12);
  for (const auto& a : uni)
    for (const auto& b : uni) {
      auto ab = s.meet(a, b);
      CHECK(s.leq(ab, a));
      CHECK(s.leq(ab, b));
      CHECK(s.eq(ab, s.meet(b, a)));
      CHECK(s.eq(s.meet(a, a), a));
      for (const auto& c : uni)
        if (s.leq(c, a) && s.leq(c, b)) CHECK(s.leq(c, ab));
    }
}

TEST_CASE("leq is a preorder on small universes") {
  for (const char* n : {"dinf", "z5", "u3"}) {
    auto m = load(n);
    Session s(m);
    auto uni = s.universe(2, 15);
    for (const auto& a : uni) {
      CHECK(s.leq(a, a));
      for (const auto& b : uni)
        for (const auto& c : uni)
          if (s.leq(a, b) && s.leq(b, c)) CHECK_MESSAGE(s.leq(a, c), n);
    }
  }
}

TEST_CASE("universe is deterministic and capped") {
  auto m = load("norm");
  Session s(m);
  auto u1 = s.universe(1);
  auto u2 = s.universe(2);
  CHECK(u1.size() < u2.size());
  auto capped = s.universe(2, 10);
  CHECK(capped.size() <= u2.size());
  Session s2(m);
  auto again = s2.universe(2, 10);
  REQUIRE(capped.size() == again.size());
  for (size_t i = 0; i < capped.size(); ++i) CHECK(capped[i] == again[i]);
}

TEST_CASE("unfolding oracle agrees where it decides") {
  for (const char* n : {"dinf", "pinf", "norm", "z5", "u3", "kerth"}) {
    auto m = load(n);
    Session s(m);
    auto uni = s.universe(2, 20);
    for (const auto& a : uni)
      for (const auto& b : uni) {
        Tri o = oracle_leq(m, a, b, 3);
        if (o == Tri::Unknown) continue;
        CHECK_MESSAGE(s.leq(a, b) == (o == Tri::True), n, ": ", a.str(), " <= ", b.str());
      }
  }
  // a pair the bracketing genuinely cannot settle at finite depth
  auto m = load("dinf");
  CHECK(oracle_leq(m, parse_type("w", m), parse_type("*", m), 3) == Tri::Unknown);
}
