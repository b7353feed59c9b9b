#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "defim/strat.hpp"
#include "defim/suite.hpp"

using namespace defim;

static PartialModel load(const char* name) {
  return load_model_file(std::string(DEFIM_MODEL_DIR) + "/" + name + ".dm");
}

TEST_CASE("sp verdicts") {
  CHECK(sp_search(load("dinf")).has_value());
  CHECK(sp_search(load("norm")).has_value());
  CHECK(sp_search(load("z5")).has_value());
  CHECK(!sp_search(load("pinf")).has_value());
  CHECK(!sp_search(load("u3")).has_value());
  CHECK(!sp_search(load("kerth")).has_value());
}

TEST_CASE("truncation families") {
  for (int k = 2; k <= 5; ++k) {
    auto m = parse_model(z_model_dsl(k));
    CHECK(check_model(m).empty());
    CHECK_MESSAGE(sp_search(m).has_value(), "z", k);
  }
  for (int k = 1; k <= 3; ++k) {
    auto m = parse_model(u_model_dsl(k));
    CHECK(check_model(m).empty());
    CHECK_MESSAGE(!sp_search(m).has_value(), "u", k);
  }
}

TEST_CASE("found witnesses verify") {
  for (const char* n : {"dinf", "norm", "z5"}) {
    auto m = load(n);
    auto w = sp_search(m);
    REQUIRE(w);
    CHECK(sp_verify(m, *w).empty());
  }
}

TEST_CASE("norm forces the polarities") {
  // p counts functions (negative occurrences feed arguments), q counts
  // normal forms; the coherence clause pins V(p) = -, V(q) = + on any
  // witness the search can return.
  auto m = load("norm");
  auto w = sp_search(m);
  REQUIRE(w);
  CHECK(w->rank.at("p") == w->rank.at("q"));
  CHECK(w->polarity.at("p") == false);
  CHECK(w->polarity.at("q") == true);
}

TEST_CASE("explicit z5 parity witness") {
  auto m = load("z5");
  StratWitness w;
  w.rank["w"] = 0;
  w.rank["s"] = 1;
  w.polarity["s"] = false;
  for (int i = 0; i <= 5; ++i) {
    w.rank["z" + std::to_string(i)] = 7 - i;  // descending with the chain
    w.polarity["z" + std::to_string(i)] = (i % 2 == 0);
  }
  CHECK(sp_verify(m, w).empty());
}

TEST_CASE("broken witnesses are reported") {
  auto m = load("dinf");
  StratWitness w;
  w.rank["w"] = 0;
  w.rank["*"] = 0;  // non-w atoms need rank >= 1
  w.polarity["*"] = true;
  CHECK(!sp_verify(m, w).empty());

  StratWitness w2;  // missing entries
  w2.rank["w"] = 0;
  CHECK(!sp_verify(m, w2).empty());
}

TEST_CASE("kerth fails on the self-meet source") {
  // ext c = ((c /\ d) -> b): the pair's source contains c itself, so the
  // strict positivity clause for {c, d} can never hold.
  auto m = load("kerth");
  StratWitness w;
  w.rank["w"] = 0;
  for (const char* a : {"a", "b", "c", "d"}) {
    w.rank[a] = 1;
    w.polarity[a] = true;
  }
  w.rank["b"] = 2;
  w.rank["c"] = 3;
  w.rank["d"] = 3;
  CHECK(!sp_verify(m, w).empty());
}

TEST_CASE("witness files parse") {
  auto m = load("norm");
  auto w = parse_witness("# norm\nrank p = 1\nrank q = 1\npol p = -\npol q = +\n", m);
  CHECK(w.rank.at("p") == 1);
  CHECK(w.polarity.at("q") == true);
  CHECK(sp_verify(m, w).empty());
  CHECK_THROWS_AS(parse_witness("rank nosuch = 1\n", m), ModelError);
}

TEST_CASE("atom bound raises") {
  std::string dsl = "model big\natoms w";
  for (int i = 0; i < 9; ++i) dsl += " a" + std::to_string(i);
  dsl += "\n";
  for (int i = 0; i < 9; ++i)
    dsl += "ext a" + std::to_string(i) + " = (w -> a" + std::to_string(i) + ")\n";
  CHECK_THROWS_AS(sp_search(parse_model(dsl), 8), ResourceError);
}
