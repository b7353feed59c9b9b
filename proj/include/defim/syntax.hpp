#pragma once

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "defim/model.hpp"
#include "defim/types.hpp"

namespace defim {

struct Term;
struct Test;
using TermPtr = std::shared_ptr<const Term>;
using TestPtr = std::shared_ptr<const Test>;

// Immutable ASTs, kept canonical by the mk_* constructors: test sums and
// products are flattened multisets in a deterministic order, with 0 the
// empty sum and eps the empty product; singleton Sum/Prod collapse to their
// element.  A term-level sum of tau-bars is the BarSum node; the empty
// BarSum is the term 0t.  Omega is its own constructor, not sugar for 0t.
struct Test {
  enum class K { Sum, Prod, Tau };
  K k;
  std::vector<TestPtr> items;  // Sum, Prod
  TypeExpr label;              // Tau
  TermPtr body;                // Tau
};

struct Term {
  enum class K { Var, Lam, App, BarSum, Omega };
  struct Entry {
    TypeExpr label;
    TestPtr body;
  };
  K k;
  std::string name;            // Var; Lam binder
  TermPtr t1, t2;              // Lam body; App fun/arg
  std::vector<Entry> entries;  // BarSum
};

using Node = std::variant<TermPtr, TestPtr>;

TermPtr mk_var(const std::string& name);
TermPtr mk_lam(const std::string& binder, TermPtr body);
TermPtr mk_app(TermPtr fun, TermPtr arg);
TermPtr mk_omega();
TermPtr mk_barsum(std::vector<Term::Entry> entries);
TermPtr mk_ebar(const TypeExpr& label);  // bar[label](eps)

TestPtr mk_tau(const TypeExpr& label, TermPtr body);
TestPtr mk_sum(std::vector<TestPtr> items);
TestPtr mk_prod(std::vector<TestPtr> items);
TestPtr mk_eps();
TestPtr mk_zero();

std::string print_term(const TermPtr& t);
std::string print_test(const TestPtr& t);
std::string print_node(const Node& n);

// Re-normalizes an arbitrary AST bottom-up through the constructors;
// idempotent.
TermPtr canonicalize(const TermPtr& t);
TestPtr canonicalize(const TestPtr& t);

std::set<std::string> free_vars(const TermPtr& t);
std::set<std::string> free_vars(const TestPtr& t);

// Capture-avoiding substitution of x by n.
TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& n);
TestPtr substitute(const TestPtr& q, const std::string& x, const TermPtr& n);

bool alpha_eq(const TermPtr& a, const TermPtr& b);
bool alpha_eq(const TestPtr& a, const TestPtr& b);
bool alpha_eq(const Node& a, const Node& b);

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(size_t p, const std::string& msg)
      : std::runtime_error("at " + std::to_string(p) + ": " + msg), pos(p) {}
};

// Concrete grammar (labels are types over m; w labels are rejected):
//   term:  var | `\x y. M` | juxtaposition (left assoc) | `Omega` | `0t`
//        | `bar[T](Q) + bar[T](Q) + ...` | `ebar[T]` | parens
//   test:  `eps` | `0` | `tau[T](M)` | Q + R | Q * R (binds tighter) | parens
TermPtr parse_term(const std::string& text, const PartialModel& m);
TestPtr parse_test(const std::string& text, const PartialModel& m);

}  // namespace defim
