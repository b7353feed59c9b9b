#pragma once

#include <memory>
#include <string>
#include <vector>

namespace defim {

// A compact element of a (completed) filter model: a finite intersection of
// factors, each either a base atom or an arrow between elements.  The empty
// intersection is the top element w.  Kept in a canonical form: factors are
// sorted, duplicates removed, and any arrow with target w collapses to w
// (and is therefore dropped from the factor set).
class TypeExpr {
 public:
  struct Factor;

  TypeExpr() = default;  // w

  static TypeExpr top();
  static TypeExpr atom(const std::string& name);
  static TypeExpr arrow(const TypeExpr& src, const TypeExpr& dst);
  // Syntactic meet: factor-set union (no model knowledge).
  static TypeExpr meet(const TypeExpr& a, const TypeExpr& b);
  static TypeExpr meet_all(const std::vector<TypeExpr>& xs);

  bool is_top() const { return factors_.empty(); }
  bool is_atom() const;
  bool is_arrow() const;  // exactly one factor, an arrow
  const std::string& atom_name() const;          // pre: is_atom()
  const std::vector<Factor>& factors() const { return factors_; }
  TypeExpr factor_expr(size_t i) const;          // i-th factor as a TypeExpr

  // All atom names occurring anywhere in the expression.
  void collect_atoms(std::vector<std::string>& out) const;

  // Canonical printing; doubles as a map key.  Grammar: `w` | atom |
  // `(S -> T)` | `F1 /\ F2 /\ ...`.
  std::string str() const;

  bool operator==(const TypeExpr& o) const;
  bool operator!=(const TypeExpr& o) const { return !(*this == o); }
  bool operator<(const TypeExpr& o) const;

 private:
  explicit TypeExpr(std::vector<Factor> fs);
  std::vector<Factor> factors_;
};

struct TypeExpr::Factor {
  // Atom iff src == nullptr.
  std::string atom;
  std::shared_ptr<const TypeExpr> src, dst;

  bool is_atom() const { return src == nullptr; }
  static Factor make_atom(std::string name);
  static Factor make_arrow(const TypeExpr& s, const TypeExpr& d);
  int cmp(const Factor& o) const;
  std::string str() const;
};

}  // namespace defim
