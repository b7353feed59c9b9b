#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "defim/types.hpp"

namespace defim {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a configurable budget (visited pairs, subset guard, ...) runs out.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finitely-presented partial DEFiM.  The first atom in `atoms` is the top
// element w.  The meet table may be partial: a missing entry means the meet of
// the two atoms is the formal (syntactic) intersection, i.e. the atoms are
// incomparable and their meet is a non-atomic compact of the completion.
struct PartialModel {
  std::string name;
  std::vector<std::string> atoms;  // atoms[0] is w
  // Normalized keys: (min, max) lexicographically; only non-w atoms.
  std::map<std::pair<std::string, std::string>, std::string> meet_table;
  std::map<std::pair<std::string, std::string>, std::string> arrow_table;
  std::map<std::string, std::vector<std::pair<TypeExpr, TypeExpr>>> ext_table;

  const std::string& omega() const { return atoms.at(0); }
  bool has_atom(const std::string& a) const;
  bool is_omega(const std::string& a) const { return a == omega(); }
  // Table meet of two atoms, with w neutral; nullopt if the pair is formal.
  std::optional<std::string> meet_atoms(const std::string& a, const std::string& b) const;
  // Table order: a <= b, decided purely by the meet table (authoritative).
  bool atom_leq(const std::string& a, const std::string& b) const;
  const std::vector<std::pair<TypeExpr, TypeExpr>>& ext_atom(const std::string& a) const;
};

// Parses the line-oriented model DSL (`model`, `atoms`, `meet`, `arrow`,
// `ext`, `#` comments).  Throws ModelError with a line number on bad input.
PartialModel parse_model(const std::string& text);
PartialModel load_model_file(const std::string& path);

// Parses a type over the model's atoms: `w` | atom | `t -> t` (right assoc)
// | `t /\ t` (binds tighter than ->) | parens.
TypeExpr parse_type(const std::string& text, const PartialModel& m);

struct SessionLimits {
  size_t leq_budget = 200000;  // visited subgoals per top-level leq query
};

// A loaded model plus memoization caches.  Not thread-safe; concurrent
// activities should each own a private session.
class Session {
 public:
  explicit Session(PartialModel m, SessionLimits lim = {});

  const PartialModel& model() const { return model_; }

  // ext of an intersection is the union of the factors' ext sets; ext of an
  // arrow is the singleton; ext of an atom is its table entry; ext of w is {}.
  std::vector<std::pair<TypeExpr, TypeExpr>> ext_of(const TypeExpr& t) const;

  // Decides a <= b in the completion.  Throws ResourceError on budget.
  bool leq(const TypeExpr& a, const TypeExpr& b);
  bool eq(const TypeExpr& a, const TypeExpr& b);

  // Model-aware meet: factor union, then redundant factors (those implied by
  // the rest) are pruned so that e.g. meet(w->*, *) is Atom(*) in D-inf.
  TypeExpr meet(const TypeExpr& a, const TypeExpr& b);

  TypeExpr top() const { return TypeExpr::top(); }

  // Type universe: closure of the atoms under arrows and binary meets,
  // iterated `depth` times, deduplicated up to eq.  A non-zero `cap`
  // truncates each level to the first `cap` elements in canonical order
  // (deterministic); 0 means no cap.
  std::vector<TypeExpr> universe(int depth, size_t cap = 0);

 private:
  enum class Memo { InProgress, True, False };
  bool leq_factor(const TypeExpr& a, const TypeExpr::Factor& f);
  bool leq_arrow(const TypeExpr& a, const TypeExpr& src, const TypeExpr& dst);

  PartialModel model_;
  SessionLimits limits_;
  std::map<std::pair<std::string, std::string>, Memo> memo_;
  std::map<std::pair<std::string, std::string>, bool> done_;  // completed results
  size_t visited_ = 0;
  int depth_ = 0;  // recursion depth of top-level queries (budget reset at 0)
};

// Lists every violated model axiom; empty result means valid.
std::vector<std::string> check_model(const PartialModel& m);

}  // namespace defim
