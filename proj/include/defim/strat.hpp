#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "defim/model.hpp"

namespace defim {

// Witness of stratified positivity: a rank for every atom (w has rank 0, all
// other atoms rank >= 1) and a polarity for every non-w atom.  Ranks and
// polarities extend to compacts homomorphically (see sp_verify).
struct StratWitness {
  std::map<std::string, int> rank;
  std::map<std::string, bool> polarity;

  std::string str() const;
};

// Parses a witness file: lines `rank <atom> = <n>` / `pol <atom> = +|-`,
// `#` comments.  `+` is polarity true.
StratWitness parse_witness(const std::string& text, const PartialModel& m);

// Checks the witness clauses on every element of the finite presentation:
// each atom and each table-reduced meet of atoms, against the union of the
// ext entries of its parts.  Returns the list of violated clauses (empty
// means the witness is valid).  Pre: check_model(m) is clean.
std::vector<std::string> sp_verify(const PartialModel& m, const StratWitness& w);

// Exhaustive search for a witness.  nullopt means no witness exists for this
// presentation (the search is complete over rank assignments up to
// relabeling and all polarity vectors).  Throws ResourceError when the model
// has more than `atom_bound` non-w atoms.
std::optional<StratWitness> sp_search(const PartialModel& m, size_t atom_bound = 8);

}  // namespace defim
