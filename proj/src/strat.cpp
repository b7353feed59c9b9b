#include "defim/strat.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace defim {

namespace {

struct RP {
  int rank;
  bool pol;
};

// Homomorphic rank/polarity of a compact, relative to a witness.  An arrow
// takes the rank of whichever side is higher; when the target wins the
// polarity passes through, when the source wins it flips.  A rank tie with
// equal polarities cannot live at that rank (the source must be strictly
// positive in it), so the arrow is pushed one stratum up.  An intersection
// takes the max rank, polarity the join (true as least element, so boolean
// or) over the factors realizing it.  Pre: t is not w.
RP rp_of(const StratWitness& w, const TypeExpr& t) {
  RP acc{0, false};
  bool first = true;
  for (size_t i = 0; i < t.factors().size(); ++i) {
    const auto& f = t.factors()[i];
    RP r;
    if (f.is_atom()) {
      r = {w.rank.at(f.atom), w.polarity.at(f.atom)};
    } else {
      RP rt = rp_of(w, *f.dst);  // canonical forms have non-w targets
      if (f.src->is_top()) {
        r = rt;
      } else {
        RP rs = rp_of(w, *f.src);
        if (rt.rank > rs.rank)
          r = rt;
        else if (rs.rank > rt.rank)
          r = {rs.rank, !rs.pol};
        else if (rs.pol != rt.pol)
          r = rt;
        else
          r = {rt.rank + 1, rt.pol};
      }
    }
    if (first || r.rank > acc.rank)
      acc = r;
    else if (r.rank == acc.rank)
      acc.pol = acc.pol || r.pol;
    first = false;
  }
  return acc;
}

using AtomSet = std::set<std::string>;

AtomSet reduce_set(const PartialModel& m, AtomSet s) {
  s.erase(m.omega());
restart:
  if (s.size() > 1) {
    for (auto i = s.begin(); i != s.end(); ++i)
      for (auto j = std::next(i); j != s.end(); ++j) {
        auto v = m.meet_atoms(*i, *j);
        if (v) {
          auto a = *i, b = *j;
          s.erase(a);
          s.erase(b);
          s.insert(*v);
          goto restart;  // iterators died with the erase
        }
      }
  }
  return s;
}

std::string set_str(const AtomSet& s) {
  std::string out;
  for (const auto& a : s) {
    if (!out.empty()) out += " /\\ ";
    out += a;
  }
  return out;
}

// Everything sp_verify needs that depends only on the model, so the search
// can reuse it across candidate witnesses.
struct VerifyCtx {
  std::vector<std::string> atoms;            // non-w
  std::vector<AtomSet> elems;                // reduced meet-closure reps
  std::vector<std::vector<std::pair<TypeExpr, TypeExpr>>> ext;  // per elem
  // Pairs of elements whose meet absorbs (reduce(union) != union), with the
  // reduced result; the meet clauses are automatic for all other pairs.
  struct MeetCase {
    size_t i, j;
    AtomSet met;
  };
  std::vector<MeetCase> meets;
};

VerifyCtx build_ctx(const PartialModel& m) {
  VerifyCtx c;
  for (const auto& a : m.atoms)
    if (!m.is_omega(a)) c.atoms.push_back(a);
  size_t n = c.atoms.size();
  if (n > 16) throw ResourceError("sp: too many atoms for subset checking");
  std::set<AtomSet> seen;
  for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
    AtomSet s;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t(1) << i)) s.insert(c.atoms[i]);
    s = reduce_set(m, s);
    if (!s.empty() && seen.insert(s).second) c.elems.push_back(s);
  }
  for (const auto& s : c.elems) {
    std::vector<std::pair<TypeExpr, TypeExpr>> ps;
    for (const auto& a : s)
      for (const auto& p : m.ext_atom(a)) ps.push_back(p);
    c.ext.push_back(std::move(ps));
  }
  for (size_t i = 0; i < c.elems.size(); ++i)
    for (size_t j = i + 1; j < c.elems.size(); ++j) {
      AtomSet u = c.elems[i];
      u.insert(c.elems[j].begin(), c.elems[j].end());
      AtomSet r = reduce_set(m, u);
      if (r != u) c.meets.push_back({i, j, std::move(r)});
    }
  return c;
}

RP rp_set(const StratWitness& w, const AtomSet& s) {
  RP acc{0, false};
  bool first = true;
  for (const auto& a : s) {
    RP r{w.rank.at(a), w.polarity.at(a)};
    if (first || r.rank > acc.rank)
      acc = r;
    else if (r.rank == acc.rank)
      acc.pol = acc.pol || r.pol;
    first = false;
  }
  return acc;
}

std::vector<std::string> verify_with_ctx(const PartialModel& m, const VerifyCtx& c,
                                         const StratWitness& w) {
  std::vector<std::string> out;
  auto rit = w.rank.find(m.omega());
  if (rit != w.rank.end() && rit->second != 0) out.push_back("rank(w) must be 0");
  for (const auto& a : c.atoms) {
    auto r = w.rank.find(a);
    if (r == w.rank.end())
      out.push_back("no rank for atom " + a);
    else if (r->second < 1)
      out.push_back("rank(" + a + ") must be >= 1");
    if (!w.polarity.count(a)) out.push_back("no polarity for atom " + a);
  }
  if (!out.empty()) return out;

  auto pol_ch = [](bool p) { return p ? '+' : '-'; };
  for (size_t i = 0; i < c.elems.size(); ++i) {
    RP g = rp_set(w, c.elems[i]);
    std::string gs = set_str(c.elems[i]);
    for (const auto& [alpha, beta] : c.ext[i]) {
      RP b = rp_of(w, beta);
      if (g.rank < b.rank)
        out.push_back(gs + ": rank below its ext target " + beta.str());
      else if (g.rank == b.rank && g.pol != b.pol)
        out.push_back(gs + ": polarity differs from rank-equal ext target " + beta.str());
      if (alpha.is_top()) continue;
      RP a = rp_of(w, alpha);
      if (g.rank < a.rank)
        out.push_back(gs + ": rank below its ext source " + alpha.str());
      else if (g.rank == a.rank && g.pol == a.pol)
        out.push_back(gs + ": ext source " + alpha.str() + " not strictly positive (" +
                      pol_ch(g.pol) + " on both sides at rank " + std::to_string(g.rank) + ")");
    }
  }
  for (const auto& mc : c.meets) {
    RP ra = rp_set(w, c.elems[mc.i]);
    RP rb = rp_set(w, c.elems[mc.j]);
    RP rm = rp_set(w, mc.met);
    std::string sa = set_str(c.elems[mc.i]), sb = set_str(c.elems[mc.j]),
                sm = set_str(mc.met);
    if (rm.rank > ra.rank && rm.rank > rb.rank)
      out.push_back("meet " + sm + " outranks both " + sa + " and " + sb);
    if (rm.rank < ra.rank && mc.met != c.elems[mc.j])
      out.push_back("meet " + sm + " strictly below " + sa + " but not equal to " + sb);
    if (rm.rank < rb.rank && mc.met != c.elems[mc.i])
      out.push_back("meet " + sm + " strictly below " + sb + " but not equal to " + sa);
    if (ra.rank == rb.rank && rm.rank == ra.rank && rm.pol != (ra.pol || rb.pol))
      out.push_back("meet " + sm + ": polarity not the join of " + sa + " and " + sb);
  }
  return out;
}

}  // namespace

std::string StratWitness::str() const {
  std::ostringstream os;
  for (const auto& [a, r] : rank) os << "rank " << a << " = " << r << "\n";
  for (const auto& [a, p] : polarity) os << "pol " << a << " = " << (p ? '+' : '-') << "\n";
  return os.str();
}

StratWitness parse_witness(const std::string& text, const PartialModel& m) {
  StratWitness w;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  auto fail = [&](const std::string& msg) {
    throw ModelError("line " + std::to_string(ln) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++ln;
    auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string kw, atom, eq, val;
    if (!(ls >> kw)) continue;
    if (!(ls >> atom >> eq >> val) || eq != "=") fail("expected '<kw> <atom> = <value>'");
    if (!m.has_atom(atom)) fail("unknown atom " + atom);
    if (kw == "rank") {
      try {
        w.rank[atom] = std::stoi(val);
      } catch (...) {
        fail("bad rank value " + val);
      }
    } else if (kw == "pol") {
      if (val != "+" && val != "-") fail("polarity must be + or -");
      if (m.is_omega(atom)) fail("w has no polarity");
      w.polarity[atom] = (val == "+");
    } else {
      fail("unknown keyword " + kw);
    }
  }
  if (!w.rank.count(m.omega())) w.rank[m.omega()] = 0;
  return w;
}

std::vector<std::string> sp_verify(const PartialModel& m, const StratWitness& w) {
  return verify_with_ctx(m, build_ctx(m), w);
}

std::optional<StratWitness> sp_search(const PartialModel& m, size_t atom_bound) {
  std::vector<std::string> atoms;
  for (const auto& a : m.atoms)
    if (!m.is_omega(a)) atoms.push_back(a);
  size_t n = atoms.size();
  StratWitness w;
  w.rank[m.omega()] = 0;
  if (n == 0) return w;
  if (n > atom_bound)
    throw ResourceError("sp_search: " + std::to_string(n) + " atoms exceeds bound " +
                        std::to_string(atom_bound));
  VerifyCtx ctx = build_ctx(m);

  // Necessary rank constraints rank(first) >= rank(second), read off the ext
  // table: an atom dominates (in rank) every atom occurring in its ext pairs.
  // Used to prune rank assignments before polarities are even considered.
  std::set<std::pair<std::string, std::string>> ge;
  for (const auto& a : atoms)
    for (const auto& [src, dst] : m.ext_atom(a)) {
      std::vector<std::string> occ;
      src.collect_atoms(occ);
      dst.collect_atoms(occ);
      for (const auto& x : occ)
        if (!m.is_omega(x)) ge.insert({a, x});
    }

  // Rank assignments are enumerated as ordered set partitions (total
  // preorders): `blocks` lists the rank classes from lowest to highest, and
  // an atom's rank is its block index + 1.  Each new atom either joins an
  // existing block or founds a new block in any gap; inserting blocks keeps
  // the relative order of already-placed atoms, so constraint pruning
  // remains sound mid-construction.
  std::vector<std::vector<std::string>> blocks;
  std::optional<StratWitness> found;

  auto idx_of = [&](const std::string& a) -> int {
    for (size_t b = 0; b < blocks.size(); ++b)
      for (const auto& x : blocks[b])
        if (x == a) return int(b);
    return -1;
  };
  auto consistent = [&](const std::string& a) {
    int ia = idx_of(a);
    for (const auto& [hi, lo] : ge) {
      if (hi != a && lo != a) continue;
      int ih = idx_of(hi), il = idx_of(lo);
      if (ih >= 0 && il >= 0 && ih < il) return false;
    }
    return true;
  };
  auto try_polarities = [&]() {
    StratWitness cand;
    cand.rank[m.omega()] = 0;
    for (size_t b = 0; b < blocks.size(); ++b)
      for (const auto& x : blocks[b]) cand.rank[x] = int(b) + 1;
    for (size_t mask = 0; mask < (size_t(1) << n) && !found; ++mask) {
      for (size_t i = 0; i < n; ++i)
        cand.polarity[atoms[i]] = (mask >> i) & 1;
      if (verify_with_ctx(m, ctx, cand).empty()) found = cand;
    }
  };

  auto rec = [&](auto&& self, size_t i) -> void {
    if (found) return;
    if (i == n) {
      try_polarities();
      return;
    }
    const std::string& a = atoms[i];
    for (size_t b = 0; b < blocks.size() && !found; ++b) {
      blocks[b].push_back(a);
      if (consistent(a)) self(self, i + 1);
      blocks[b].pop_back();
    }
    for (size_t g = 0; g <= blocks.size() && !found; ++g) {
      blocks.insert(blocks.begin() + g, {a});
      if (consistent(a)) self(self, i + 1);
      blocks.erase(blocks.begin() + g);
    }
  };
  rec(rec, 0);
  return found;
}

}  // namespace defim
