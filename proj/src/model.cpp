#include "defim/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace defim {

namespace {

std::pair<std::string, std::string> norm_pair(const std::string& a, const std::string& b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

bool PartialModel::has_atom(const std::string& a) const {
  return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
}

std::optional<std::string> PartialModel::meet_atoms(const std::string& a,
                                                    const std::string& b) const {
  if (a == b) return a;
  if (is_omega(a)) return b;
  if (is_omega(b)) return a;
  auto it = meet_table.find(norm_pair(a, b));
  if (it == meet_table.end()) return std::nullopt;
  return it->second;
}

bool PartialModel::atom_leq(const std::string& a, const std::string& b) const {
  if (is_omega(b)) return true;
  auto m = meet_atoms(a, b);
  return m && *m == a;
}

const std::vector<std::pair<TypeExpr, TypeExpr>>& PartialModel::ext_atom(
    const std::string& a) const {
  auto it = ext_table.find(a);
  if (it == ext_table.end())
    throw ModelError("model " + name + ": no ext entry for atom '" + a + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Type parsing (shared by the DSL and the CLI).

namespace {

struct TypeLexer {
  std::string src;
  size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  bool peek_is(const std::string& tok) {
    skip_ws();
    return src.compare(pos, tok.size(), tok) == 0;
  }
  bool eat(const std::string& tok) {
    if (!peek_is(tok)) return false;
    pos += tok.size();
    return true;
  }
  static bool ident_char(char c) {
    return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*' || c == '\'';
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() && ident_char(src[pos])) ++pos;
    return src.substr(start, pos - start);
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ModelError("type syntax error at column " + std::to_string(pos + 1) + ": " + msg +
                     " in '" + src + "'");
  }
};

TypeExpr parse_type_expr(TypeLexer& lx, const PartialModel* m);

TypeExpr parse_type_atom(TypeLexer& lx, const PartialModel* m) {
  if (lx.eat("(")) {
    TypeExpr t = parse_type_expr(lx, m);
    if (!lx.eat(")")) lx.fail("expected ')'");
    return t;
  }
  std::string id = lx.ident();
  if (id.empty()) lx.fail("expected a type");
  if (m) {
    if (id == m->omega()) return TypeExpr::top();
    if (!m->has_atom(id)) lx.fail("unknown atom '" + id + "'");
  } else if (id == "w") {
    return TypeExpr::top();
  }
  return TypeExpr::atom(id);
}

TypeExpr parse_type_inter(TypeLexer& lx, const PartialModel* m) {
  TypeExpr t = parse_type_atom(lx, m);
  while (lx.peek_is("/\\")) {
    lx.eat("/\\");
    t = TypeExpr::meet(t, parse_type_atom(lx, m));
  }
  return t;
}

TypeExpr parse_type_expr(TypeLexer& lx, const PartialModel* m) {
  TypeExpr lhs = parse_type_inter(lx, m);
  if (lx.eat("->")) {
    TypeExpr rhs = parse_type_expr(lx, m);  // right-associative
    return TypeExpr::arrow(lhs, rhs);
  }
  return lhs;
}

}  // namespace

TypeExpr parse_type(const std::string& text, const PartialModel& m) {
  TypeLexer lx{text};
  TypeExpr t = parse_type_expr(lx, &m);
  if (!lx.eof()) lx.fail("trailing input");
  return t;
}

// ---------------------------------------------------------------------------
// Model DSL.

PartialModel parse_model(const std::string& text) {
  PartialModel m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto err = [&](const std::string& msg) -> ModelError {
    return ModelError("line " + std::to_string(lineno) + ": " + msg);
  };
  auto need_atom = [&](const std::string& a) {
    if (!m.has_atom(a)) throw err("unknown atom '" + a + "'");
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "model") {
      if (!(ls >> m.name)) throw err("expected model name");
    } else if (kw == "atoms") {
      std::string a;
      while (ls >> a) {
        if (m.has_atom(a)) throw err("duplicate atom '" + a + "'");
        m.atoms.push_back(a);
      }
      if (m.atoms.empty()) throw err("no atoms listed");
    } else if (kw == "meet" || kw == "arrow") {
      std::string a, b, eqs, c;
      if (!(ls >> a >> b >> eqs >> c) || eqs != "=") throw err("expected '" + kw + " a b = c'");
      need_atom(a);
      need_atom(b);
      need_atom(c);
      if (kw == "meet") {
        if (m.is_omega(a) || m.is_omega(b)) throw err("meets with w are implicit");
        auto key = norm_pair(a, b);
        auto [it, fresh] = m.meet_table.emplace(key, c);
        if (!fresh && it->second != c) throw err("conflicting meet entry for " + a + "," + b);
      } else {
        auto key = std::make_pair(a, b);
        auto [it, fresh] = m.arrow_table.emplace(key, c);
        if (!fresh && it->second != c) throw err("conflicting arrow entry for " + a + "," + b);
      }
    } else if (kw == "ext") {
      std::string a, eqs;
      if (!(ls >> a >> eqs) || eqs != "=") throw err("expected 'ext a = (t -> t), ...'");
      need_atom(a);
      if (m.is_omega(a)) throw err("ext of w is implicitly empty");
      std::string rest;
      std::getline(ls, rest);
      std::vector<std::pair<TypeExpr, TypeExpr>> pairs;
      // Split on top-level commas.
      int depth = 0;
      std::string cur;
      auto flush = [&]() {
        if (cur.find_first_not_of(" \t") == std::string::npos)
          throw err("empty ext component");
        TypeExpr t;
        try {
          t = parse_type(cur, m);
        } catch (const ModelError& e) {
          throw err(e.what());
        }
        if (!t.is_arrow()) throw err("ext component must be a single arrow: '" + cur + "'");
        const auto& f = t.factors()[0];
        pairs.emplace_back(*f.src, *f.dst);
        cur.clear();
      };
      for (char ch : rest) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
          flush();
        } else {
          cur += ch;
        }
      }
      flush();
      if (!m.ext_table.emplace(a, std::move(pairs)).second)
        throw err("duplicate ext entry for '" + a + "'");
    } else {
      throw err("unknown directive '" + kw + "'");
    }
  }
  if (m.atoms.empty()) throw ModelError("model has no atoms");
  if (m.name.empty()) throw ModelError("missing 'model <name>' line");
  for (const auto& a : m.atoms)
    if (!m.is_omega(a) && !m.ext_table.count(a))
      throw ModelError("missing ext entry for atom '" + a + "'");
  return m;
}

PartialModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model(ss.str());
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Session: subtyping over the completion.

Session::Session(PartialModel m, SessionLimits lim)
    : model_(std::move(m)), limits_(lim) {}

std::vector<std::pair<TypeExpr, TypeExpr>> Session::ext_of(const TypeExpr& t) const {
  std::vector<std::pair<TypeExpr, TypeExpr>> out;
  for (const auto& f : t.factors()) {
    if (f.is_atom()) {
      const auto& entry = model_.ext_atom(f.atom);
      out.insert(out.end(), entry.begin(), entry.end());
    } else {
      out.emplace_back(*f.src, *f.dst);
    }
  }
  return out;
}

bool Session::leq(const TypeExpr& a, const TypeExpr& b) {
  if (depth_ == 0) visited_ = 0;
  ++depth_;
  bool ok = true;
  try {
    for (const auto& f : b.factors()) {
      if (!leq_factor(a, f)) {
        ok = false;
        break;
      }
    }
  } catch (...) {
    --depth_;
    throw;
  }
  --depth_;
  return ok;
}

bool Session::leq_factor(const TypeExpr& a, const TypeExpr::Factor& f) {
  if (++visited_ > limits_.leq_budget)
    throw ResourceError("leq: visited-pair budget exceeded");
  // Syntactic containment fast path (covers reflexivity and meet-below-factor).
  for (const auto& g : a.factors())
    if (g.cmp(f) == 0) return true;

  std::pair<std::string, std::string> key(a.str(), f.str());
  auto it = memo_.find(key);
  if (it != memo_.end()) {
    if (it->second == Memo::True) return true;
    if (it->second == Memo::False) return false;
    // In-progress revisit.  Arrow/arrow pairs resolve coinductively to true
    // (recursive-types practice); pairs involving atoms resolve to false,
    // staying conservative w.r.t. the free completion.
    if (f.is_atom()) return false;
    for (const auto& g : a.factors())
      if (g.is_atom()) return false;
    return true;
  }
  memo_[key] = Memo::InProgress;
  bool val;
  if (f.is_atom()) {
    if (a.is_atom()) {
      val = model_.atom_leq(a.atom_name(), f.atom);  // table is authoritative
    } else {
      // Unfold the target atom into its ext arrows.
      val = true;
      for (const auto& [s, t] : model_.ext_atom(f.atom)) {
        if (!leq_arrow(a, s, t)) {
          val = false;
          break;
        }
      }
    }
  } else {
    val = leq_arrow(a, *f.src, *f.dst);
  }
  memo_[key] = val ? Memo::True : Memo::False;
  return val;
}

bool Session::leq_arrow(const TypeExpr& a, const TypeExpr& src, const TypeExpr& dst) {
  if (a.is_top()) {
    // w <= src -> dst iff dst ~ w (forced by "arrow is w iff target is w").
    return leq(TypeExpr::top(), dst);
  }
  // Unfold a's factors into arrow pairs and apply the arrow axiom:
  // a <= src -> dst iff dst >= meet of targets over pairs whose source is
  // above src.
  TypeExpr concl = TypeExpr::top();
  for (const auto& [s, t] : ext_of(a))
    if (leq(src, s)) concl = TypeExpr::meet(concl, t);
  return leq(concl, dst);
}

bool Session::eq(const TypeExpr& a, const TypeExpr& b) {
  return leq(a, b) && leq(b, a);
}

TypeExpr Session::meet(const TypeExpr& a, const TypeExpr& b) {
  TypeExpr u = TypeExpr::meet(a, b);
  const auto& fs = u.factors();
  if (fs.size() <= 1) return u;
  std::vector<bool> keep(fs.size(), true);
  for (size_t i = 0; i < fs.size(); ++i) {
    TypeExpr rest = TypeExpr::top();
    for (size_t j = 0; j < fs.size(); ++j)
      if (j != i && keep[j]) rest = TypeExpr::meet(rest, u.factor_expr(j));
    if (rest.is_top()) continue;  // never drop the last factor
    if (leq(rest, u.factor_expr(i))) keep[i] = false;
  }
  TypeExpr out = TypeExpr::top();
  for (size_t i = 0; i < fs.size(); ++i)
    if (keep[i]) out = TypeExpr::meet(out, u.factor_expr(i));
  return out;
}

std::vector<TypeExpr> Session::universe(int depth, size_t cap) {
  std::vector<TypeExpr> level;
  level.push_back(TypeExpr::top());
  for (const auto& a : model_.atoms)
    if (!model_.is_omega(a)) level.push_back(TypeExpr::atom(a));

  auto canon_less = [](const TypeExpr& x, const TypeExpr& y) {
    std::string sx = x.str(), sy = y.str();
    return sx.size() != sy.size() ? sx.size() < sy.size() : sx < sy;
  };
  for (int d = 0; d < depth; ++d) {
    std::vector<TypeExpr> cand = level;
    for (const auto& s : level)
      for (const auto& t : level)
        if (!t.is_top()) cand.push_back(TypeExpr::arrow(s, t));
    for (size_t i = 0; i < level.size(); ++i)
      for (size_t j = i + 1; j < level.size(); ++j)
        cand.push_back(TypeExpr::meet(level[i], level[j]));
    std::sort(cand.begin(), cand.end(), canon_less);
    std::vector<TypeExpr> next;
    for (const auto& c : cand) {
      bool dup = false;
      for (const auto& r : next)
        if (eq(c, r)) {
          dup = true;
          break;
        }
      if (!dup) next.push_back(c);
      if (cap && next.size() >= cap) break;
    }
    level = std::move(next);
  }
  return level;
}

// ---------------------------------------------------------------------------
// Model validation.

namespace {

// Reduces an atom multiset by absorbing pairs through the meet table; the
// result is the canonical atom set presenting the same meet.
std::set<std::string> reduce_atom_set(const PartialModel& m, std::set<std::string> s) {
  s.erase(m.omega());
restart:
  if (s.size() > 1) {
    for (auto i = s.begin(); i != s.end(); ++i)
      for (auto j = std::next(i); j != s.end(); ++j) {
        auto t = m.meet_atoms(*i, *j);
        if (t) {
          std::string a = *i, b = *j;
          s.erase(a);
          s.erase(b);
          s.insert(*t);
          goto restart;  // iterators died with the erase
        }
      }
  }
  return s;
}

}  // namespace

std::vector<std::string> check_model(const PartialModel& m) {
  std::vector<std::string> bad;
  auto report = [&](const std::string& s) { bad.push_back(s); };

  for (const auto& a : m.atoms)
    if (a.empty()) report("empty atom name");
  // Table references.
  for (const auto& [k, v] : m.meet_table) {
    if (!m.has_atom(k.first) || !m.has_atom(k.second) || !m.has_atom(v))
      report("meet entry references unknown atom");
  }
  for (const auto& [k, v] : m.arrow_table) {
    if (!m.has_atom(k.first) || !m.has_atom(k.second) || !m.has_atom(v))
      report("arrow entry references unknown atom");
  }

  // Semilattice coherence of the (possibly partial) meet table:
  // meet(a,b)=c requires c <= a and c <= b to be table-visible, and the
  // induced order must be transitive and antisymmetric.
  for (const auto& [k, v] : m.meet_table) {
    if (!m.atom_leq(v, k.first))
      report("meet(" + k.first + "," + k.second + ")=" + v + " but " + v +
             " is not table-below " + k.first);
    if (!m.atom_leq(v, k.second))
      report("meet(" + k.first + "," + k.second + ")=" + v + " but " + v +
             " is not table-below " + k.second);
  }
  for (const auto& a : m.atoms)
    for (const auto& b : m.atoms)
      for (const auto& c : m.atoms) {
        if (m.atom_leq(a, b) && m.atom_leq(b, c) && !m.atom_leq(a, c))
          report("table order not transitive: " + a + " <= " + b + " <= " + c);
        if (a < b && m.atom_leq(a, b) && m.atom_leq(b, a))
          report("table order not antisymmetric: " + a + ", " + b);
      }
  // Associativity of the induced reduction (table meets agree regardless of
  // grouping).
  for (const auto& a : m.atoms)
    for (const auto& b : m.atoms)
      for (const auto& c : m.atoms) {
        if (m.is_omega(a) || m.is_omega(b) || m.is_omega(c)) continue;
        auto lhs = reduce_atom_set(m, {a, b});
        lhs.insert(c);
        auto rhs = reduce_atom_set(m, {b, c});
        rhs.insert(a);
        if (reduce_atom_set(m, lhs) != reduce_atom_set(m, rhs))
          report("meet table not associative on " + a + "," + b + "," + c);
      }

  // ext entries sane (labels over the model; non-w targets).
  for (const auto& [a, pairs] : m.ext_table) {
    if (pairs.empty()) report("ext(" + a + ") is empty (atom would equal w)");
    for (const auto& [s, t] : pairs) {
      std::vector<std::string> names;
      s.collect_atoms(names);
      t.collect_atoms(names);
      for (const auto& n : names)
        if (!m.has_atom(n)) report("ext(" + a + ") references unknown atom '" + n + "'");
      if (t.is_top()) report("ext(" + a + ") has a pair with target w");
    }
  }
  if (!bad.empty()) return bad;  // deeper checks need a coherent presentation

  Session ses(m);
  try {
    // ext reconstruction: each atom equals the meet of its ext arrows.
    for (const auto& a : m.atoms) {
      if (m.is_omega(a)) continue;
      TypeExpr recon = TypeExpr::top();
      for (const auto& [s, t] : m.ext_atom(a))
        recon = TypeExpr::meet(recon, TypeExpr::arrow(s, t));
      if (!ses.eq(TypeExpr::atom(a), recon))
        report("ext reconstruction fails for atom " + a);
    }
    // Arrow table entries agree with the completion order.
    for (const auto& [k, v] : m.arrow_table) {
      TypeExpr lhs = TypeExpr::arrow(
          m.is_omega(k.first) ? TypeExpr::top() : TypeExpr::atom(k.first),
          m.is_omega(k.second) ? TypeExpr::top() : TypeExpr::atom(k.second));
      if (!ses.eq(lhs, m.is_omega(v) ? TypeExpr::top() : TypeExpr::atom(v)))
        report("arrow entry " + k.first + " -> " + k.second + " = " + v +
               " disagrees with the completion");
    }
    // Arrow axiom: same-source entries compose through table meets.
    for (const auto& [k1, v1] : m.arrow_table)
      for (const auto& [k2, v2] : m.arrow_table) {
        if (k1.first != k2.first || k1.second >= k2.second) continue;
        auto mt = m.meet_atoms(k1.second, k2.second);
        if (!mt) continue;  // formal meet: not expressible as a table target
        auto it = m.arrow_table.find({k1.first, *mt});
        auto mv = m.meet_atoms(v1, v2);
        if (it == m.arrow_table.end())
          report("arrow axiom: " + k1.first + " -> " + *mt + " missing");
        else if (!mv || it->second != *mv)
          report("arrow axiom: " + k1.first + " -> " + *mt + " inconsistent");
      }
    // Distributivity (accessibility) over all atom triples.
    std::vector<TypeExpr> cands;
    cands.push_back(TypeExpr::top());
    for (const auto& x : m.atoms)
      if (!m.is_omega(x)) cands.push_back(TypeExpr::atom(x));
    for (const auto& al : m.atoms) {
      if (m.is_omega(al)) continue;
      TypeExpr A = TypeExpr::atom(al);
      for (const auto& be : m.atoms)
        for (const auto& ga : m.atoms) {
          if (m.is_omega(be) || m.is_omega(ga) || be > ga) continue;
          TypeExpr B = TypeExpr::atom(be), G = TypeExpr::atom(ga);
          if (!ses.leq(TypeExpr::meet(B, G), A)) continue;
          bool found = false;
          for (const auto& bp : cands) {
            for (const auto& gp : cands) {
              if (ses.leq(B, bp) && ses.leq(G, gp) &&
                  ses.eq(TypeExpr::meet(bp, gp), A)) {
                found = true;
                break;
              }
            }
            if (found) break;
          }
          if (!found)
            report("distributivity: " + al + " >= " + be + " /\\ " + ga +
                   " has no accessible decomposition");
        }
    }
  } catch (const std::exception& e) {
    report(std::string("validation aborted: ") + e.what());
  }
  return bad;
}

}  // namespace defim
