#include "defim/types.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace defim {

TypeExpr::Factor TypeExpr::Factor::make_atom(std::string name) {
  Factor f;
  f.atom = std::move(name);
  return f;
}

TypeExpr::Factor TypeExpr::Factor::make_arrow(const TypeExpr& s, const TypeExpr& d) {
  Factor f;
  f.src = std::make_shared<const TypeExpr>(s);
  f.dst = std::make_shared<const TypeExpr>(d);
  return f;
}

int TypeExpr::Factor::cmp(const Factor& o) const {
  // Atoms sort before arrows; then lexicographic.
  if (is_atom() != o.is_atom()) return is_atom() ? -1 : 1;
  if (is_atom()) return atom.compare(o.atom);
  if (*src < *o.src) return -1;
  if (*o.src < *src) return 1;
  if (*dst < *o.dst) return -1;
  if (*o.dst < *dst) return 1;
  return 0;
}

std::string TypeExpr::Factor::str() const {
  if (is_atom()) return atom;
  return "(" + src->str() + " -> " + dst->str() + ")";
}

TypeExpr::TypeExpr(std::vector<Factor> fs) : factors_(std::move(fs)) {
  std::sort(factors_.begin(), factors_.end(),
            [](const Factor& a, const Factor& b) { return a.cmp(b) < 0; });
  factors_.erase(std::unique(factors_.begin(), factors_.end(),
                             [](const Factor& a, const Factor& b) { return a.cmp(b) == 0; }),
                 factors_.end());
}

TypeExpr TypeExpr::top() { return TypeExpr(); }

TypeExpr TypeExpr::atom(const std::string& name) {
  return TypeExpr({Factor::make_atom(name)});
}

TypeExpr TypeExpr::arrow(const TypeExpr& src, const TypeExpr& dst) {
  if (dst.is_top()) return top();  // s -> w collapses to w
  return TypeExpr({Factor::make_arrow(src, dst)});
}

TypeExpr TypeExpr::meet(const TypeExpr& a, const TypeExpr& b) {
  std::vector<Factor> fs = a.factors_;
  fs.insert(fs.end(), b.factors_.begin(), b.factors_.end());
  return TypeExpr(std::move(fs));
}

TypeExpr TypeExpr::meet_all(const std::vector<TypeExpr>& xs) {
  TypeExpr acc;
  for (const auto& x : xs) acc = meet(acc, x);
  return acc;
}

bool TypeExpr::is_atom() const {
  return factors_.size() == 1 && factors_[0].is_atom();
}

bool TypeExpr::is_arrow() const {
  return factors_.size() == 1 && !factors_[0].is_atom();
}

const std::string& TypeExpr::atom_name() const {
  assert(is_atom());
  return factors_[0].atom;
}

TypeExpr TypeExpr::factor_expr(size_t i) const {
  assert(i < factors_.size());
  return TypeExpr({factors_[i]});
}

void TypeExpr::collect_atoms(std::vector<std::string>& out) const {
  for (const auto& f : factors_) {
    if (f.is_atom()) {
      out.push_back(f.atom);
    } else {
      f.src->collect_atoms(out);
      f.dst->collect_atoms(out);
    }
  }
}

std::string TypeExpr::str() const {
  if (factors_.empty()) return "w";
  std::string s;
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += " /\\ ";
    s += factors_[i].str();
  }
  return s;
}

bool TypeExpr::operator==(const TypeExpr& o) const {
  if (factors_.size() != o.factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].cmp(o.factors_[i]) != 0) return false;
  return true;
}

bool TypeExpr::operator<(const TypeExpr& o) const {
  size_t n = std::min(factors_.size(), o.factors_.size());
  for (size_t i = 0; i < n; ++i) {
    int c = factors_[i].cmp(o.factors_[i]);
    if (c) return c < 0;
  }
  return factors_.size() < o.factors_.size();
}

}  // namespace defim
