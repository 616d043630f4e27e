// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "meld/errors.hpp"
#include "meld/numeric.hpp"
#include "meld/tableau.hpp"

namespace meld {

enum class IndexPos { lower, upper };

struct IndexToken {
  std::string name;
  IndexPos pos = IndexPos::lower;

  bool operator==(const IndexToken&) const = default;
  auto operator<=>(const IndexToken&) const = default;
};

struct TensorFactor {
  std::string head;
  std::vector<IndexToken> indices;

  int arity() const { return static_cast<int>(indices.size()); }
  bool operator==(const TensorFactor&) const = default;
};

// Polynomial in declared scalar symbols with exact rational coefficients:
// a map from a sorted symbol multiset to its weight. The empty multiset is the
// pure number part. Zero weights are never stored.
class Coefficient {
 public:
  using Key = std::vector<std::string>;

  Coefficient() = default;
  explicit Coefficient(Rational r) {
    if (r != 0) terms_[{}] = std::move(r);
  }
  static Coefficient one() { return Coefficient(Rational(1)); }
  static Coefficient symbol(const std::string& name) {
    Coefficient c;
    c.terms_[{name}] = 1;
    return c;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }
  Rational rational_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_rational()) throw Error(ErrorCode::bad_script, "coefficient is not a pure number");
    return terms_.begin()->second;
  }
  bool is_one() const { return is_rational() && rational_value() == 1; }
  bool is_minus_one() const { return is_rational() && rational_value() == -1; }

  const std::map<Key, Rational>& terms() const { return terms_; }
  std::set<std::string> symbols() const {
    std::set<std::string> out;
    for (const auto& [k, v] : terms_) out.insert(k.begin(), k.end());
    return out;
  }

  Coefficient& operator+=(const Coefficient& o) {
    for (const auto& [k, v] : o.terms_) add(k, v);
    return *this;
  }
  Coefficient& operator-=(const Coefficient& o) {
    for (const auto& [k, v] : o.terms_) add(k, -v);
    return *this;
  }
  Coefficient& operator*=(const Rational& r) {
    if (r == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v *= r;
    return *this;
  }
  Coefficient operator*(const Coefficient& o) const {
    Coefficient out;
    for (const auto& [ka, va] : terms_)
      for (const auto& [kb, vb] : o.terms_) {
        Key k = ka;
        k.insert(k.end(), kb.begin(), kb.end());
        std::sort(k.begin(), k.end());
        out.add(k, va * vb);
      }
    return out;
  }
  Coefficient operator*(const Rational& r) const {
    Coefficient out = *this;
    out *= r;
    return out;
  }
  Coefficient operator-() const {
    Coefficient out = *this;
    out *= Rational(-1);
    return out;
  }

  bool operator==(const Coefficient&) const = default;

 private:
  void add(const Key& k, const Rational& v) {
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      if (v != 0) terms_[k] = v;
      return;
    }
    it->second += v;
    if (it->second == 0) terms_.erase(it);
  }

  std::map<Key, Rational> terms_;
};

struct Monomial {
  Coefficient coeff = Coefficient::one();
  std::vector<TensorFactor> factors;
  bool trace = false;

  bool same_structure(const Monomial& o) const {
    return trace == o.trace && factors == o.factors;
  }
  bool operator==(const Monomial&) const = default;
};

struct Expression {
  std::vector<Monomial> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const Expression&) const = default;
};

enum class PropKind {
  symmetric,
  anti_symmetric,
  riemann,
  tableau,
  trace,
  non_commuting,
  scalar_symbol,
};

struct PropertyDecl {
  std::string head;
  int arity = 0;                         // -1 when flexible (bare NonCommuting / Trace heads)
  PropKind kind = PropKind::tableau;
  std::optional<SymmetrySpec> symmetry;  // present for tableau-backed kinds
};

class SymbolTable {
 public:
  void declare(PropertyDecl d) {
    expand_symmetry(d);
    auto it = decls_.find(d.head);
    if (it != decls_.end()) {
      if (it->second.kind != d.kind || it->second.arity != d.arity)
        throw Error(ErrorCode::bad_script, "conflicting redeclaration of '" + d.head + "'");
      it->second = std::move(d);
      return;
    }
    decls_.emplace(d.head, std::move(d));
  }

  const PropertyDecl* find(const std::string& head) const {
    auto it = decls_.find(head);
    return it == decls_.end() ? nullptr : &it->second;
  }

  bool is_scalar_symbol(const std::string& name) const {
    const PropertyDecl* d = find(name);
    return d && d->kind == PropKind::scalar_symbol;
  }
  bool is_trace_head(const std::string& name) const {
    const PropertyDecl* d = find(name);
    return d && d->kind == PropKind::trace;
  }
  bool is_non_commuting(const std::string& name) const {
    const PropertyDecl* d = find(name);
    return d && d->kind == PropKind::non_commuting;
  }
  const SymmetrySpec* symmetry_of(const std::string& head) const {
    const PropertyDecl* d = find(head);
    return (d && d->symmetry) ? &*d->symmetry : nullptr;
  }
  std::string trace_head_or_default() const {
    for (const auto& [name, d] : decls_)
      if (d.kind == PropKind::trace) return name;
    return "Tr";
  }

 private:
  // Symmetric/AntiSymmetric/RiemannTensor are shorthand for fixed fillings.
  static void expand_symmetry(PropertyDecl& d) {
    switch (d.kind) {
      case PropKind::symmetric: {
        if (d.arity < 1)
          throw Error(ErrorCode::unknown_symbol_arity, "Symmetric needs indices: " + d.head);
        d.symmetry = SymmetrySpec::single(FilledTableau::row_major(Diagram::make({d.arity})));
        break;
      }
      case PropKind::anti_symmetric: {
        if (d.arity < 1)
          throw Error(ErrorCode::unknown_symbol_arity, "AntiSymmetric needs indices: " + d.head);
        d.symmetry = SymmetrySpec::single(
            FilledTableau::row_major(Diagram::make(std::vector<int>(static_cast<size_t>(d.arity), 1))));
        break;
      }
      case PropKind::riemann: {
        if (d.arity != 4)
          throw Error(ErrorCode::unknown_symbol_arity, "RiemannTensor needs four indices: " + d.head);
        d.symmetry = SymmetrySpec::single(FilledTableau::make({{0, 2}, {1, 3}}));
        break;
      }
      case PropKind::tableau: {
        if (!d.symmetry)
          throw Error(ErrorCode::bad_script, "TableauSymmetry without tableaux: " + d.head);
        validate_spec(*d.symmetry, d.arity, d.head);
        break;
      }
      default:
        break;
    }
  }

  static void validate_spec(const SymmetrySpec& s, int arity, const std::string& head) {
    std::set<int> used;  // product members must not overlap
    for (const auto& m : s.members) {
      for (int slot : m.slots()) {
        if (slot < 0 || slot >= arity)
          throw Error(ErrorCode::overlapping_tableau_slots,
                      "slot out of range in tableau for '" + head + "'");
        if (s.kind == SymmetrySpec::Kind::product && !used.insert(slot).second)
          throw Error(ErrorCode::overlapping_tableau_slots,
                      "product tableaux share slot " + std::to_string(slot) + " in '" + head + "'");
      }
    }
    if (s.kind == SymmetrySpec::Kind::hermitian_sum) {
      int n = s.members.at(0).cells();
      for (const auto& m : s.members)
        if (m.cells() != n)
          throw Error(ErrorCode::overlapping_tableau_slots,
                      "hermitian sum members must cover one slot set in '" + head + "'");
    }
  }

  std::map<std::string, PropertyDecl> decls_;
};

// Occurrence census of index names within one monomial. Names seen once are
// free, twice contracted, three times an error.
inline std::map<std::string, int> index_occurrences(const Monomial& m) {
  std::map<std::string, int> occ;
  for (const auto& f : m.factors)
    for (const auto& ix : f.indices) ++occ[ix.name];
  for (const auto& [name, count] : occ)
    if (count > 2)
      throw Error(ErrorCode::index_triple_occurrence,
                  "index '" + name + "' appears " + std::to_string(count) + " times");
  return occ;
}

inline std::set<std::string> free_index_names(const Monomial& m) {
  std::set<std::string> out;
  for (const auto& [name, count] : index_occurrences(m))
    if (count == 1) out.insert(name);
  return out;
}

// Stable reorder of commuting factors by (head, arity); non-commuting factors
// keep their relative order behind the commuting block.
inline void sort_product(Monomial& m, const SymbolTable& tab) {
  std::vector<TensorFactor> commuting, rest;
  for (auto& f : m.factors)
    (tab.is_non_commuting(f.head) ? rest : commuting).push_back(std::move(f));
  std::stable_sort(commuting.begin(), commuting.end(),
                   [](const TensorFactor& a, const TensorFactor& b) {
                     if (a.head != b.head) return a.head < b.head;
                     return a.indices.size() < b.indices.size();
                   });
  m.factors = std::move(commuting);
  m.factors.insert(m.factors.end(), std::make_move_iterator(rest.begin()),
                   std::make_move_iterator(rest.end()));
}

inline void sort_product(Expression& e, const SymbolTable& tab) {
  for (auto& m : e.terms) sort_product(m, tab);
}

// Sum coefficients of structurally identical monomials, preserving the order
// of first appearance; zero-coefficient terms vanish.
inline Expression collect_terms(const Expression& e) {
  Expression out;
  for (const auto& m : e.terms) {
    if (m.coeff.is_zero()) continue;
    auto it = std::find_if(out.terms.begin(), out.terms.end(),
                           [&](const Monomial& o) { return o.same_structure(m); });
    if (it == out.terms.end())
      out.terms.push_back(m);
    else
      it->coeff += m.coeff;
  }
  std::erase_if(out.terms, [](const Monomial& m) { return m.coeff.is_zero(); });
  return out;
}

inline Expression operator+(Expression a, const Expression& b) {
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  return a;
}

inline Expression scale(Expression e, const Coefficient& c) {
  for (auto& m : e.terms) m.coeff = m.coeff * c;
  std::erase_if(e.terms, [](const Monomial& m) { return m.coeff.is_zero(); });
  return e;
}

// Order-insensitive structural equality, used widely in tests.
inline bool equivalent(const Expression& a, const Expression& b) {
  Expression ca = collect_terms(a), cb = collect_terms(b);
  if (ca.terms.size() != cb.terms.size()) return false;
  for (const auto& m : ca.terms) {
    auto it = std::find_if(cb.terms.begin(), cb.terms.end(),
                           [&](const Monomial& o) { return o.same_structure(m); });
    if (it == cb.terms.end() || !(it->coeff == m.coeff)) return false;
  }
  return true;
}

}  // namespace meld
