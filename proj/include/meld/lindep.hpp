// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "meld/adjform.hpp"
#include "meld/numeric.hpp"

// Decides, exactly, whether a projected row set is a linear combination of
// the sets seen before it, and if so of which coefficients.  Rows are keyed
// by their entry vectors; each new key gets the next id, so pivot choice and
// the resulting coefficients are deterministic.  Internally this is
// incremental Gaussian elimination over the rationals: alongside each stored
// original we keep a reduced column in echelon form plus the transform row
// expressing it over the originals.

namespace meld {

struct ExpressOutcome {
  bool independent = false;
  std::vector<Rational> coeffs;  // over previously appended members, append order
};

class ProjectionBasis {
 public:
  // Looks for rows == sum coeffs[i] * member_i.  A dependent set reports its
  // coefficients (all zero for an identically vanishing projection); an
  // independent set is appended as the next member.
  ExpressOutcome try_express_and_add(const RowSet& rows) {
    Sparse v;
    bool new_keys = build(rows, v);
    // forward elimination against the echelon columns
    std::vector<Rational> c(reduced_.size());
    Sparse r = std::move(v);
    for (size_t i = 0; i < reduced_.size(); ++i) {
      const Rational* at = find(r, pivots_[i]);
      if (!at) continue;
      c[i] = *at / reduced_[i].front().val;
      axpy(r, -c[i], reduced_[i]);
    }
    if (r.empty() && !new_keys) {
      ExpressOutcome out;
      out.independent = false;
      out.coeffs.assign(reduced_.size(), Rational(0));
      for (size_t i = 0; i < reduced_.size(); ++i) {
        if (c[i] == 0) continue;
        for (size_t j = 0; j < tf_[i].size(); ++j) out.coeffs[j] += c[i] * tf_[i][j];
      }
      return out;
    }
    // independent: the residual becomes the next echelon column
    std::vector<Rational> t(reduced_.size() + 1, Rational(0));
    t.back() = 1;
    for (size_t i = 0; i < reduced_.size(); ++i) {
      if (c[i] == 0) continue;
      for (size_t j = 0; j < tf_[i].size(); ++j) t[j] -= c[i] * tf_[i][j];
    }
    pivots_.push_back(r.front().id);
    reduced_.push_back(std::move(r));
    tf_.push_back(std::move(t));
    ExpressOutcome out;
    out.independent = true;
    return out;
  }

  size_t size() const { return reduced_.size(); }
  size_t key_count() const { return key_ids_.size(); }

 private:
  struct Ent {
    uint32_t id;
    Rational val;
  };
  using Sparse = std::vector<Ent>;  // ascending id, no zeros

  // Registers unseen keys (so an independent set can be appended directly)
  // and reports whether any were new, which already proves independence.
  bool build(const RowSet& rows, Sparse& out) {
    bool new_keys = false;
    std::vector<std::pair<uint32_t, size_t>> order;
    order.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      auto key = rows.row_vector(i);
      auto it = key_ids_.find(key);
      if (it == key_ids_.end()) {
        it = key_ids_.emplace(std::move(key), static_cast<uint32_t>(key_ids_.size())).first;
        new_keys = true;
      }
      order.push_back({it->second, i});
    }
    std::sort(order.begin(), order.end());
    out.clear();
    out.reserve(order.size());
    for (const auto& [id, i] : order) out.push_back(Ent{id, Rational(rows.weight(i))});
    return new_keys;
  }

  static const Rational* find(const Sparse& v, uint32_t id) {
    auto it = std::lower_bound(v.begin(), v.end(), id,
                               [](const Ent& e, uint32_t x) { return e.id < x; });
    return (it != v.end() && it->id == id) ? &it->val : nullptr;
  }

  // v += q * w, keeping v sorted and zero-free
  static void axpy(Sparse& v, const Rational& q, const Sparse& w) {
    Sparse out;
    out.reserve(v.size() + w.size());
    size_t i = 0, j = 0;
    while (i < v.size() || j < w.size()) {
      if (j == w.size() || (i < v.size() && v[i].id < w[j].id)) {
        out.push_back(std::move(v[i++]));
      } else if (i == v.size() || w[j].id < v[i].id) {
        out.push_back(Ent{w[j].id, q * w[j].val});
        ++j;
      } else {
        Rational s = std::move(v[i].val);
        s += q * w[j].val;
        if (s != 0) out.push_back(Ent{v[i].id, std::move(s)});
        ++i;
        ++j;
      }
    }
    v = std::move(out);
  }

  std::map<std::vector<int16_t>, uint32_t> key_ids_;
  std::vector<Sparse> reduced_;
  std::vector<uint32_t> pivots_;
  std::vector<std::vector<Rational>> tf_;
};

}  // namespace meld
