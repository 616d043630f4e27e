// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "meld/errors.hpp"
#include "meld/expr.hpp"
#include "meld/numeric.hpp"

// Adjacency form: a tensor monomial becomes a row of int16 entries, one per
// index slot.  entries[i] >= 0 points at the partner slot of a contracted
// pair (entries[entries[i]] == i); entries[i] < 0 names a free index, id -1,
// -2, ... in a fixed per-expression order.  Index names drop out entirely, so
// dummy relabelling is free, and permuting slots is an exact operation on
// small integers.  Weights stay as exact big integers; nothing is divided
// until a row set is rendered back into an expression.

namespace meld {

struct Skeleton {
  std::vector<std::pair<std::string, int>> factors;  // (head, slot count) in order
  bool trace = false;

  auto operator<=>(const Skeleton&) const = default;

  int total_slots() const {
    int n = 0;
    for (const auto& [h, a] : factors) n += a;
    return n;
  }
  int offset(size_t factor) const {
    int n = 0;
    for (size_t i = 0; i < factor; ++i) n += factors[i].second;
    return n;
  }
};

inline Skeleton skeleton_of(const Monomial& m) {
  Skeleton s;
  s.trace = m.trace;
  for (const auto& f : m.factors) s.factors.push_back({f.head, f.arity()});
  return s;
}

// Free index names in order of first appearance across the expression; the
// name at position k is rendered as id -(k+1).
inline std::vector<std::string> free_names_in_order(const Expression& e) {
  std::vector<std::string> out;
  for (const auto& m : e.terms) {
    auto occ = index_occurrences(m);
    for (const auto& f : m.factors)
      for (const auto& ix : f.indices)
        if (occ.at(ix.name) == 1 && std::find(out.begin(), out.end(), ix.name) == out.end())
          out.push_back(ix.name);
  }
  return out;
}

// A merged set of rows over one skeleton, stored flat.
class RowSet {
 public:
  RowSet() = default;
  explicit RowSet(int width) : width_(width) {}

  int width() const { return width_; }
  size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  std::span<const int16_t> row(size_t i) const {
    return {data_.data() + i * static_cast<size_t>(width_), static_cast<size_t>(width_)};
  }
  std::vector<int16_t> row_vector(size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }
  const Int& weight(size_t i) const { return weights_[i]; }
  Int& weight(size_t i) { return weights_[i]; }

  void push_row(std::span<const int16_t> entries, Int w) {
    data_.insert(data_.end(), entries.begin(), entries.end());
    weights_.push_back(std::move(w));
  }

  // Sorts rows lexicographically, combines equal rows, drops zero weights.
  void sort_merge() {
    size_t n = size();
    if (n == 0) return;
    std::vector<uint32_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = static_cast<uint32_t>(i);
    const size_t w = static_cast<size_t>(width_);
    const int16_t* base = data_.data();
    std::sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) {
      return std::lexicographical_compare(base + a * w, base + a * w + w, base + b * w,
                                          base + b * w + w);
    });
    std::vector<int16_t> nd;
    std::vector<Int> nw;
    nd.reserve(data_.size());
    nw.reserve(n);
    size_t i = 0;
    while (i < n) {
      const int16_t* r = base + idx[i] * w;
      Int acc = weights_[idx[i]];
      size_t j = i + 1;
      while (j < n && std::memcmp(base + idx[j] * w, r, w * sizeof(int16_t)) == 0) {
        acc += weights_[idx[j]];
        ++j;
      }
      if (acc != 0) {
        nd.insert(nd.end(), r, r + w);
        nw.push_back(std::move(acc));
      }
      i = j;
    }
    data_ = std::move(nd);
    weights_ = std::move(nw);
  }

  // Exact equality of merged sets (both must be sort_merged).
  friend bool operator==(const RowSet& a, const RowSet& b) {
    return a.width_ == b.width_ && a.data_ == b.data_ && a.weights_ == b.weights_;
  }

  const Int* find(std::span<const int16_t> entries) const {
    // linear scan; fine for test-sized sets
    for (size_t i = 0; i < size(); ++i) {
      auto r = row(i);
      if (std::equal(r.begin(), r.end(), entries.begin(), entries.end())) return &weights_[i];
    }
    return nullptr;
  }

  Int total_weight_abs() const {
    Int t = 0;
    for (const auto& w : weights_) t += abs(w);
    return t;
  }

  void scale_weights(const Int& k) {
    for (auto& w : weights_) w *= k;
  }

 private:
  int width_ = 0;
  std::vector<int16_t> data_;
  std::vector<Int> weights_;
};

// Builds the single adjacency row of one monomial (weight 1).
inline RowSet single_row(const Monomial& m, const std::vector<std::string>& free_names) {
  Skeleton skel = skeleton_of(m);
  int width = skel.total_slots();
  if (width > std::numeric_limits<int16_t>::max())
    throw Error(ErrorCode::row_limit, "too many index slots");
  std::vector<int16_t> row(static_cast<size_t>(width), 0);
  std::map<std::string, int> first_seen;
  std::map<std::string, int> occ = index_occurrences(m);
  int t = 0;
  for (const auto& f : m.factors) {
    for (const auto& ix : f.indices) {
      if (occ.at(ix.name) == 2) {
        auto it = first_seen.find(ix.name);
        if (it == first_seen.end()) {
          first_seen[ix.name] = t;
        } else {
          row[static_cast<size_t>(t)] = static_cast<int16_t>(it->second);
          row[static_cast<size_t>(it->second)] = static_cast<int16_t>(t);
        }
      } else {
        auto pos = std::find(free_names.begin(), free_names.end(), ix.name);
        if (pos == free_names.end())
          throw Error(ErrorCode::free_index_not_in_map, "free index '" + ix.name + "' not mapped");
        row[static_cast<size_t>(t)] =
            static_cast<int16_t>(-(std::distance(free_names.begin(), pos) + 1));
      }
      ++t;
    }
  }
  RowSet rs(width);
  rs.push_row(row, Int(1));
  return rs;
}

// out[sigma[t]] = in[t] for every slot, then contraction pointers follow
// their targets: any v >= 0 becomes sigma[v].
inline void permute_row(std::span<const int16_t> in, const std::vector<int16_t>& sigma,
                        int16_t* out) {
  const size_t w = in.size();
  for (size_t t = 0; t < w; ++t) out[static_cast<size_t>(sigma[t])] = in[t];
  for (size_t t = 0; t < w; ++t)
    if (out[t] >= 0) out[t] = sigma[static_cast<size_t>(out[t])];
}

// ---- projection plans ----

struct Stage {
  enum class Kind { symmetrize, antisymmetrize, sort, block_symmetrize };
  Kind kind = Kind::symmetrize;
  std::vector<int> slots;     // ascending; sym/antisym/sort
  bool signed_sort = false;   // sort: multiply by the parity of the sorting permutation
  std::vector<int> blocks;    // block_symmetrize: offsets of interchangeable factor blocks
  int block_width = 0;

  size_t multiplicity() const {
    if (kind == Kind::sort) return 1;
    if (kind == Kind::block_symmetrize) return factorial_size(blocks.size());
    return factorial_size(slots.size());
  }
  static size_t factorial_size(size_t k) {
    size_t f = 1;
    for (size_t i = 2; i <= k; ++i) f *= i;
    return f;
  }
};

// One summand of a projector: stages composed left to right, scaled by an
// exact integer weight (used to put hermitian members over a common
// denominator).  A plain tableau projector is a single chain of weight 1.
struct Chain {
  std::vector<Stage> stages;
  Int weight = 1;
};

struct Plan {
  int width = 0;
  std::vector<Chain> chains;
  Int normalization = 1;  // exact divisor applied only when rendering
  Int weight_scale = 1;   // compensates stages dropped by absorption
};

namespace detail {

// Applies one stage to a merged set, merging again afterwards.  Rows are
// emitted in chunks so peak memory stays proportional to the merged size.
inline RowSet apply_stage(const RowSet& in, const Stage& st, size_t max_rows) {
  const int width = in.width();
  const size_t w = static_cast<size_t>(width);

  if (st.kind == Stage::Kind::sort) {
    RowSet out(width);
    std::vector<int16_t> buf(w);
    std::vector<int16_t> vals(st.slots.size());
    for (size_t i = 0; i < in.size(); ++i) {
      auto r = in.row(i);
      std::copy(r.begin(), r.end(), buf.begin());
      for (size_t k = 0; k < st.slots.size(); ++k)
        vals[k] = buf[static_cast<size_t>(st.slots[k])];
      int sign = sort_parity(vals);
      std::sort(vals.begin(), vals.end());
      for (size_t k = 0; k < st.slots.size(); ++k)
        buf[static_cast<size_t>(st.slots[k])] = vals[k];
      Int wgt = in.weight(i);
      if (st.signed_sort && sign < 0) wgt = -wgt;
      out.push_row(buf, std::move(wgt));
    }
    out.sort_merge();
    return out;
  }

  // enumerate the permutations of the stage as an image table
  std::vector<int> base;
  std::vector<int16_t> pos(w, -1);         // slot -> position within the stage
  std::vector<int16_t> image(w);           // full sigma, rebuilt per permutation
  if (st.kind == Stage::Kind::block_symmetrize) {
    base.resize(st.blocks.size());
  } else {
    base.resize(st.slots.size());
    for (size_t k = 0; k < st.slots.size(); ++k) pos[static_cast<size_t>(st.slots[k])] =
        static_cast<int16_t>(k);
  }
  for (size_t k = 0; k < base.size(); ++k) base[k] = static_cast<int>(k);

  const bool anti = st.kind == Stage::Kind::antisymmetrize;
  const size_t chunk_limit = size_t{1} << 22;

  RowSet merged(width);
  RowSet pending(width);
  std::vector<int16_t> buf(w);
  auto flush = [&]() {
    for (size_t i = 0; i < merged.size(); ++i) pending.push_row(merged.row(i), merged.weight(i));
    pending.sort_merge();
    merged = std::move(pending);
    pending = RowSet(width);
    if (merged.size() > max_rows)
      throw Error(ErrorCode::row_limit,
                  "projection exceeded the row limit (" + std::to_string(max_rows) + ")");
  };

  std::vector<int> p = base;
  do {
    int sign = anti ? sort_parity(p) : 1;
    for (size_t t = 0; t < w; ++t) image[t] = static_cast<int16_t>(t);
    if (st.kind == Stage::Kind::block_symmetrize) {
      for (size_t k = 0; k < st.blocks.size(); ++k)
        for (int j = 0; j < st.block_width; ++j)
          image[static_cast<size_t>(st.blocks[k] + j)] =
              static_cast<int16_t>(st.blocks[static_cast<size_t>(p[k])] + j);
    } else {
      for (size_t k = 0; k < st.slots.size(); ++k)
        image[static_cast<size_t>(st.slots[k])] =
            static_cast<int16_t>(st.slots[static_cast<size_t>(p[k])]);
    }
    for (size_t i = 0; i < in.size(); ++i) {
      permute_row(in.row(i), image, buf.data());
      Int wgt = in.weight(i);
      if (sign < 0) wgt = -wgt;
      pending.push_row(buf, std::move(wgt));
      if (pending.size() >= chunk_limit) flush();
    }
  } while (std::next_permutation(p.begin(), p.end()));
  flush();
  return merged;
}

}  // namespace detail

// Runs a plan over an input set.  The result carries plan.weight_scale but
// not the normalization; divide by plan.normalization when rendering.
inline RowSet project(const RowSet& input, const Plan& plan, size_t max_rows) {
  RowSet total(plan.width);
  for (const auto& chain : plan.chains) {
    RowSet cur = input;
    for (const auto& st : chain.stages) {
      cur = detail::apply_stage(cur, st, max_rows);
      if (cur.empty()) break;
    }
    if (chain.weight != 1) cur.scale_weights(chain.weight);
    for (size_t i = 0; i < cur.size(); ++i) total.push_row(cur.row(i), cur.weight(i));
    total.sort_merge();
    if (total.size() > max_rows)
      throw Error(ErrorCode::row_limit,
                  "projection exceeded the row limit (" + std::to_string(max_rows) + ")");
  }
  if (plan.weight_scale != 1) total.scale_weights(plan.weight_scale);
  return total;
}

// Debug rendering: one row per line, entries space-separated, "| weight" suffix.
inline std::string dump(const RowSet& rows) {
  std::string out;
  for (size_t i = 0; i < rows.size(); ++i) {
    auto r = rows.row(i);
    for (size_t t = 0; t < r.size(); ++t) {
      if (t) out += ' ';
      out += std::to_string(r[t]);
    }
    out += " | ";
    out += rows.weight(i).str();
    out += '\n';
  }
  return out;
}

// ---- rendering back to an expression ----

inline Expression to_expression(const Skeleton& skel, const RowSet& rows, const Rational& scale,
                                const std::vector<std::string>& free_names,
                                const Coefficient& coeff) {
  Expression out;
  const int width = skel.total_slots();
  for (size_t i = 0; i < rows.size(); ++i) {
    auto r = rows.row(i);
    // name contraction pairs d1, d2, ... in slot order, skipping free names
    std::vector<std::string> slot_name(static_cast<size_t>(width));
    int next_dummy = 1;
    auto fresh_dummy = [&]() {
      for (;;) {
        std::string cand = "d" + std::to_string(next_dummy++);
        if (std::find(free_names.begin(), free_names.end(), cand) == free_names.end())
          return cand;
      }
    };
    for (int t = 0; t < width; ++t) {
      int16_t v = r[static_cast<size_t>(t)];
      if (v < 0) {
        slot_name[static_cast<size_t>(t)] = free_names.at(static_cast<size_t>(-v - 1));
      } else if (slot_name[static_cast<size_t>(t)].empty()) {
        std::string d = fresh_dummy();
        slot_name[static_cast<size_t>(t)] = d;
        slot_name[static_cast<size_t>(v)] = d;
      }
    }
    Monomial m;
    m.trace = skel.trace;
    Rational q = scale * Rational(rows.weight(i));
    m.coeff = coeff * q;
    int t = 0;
    for (const auto& [head, arity] : skel.factors) {
      TensorFactor f;
      f.head = head;
      for (int k = 0; k < arity; ++k)
        f.indices.push_back(IndexToken{slot_name[static_cast<size_t>(t++)], IndexPos::lower});
      m.factors.push_back(std::move(f));
    }
    if (!m.coeff.is_zero()) out.terms.push_back(std::move(m));
  }
  return collect_terms(out);
}

}  // namespace meld
