// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "meld/errors.hpp"
#include "meld/numeric.hpp"

// Young diagrams arranged top-left; fillings hold 0-based slot labels.

namespace meld {

struct Diagram {
  std::vector<int> rows;  // non-increasing, all positive

  static Diagram make(std::vector<int> rows) {
    if (rows.empty()) throw Error(ErrorCode::bad_script, "empty diagram");
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i] <= 0) throw Error(ErrorCode::bad_script, "diagram row of non-positive length");
      if (i > 0 && rows[i] > rows[i - 1])
        throw Error(ErrorCode::bad_script, "diagram rows must be non-increasing");
    }
    return Diagram{std::move(rows)};
  }

  int cells() const {
    int n = 0;
    for (int r : rows) n += r;
    return n;
  }

  bool operator==(const Diagram&) const = default;
};

// Column profile c_k = number of rows of length >= k+1, i.e. the conjugate shape.
inline Diagram column_profile(const Diagram& d) {
  std::vector<int> cols(static_cast<size_t>(d.rows[0]), 0);
  for (int r : d.rows)
    for (int k = 0; k < r; ++k) ++cols[static_cast<size_t>(k)];
  return Diagram{std::move(cols)};
}

// Product of hook lengths: for each cell, arm + leg + 1.
inline Int hook_normalization(const Diagram& d) {
  Diagram cols = column_profile(d);
  Int product = 1;
  for (size_t i = 0; i < d.rows.size(); ++i)
    for (int j = 0; j < d.rows[i]; ++j) {
      int hook = (d.rows[i] - j) + (cols.rows[static_cast<size_t>(j)] - static_cast<int>(i)) - 1;
      product *= hook;
    }
  return product;
}

struct FilledTableau {
  std::vector<std::vector<int>> rows;  // slot labels, one vector per row

  static FilledTableau make(std::vector<std::vector<int>> rows) {
    FilledTableau t{std::move(rows)};
    t.shape();  // validates row lengths
    std::vector<int> seen;
    for (const auto& r : t.rows)
      for (int s : r) {
        if (s < 0) throw Error(ErrorCode::overlapping_tableau_slots, "negative slot label");
        if (std::find(seen.begin(), seen.end(), s) != seen.end())
          throw Error(ErrorCode::overlapping_tableau_slots,
                      "slot " + std::to_string(s) + " repeated in tableau");
        seen.push_back(s);
      }
    return t;
  }

  Diagram shape() const {
    std::vector<int> lens;
    lens.reserve(rows.size());
    for (const auto& r : rows) lens.push_back(static_cast<int>(r.size()));
    return Diagram::make(lens);
  }

  int cells() const {
    int n = 0;
    for (const auto& r : rows) n += static_cast<int>(r.size());
    return n;
  }

  std::vector<int> slots() const {
    std::vector<int> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
  }

  // Column k = the k-th cell of every row that is long enough.
  std::vector<std::vector<int>> columns() const {
    std::vector<std::vector<int>> cols(rows.empty() ? 0 : rows[0].size());
    for (const auto& r : rows)
      for (size_t j = 0; j < r.size(); ++j) cols[j].push_back(r[j]);
    return cols;
  }

  FilledTableau offset(int delta) const {
    FilledTableau t = *this;
    for (auto& r : t.rows)
      for (int& s : r) s += delta;
    return t;
  }

  // Row-major filling 0..n-1 of a shape: the natural filling for declared
  // Symmetric / AntiSymmetric / RiemannTensor heads.
  static FilledTableau row_major(const Diagram& d) {
    FilledTableau t;
    int next = 0;
    for (int len : d.rows) {
      std::vector<int> r(static_cast<size_t>(len));
      for (int& s : r) s = next++;
      t.rows.push_back(std::move(r));
    }
    return t;
  }

  bool operator==(const FilledTableau&) const = default;
};

// Backtracking generation: label k goes into the lowest-numbered row that can
// accept it, recursing over all admissible rows, which yields a fixed
// lexicographic order on the row-assignment sequences.
inline void standard_tableaux_rec(const Diagram& d, std::vector<int>& fill, int label, int n,
                                  std::vector<FilledTableau>& out) {
  if (label == n) {
    FilledTableau t;
    for (size_t i = 0; i < d.rows.size(); ++i)
      t.rows.emplace_back(static_cast<size_t>(d.rows[i]));
    // fill[k] = row of label k; columns increase because rows fill left to right
    std::vector<int> pos(d.rows.size(), 0);
    for (int k = 0; k < n; ++k) {
      int r = fill[static_cast<size_t>(k)];
      t.rows[static_cast<size_t>(r)][static_cast<size_t>(pos[static_cast<size_t>(r)]++)] = k;
    }
    out.push_back(std::move(t));
    return;
  }
  std::vector<int> counts(d.rows.size(), 0);
  for (int k = 0; k < label; ++k) ++counts[static_cast<size_t>(fill[static_cast<size_t>(k)])];
  for (size_t r = 0; r < d.rows.size(); ++r) {
    if (counts[r] >= d.rows[r]) continue;                 // row full
    if (r > 0 && counts[r] >= counts[r - 1]) continue;    // column would decrease
    fill[static_cast<size_t>(label)] = static_cast<int>(r);
    standard_tableaux_rec(d, fill, label + 1, n, out);
  }
}

inline std::vector<FilledTableau> standard_tableaux(const Diagram& d) {
  std::vector<FilledTableau> out;
  std::vector<int> fill(static_cast<size_t>(d.cells()));
  standard_tableaux_rec(d, fill, 0, d.cells(), out);
  return out;
}

// All partitions of n in reverse-lexicographic order: (n), (n-1,1), ..., (1^n).
inline std::vector<Diagram> partitions(int n) {
  std::vector<Diagram> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rest, int maxPart) -> void {
    if (rest == 0) {
      out.push_back(Diagram{cur});
      return;
    }
    for (int p = std::min(rest, maxPart); p >= 1; --p) {
      cur.push_back(p);
      self(self, rest - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

struct SymmetrySpec {
  enum class Kind { single, product, hermitian_sum };
  Kind kind = Kind::single;
  std::vector<FilledTableau> members;

  static SymmetrySpec single(FilledTableau t) {
    return SymmetrySpec{Kind::single, {std::move(t)}};
  }
};

// The recursive factor chain of the hermitian projector: the tableau is
// sandwiched between the chains of the tableau with its largest label removed,
// down to two cells where the plain projector is already hermitian.
inline FilledTableau strip_last_cell(const FilledTableau& t) {
  int best = -1;
  for (const auto& r : t.rows)
    for (int s : r) best = std::max(best, s);
  FilledTableau out;
  for (const auto& r : t.rows) {
    std::vector<int> nr;
    for (int s : r)
      if (s != best) nr.push_back(s);
    if (!nr.empty()) out.rows.push_back(std::move(nr));
  }
  // the stripped cell must sit at a removable corner or the shape degenerates
  for (size_t i = 1; i < out.rows.size(); ++i)
    if (out.rows[i].size() > out.rows[i - 1].size())
      throw Error(ErrorCode::bad_script,
                  "hermitian sum member is not peelable by its largest label");
  return out;
}

inline void hermitian_chain_rec(const FilledTableau& t, std::vector<FilledTableau>& seq) {
  if (t.cells() <= 2) {
    seq.push_back(t);
    return;
  }
  FilledTableau inner = strip_last_cell(t);
  hermitian_chain_rec(inner, seq);
  seq.push_back(t);
  hermitian_chain_rec(inner, seq);
}

inline std::vector<FilledTableau> hermitian_chain(const FilledTableau& t) {
  std::vector<FilledTableau> seq;
  hermitian_chain_rec(t, seq);
  return seq;
}

// Work bound N(Y) = prod r_k! * prod c_k! for one tableau; products multiply,
// hermitian sums add the bound of each member's full factor chain.
inline Int tableau_work_bound(const FilledTableau& t) {
  Diagram shape = t.shape();
  Int b = 1;
  for (int r : shape.rows) b *= factorial(r);
  for (int c : column_profile(shape).rows) b *= factorial(c);
  return b;
}

inline Int term_count_bound(const SymmetrySpec& s) {
  switch (s.kind) {
    case SymmetrySpec::Kind::single:
      return tableau_work_bound(s.members.at(0));
    case SymmetrySpec::Kind::product: {
      Int b = 1;
      for (const auto& m : s.members) b *= tableau_work_bound(m);
      return b;
    }
    case SymmetrySpec::Kind::hermitian_sum: {
      Int b = 0;
      for (const auto& m : s.members) {
        Int chain = 1;
        for (const auto& link : hermitian_chain(m)) chain *= tableau_work_bound(link);
        b += chain;
      }
      return b;
    }
  }
  return 0;
}

}  // namespace meld
