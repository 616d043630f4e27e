// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "meld/errors.hpp"
#include "meld/expr.hpp"

// Structural canonicalisation: for each term, close its index arrangement
// under the signed slot permutations generated by the declared mono-term
// symmetries (plus swaps of identical factors), rename dummies by first use,
// and keep the smallest arrangement.  Meeting the same arrangement with both
// signs proves the term vanishes.  This complements meld: it never invents
// multi-term identities, it just picks one representative per orbit.

namespace meld {

namespace detail {

struct SignedGen {
  int sign = 1;
  std::vector<int> image;  // slot t moves to image[t]
};

inline void add_transposition(std::vector<SignedGen>& gens, int width, int a, int b, int sign) {
  SignedGen g;
  g.sign = sign;
  g.image.resize(static_cast<size_t>(width));
  for (int t = 0; t < width; ++t) g.image[static_cast<size_t>(t)] = t;
  std::swap(g.image[static_cast<size_t>(a)], g.image[static_cast<size_t>(b)]);
  gens.push_back(std::move(g));
}

inline std::vector<SignedGen> canonical_generators(const Monomial& m, const SymbolTable& tab) {
  std::vector<SignedGen> gens;
  int width = 0;
  for (const auto& f : m.factors) width += f.arity();
  int off = 0;
  for (const auto& f : m.factors) {
    const PropertyDecl* d = tab.find(f.head);
    int a = f.arity();
    if (d && a >= 2) {
      switch (d->kind) {
        case PropKind::symmetric:
          for (int k = 0; k + 1 < a; ++k) add_transposition(gens, width, off + k, off + k + 1, 1);
          break;
        case PropKind::anti_symmetric:
          for (int k = 0; k + 1 < a; ++k) add_transposition(gens, width, off + k, off + k + 1, -1);
          break;
        case PropKind::riemann: {
          add_transposition(gens, width, off + 0, off + 1, -1);
          SignedGen g;  // exchange the two index pairs
          g.sign = 1;
          g.image.resize(static_cast<size_t>(width));
          for (int t = 0; t < width; ++t) g.image[static_cast<size_t>(t)] = t;
          std::swap(g.image[static_cast<size_t>(off + 0)], g.image[static_cast<size_t>(off + 2)]);
          std::swap(g.image[static_cast<size_t>(off + 1)], g.image[static_cast<size_t>(off + 3)]);
          gens.push_back(std::move(g));
          break;
        }
        case PropKind::tableau:
          // A general tableau is a multi-term projection, not a mono-term
          // symmetry; there is no signed slot group to close over.
          throw Error(ErrorCode::unsupported_tableau,
                      "canonicalise cannot handle head '" + f.head +
                          "': its symmetry is a general tableau, not a mono-term property");
        default:
          break;
      }
    }
    off += a;
  }
  // identical factors may be swapped wholesale
  for (size_t i = 0; i < m.factors.size(); ++i)
    for (size_t j = i + 1; j < m.factors.size(); ++j) {
      if (m.factors[i].head != m.factors[j].head ||
          m.factors[i].arity() != m.factors[j].arity())
        continue;
      int a = m.factors[i].arity();
      if (a == 0) continue;
      int oi = 0, oj = 0;
      for (size_t k = 0; k < i; ++k) oi += m.factors[k].arity();
      for (size_t k = 0; k < j; ++k) oj += m.factors[k].arity();
      SignedGen g;
      g.sign = 1;
      g.image.resize(static_cast<size_t>(width));
      for (int t = 0; t < width; ++t) g.image[static_cast<size_t>(t)] = t;
      for (int k = 0; k < a; ++k) {
        g.image[static_cast<size_t>(oi + k)] = oj + k;
        g.image[static_cast<size_t>(oj + k)] = oi + k;
      }
      gens.push_back(std::move(g));
    }
  return gens;
}

}  // namespace detail

inline Expression canonicalise(const Expression& input, const SymbolTable& tab,
                               std::size_t max_closure = 1'000'000) {
  Expression e = input;
  sort_product(e, tab);
  Expression out;
  for (const Monomial& m : e.terms) {
    std::vector<IndexToken> slots;
    for (const auto& f : m.factors)
      slots.insert(slots.end(), f.indices.begin(), f.indices.end());
    auto occ = index_occurrences(m);

    std::vector<detail::SignedGen> gens = detail::canonical_generators(m, tab);
    std::map<std::vector<IndexToken>, int> seen;
    std::deque<const std::vector<IndexToken>*> queue;
    bool zero = false;
    seen[slots] = 1;
    queue.push_back(&seen.begin()->first);
    while (!queue.empty() && !zero) {
      const std::vector<IndexToken> cur = *queue.front();
      int sign = seen.at(cur);
      queue.pop_front();
      for (const auto& g : gens) {
        std::vector<IndexToken> next(cur.size());
        for (size_t t = 0; t < cur.size(); ++t) next[static_cast<size_t>(g.image[t])] = cur[t];
        int nsign = sign * g.sign;
        auto it = seen.find(next);
        if (it == seen.end()) {
          if (seen.size() >= max_closure)
            throw Error(ErrorCode::closure_too_large,
                        "symmetry closure exceeded " + std::to_string(max_closure) + " states");
          auto ins = seen.emplace(std::move(next), nsign).first;
          queue.push_back(&ins->first);
        } else if (it->second != nsign) {
          zero = true;
          break;
        }
      }
    }
    if (zero) continue;

    // dummies are renamed by first use from the sorted original pool
    std::vector<std::string> pool;
    for (const auto& [name, count] : occ)
      if (count == 2) pool.push_back(name);

    auto rename = [&](const std::vector<IndexToken>& arr) {
      std::vector<IndexToken> out_arr = arr;
      std::map<std::string, std::string> map;
      size_t next_d = 0;
      for (auto& ix : out_arr) {
        if (occ.at(ix.name) != 2) continue;
        auto it = map.find(ix.name);
        if (it == map.end()) it = map.emplace(ix.name, pool[next_d++]).first;
        ix.name = it->second;
      }
      return out_arr;
    };
    auto rank_key = [&](const std::vector<IndexToken>& arr) {
      std::vector<std::pair<int, std::string>> key;
      key.reserve(arr.size());
      for (const auto& ix : arr) key.push_back({occ.at(ix.name) == 2 ? 1 : 0, ix.name});
      return key;
    };

    bool have = false;
    std::vector<IndexToken> best;
    std::vector<std::pair<int, std::string>> best_key;
    int best_sign = 1;
    std::map<std::vector<IndexToken>, int> renamed_signs;
    for (const auto& [arr, sign] : seen) {
      std::vector<IndexToken> cand = rename(arr);
      auto [it, fresh] = renamed_signs.emplace(cand, sign);
      if (!fresh && it->second != sign) {
        zero = true;
        break;
      }
      auto key = rank_key(cand);
      if (!have || key < best_key) {
        have = true;
        best = std::move(cand);
        best_key = std::move(key);
        best_sign = sign;
      }
    }
    if (zero) continue;

    Monomial r = m;
    size_t t = 0;
    for (auto& f : r.factors)
      for (auto& ix : f.indices) ix = best[t++];
    if (best_sign < 0) r.coeff = -r.coeff;
    out.terms.push_back(std::move(r));
  }
  return collect_terms(out);
}

}  // namespace meld
