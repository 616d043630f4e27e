// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <vector>

#include "meld/adjform.hpp"
#include "meld/expr.hpp"
#include "meld/tableau.hpp"

// Builds projection plans for a skeleton from the declared symmetries of its
// factors.  A filled tableau turns into antisymmetrizations of its columns
// followed by symmetrizations of its rows (columns first).  Hermitian
// symmetries expand recursively: H(t) = H(t') P(t) H(t') where t' strips the
// highest cell, bottoming out once at most two cells remain.  All scaling is
// exact: each chain carries an integer weight and the plan carries one
// integer normalization divisor, applied only on rendering.

namespace meld {

inline void append_tableau_stages(std::vector<Stage>& out, const FilledTableau& t, int offset) {
  for (const auto& col : t.columns())
    if (col.size() >= 2) {
      Stage st;
      st.kind = Stage::Kind::antisymmetrize;
      for (int c : col) st.slots.push_back(c + offset);
      std::sort(st.slots.begin(), st.slots.end());
      out.push_back(std::move(st));
    }
  for (const auto& row : t.rows)
    if (row.size() >= 2) {
      Stage st;
      st.kind = Stage::Kind::symmetrize;
      for (int c : row) st.slots.push_back(c + offset);
      std::sort(st.slots.begin(), st.slots.end());
      out.push_back(std::move(st));
    }
}

namespace detail {

struct FactorProjector {
  std::vector<Chain> chains;  // summed, each with its integer weight
  Int denominator = 1;
};

inline FactorProjector factor_projector(const SymmetrySpec& spec, int offset) {
  FactorProjector fp;
  bool plain = spec.kind != SymmetrySpec::Kind::hermitian_sum || spec.members.size() == 1;
  if (plain && spec.kind == SymmetrySpec::Kind::hermitian_sum) {
    // a sum with one member is the member itself
    SymmetrySpec s = spec;
    s.kind = SymmetrySpec::Kind::single;
    return factor_projector(s, offset);
  }
  if (plain) {
    Chain c;
    for (const auto& t : spec.members) {
      append_tableau_stages(c.stages, t, offset);
      fp.denominator *= hook_normalization(t.shape());
    }
    fp.chains.push_back(std::move(c));
    return fp;
  }
  // hermitian sum: one chain per member, put over the common denominator
  std::vector<Int> denoms;
  for (const auto& t : spec.members) {
    Chain c;
    Int d = 1;
    for (const auto& u : hermitian_chain(t)) {
      append_tableau_stages(c.stages, u, offset);
      d *= hook_normalization(u.shape());
    }
    fp.chains.push_back(std::move(c));
    denoms.push_back(std::move(d));
  }
  fp.denominator = 1;
  for (const auto& d : denoms) fp.denominator *= d;
  for (size_t i = 0; i < fp.chains.size(); ++i) {
    Int w = 1;
    for (size_t j = 0; j < denoms.size(); ++j)
      if (j != i) w *= denoms[j];
    fp.chains[i].weight = std::move(w);
  }
  return fp;
}

inline std::vector<int> stage_support(const Stage& s) {
  if (s.kind == Stage::Kind::block_symmetrize) {
    std::vector<int> out;
    for (int b : s.blocks)
      for (int j = 0; j < s.block_width; ++j) out.push_back(b + j);
    std::sort(out.begin(), out.end());
    return out;
  }
  return s.slots;  // already ascending
}

inline bool supports_overlap(const std::vector<int>& a, const std::vector<int>& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return false;
}

// rule (a): stages with disjoint supports commute exactly; settle them into a
// canonical order so equal work merges earlier and rule (b) sees its pairs
inline void reorder_commuting(Chain& chain) {
  bool changed = true;
  auto key = [](const Stage& s) {
    auto sup = stage_support(s);
    int head = sup.empty() ? -1 : sup.front();
    return std::tuple<int, int, std::vector<int>>(head, static_cast<int>(s.kind), sup);
  };
  while (changed) {
    changed = false;
    for (size_t k = 0; k + 1 < chain.stages.size(); ++k) {
      if (supports_overlap(stage_support(chain.stages[k]), stage_support(chain.stages[k + 1])))
        continue;
      if (key(chain.stages[k + 1]) < key(chain.stages[k])) {
        std::swap(chain.stages[k], chain.stages[k + 1]);
        changed = true;
      }
    }
  }
}

// rule (b): two same-kind stages whose slot sets are contracted onto each
// other in every input row collapse to one; acting on the raw input the pair
// satisfies S_j S_i = k! S_i, so drop the later stage, pull the kept one to
// the front and scale the chain by k!
inline void absorb_contracted(Chain& chain, const RowSet& inputs) {
  if (inputs.empty()) return;
  auto movable_to_front = [&](size_t idx, size_t skip) {
    for (size_t k = 0; k < idx; ++k) {
      if (k == skip) continue;
      if (supports_overlap(stage_support(chain.stages[k]), stage_support(chain.stages[idx])))
        return false;
    }
    return true;
  };
  bool again = true;
  while (again) {
    again = false;
    for (size_t i = 0; i < chain.stages.size() && !again; ++i) {
      const Stage& a = chain.stages[i];
      if (a.kind != Stage::Kind::symmetrize && a.kind != Stage::Kind::antisymmetrize) continue;
      for (size_t j = i + 1; j < chain.stages.size() && !again; ++j) {
        const Stage& b = chain.stages[j];
        if (b.kind != a.kind || b.slots.size() != a.slots.size()) continue;
        if (supports_overlap(a.slots, b.slots)) continue;
        if (!movable_to_front(i, chain.stages.size()) || !movable_to_front(j, i)) continue;
        bool contracted = true;
        for (size_t r = 0; r < inputs.size() && contracted; ++r) {
          auto row = inputs.row(r);
          for (int s : a.slots) {
            int16_t v = row[static_cast<size_t>(s)];
            if (v < 0 || !std::binary_search(b.slots.begin(), b.slots.end(), v)) {
              contracted = false;
              break;
            }
          }
        }
        if (!contracted) continue;
        size_t k = a.slots.size();
        Stage kept = a;
        chain.stages.erase(chain.stages.begin() + static_cast<long>(j));
        chain.stages.erase(chain.stages.begin() + static_cast<long>(i));
        chain.stages.insert(chain.stages.begin(), std::move(kept));
        chain.weight *= factorial(static_cast<int>(k));
        again = true;
      }
    }
  }
}

// rule (c): a stage whose slots are free in every input row and untouched by
// every other stage (in every chain, occurring exactly once per chain) only
// shuffles inert labels; replace it everywhere with a per-row sorted
// arrangement, signed for antisymmetrizations.  This rescales the whole plan
// uniformly, which cancels out of any linear relation between projections.
inline void sort_isolated(std::vector<Chain>& chains, const RowSet& inputs) {
  if (inputs.empty() || chains.empty()) return;
  for (size_t si = 0; si < chains[0].stages.size(); ++si) {
    const Stage cand = chains[0].stages[si];
    if (cand.kind != Stage::Kind::symmetrize && cand.kind != Stage::Kind::antisymmetrize) continue;
    bool ok = true;
    for (size_t r = 0; r < inputs.size() && ok; ++r) {
      auto row = inputs.row(r);
      for (int s : cand.slots)
        if (row[static_cast<size_t>(s)] >= 0) {
          ok = false;
          break;
        }
    }
    for (const auto& ch : chains) {
      if (!ok) break;
      int count = 0;
      for (const auto& st : ch.stages) {
        if (st.kind == cand.kind && st.slots == cand.slots) {
          ++count;
        } else if (supports_overlap(stage_support(st), cand.slots)) {
          ok = false;
          break;
        }
      }
      if (count != 1) ok = false;
    }
    if (!ok) continue;
    for (auto& ch : chains)
      for (auto& st : ch.stages)
        if (st.kind == cand.kind && st.slots == cand.slots) {
          Stage repl;
          repl.kind = Stage::Kind::sort;
          repl.slots = cand.slots;
          repl.signed_sort = cand.kind == Stage::Kind::antisymmetrize;
          st = repl;
        }
  }
}

}  // namespace detail

struct PlanOptions {
  bool optimize = true;
  bool block_symmetrize = false;  // average over identical factor blocks
};

// `inputs` holds every row the plan will be applied to; rules (b) and (c)
// inspect them, so all members of a meld group must share one plan.
inline Plan make_plan(const Skeleton& skel, const SymbolTable& tab, const RowSet& inputs,
                      const PlanOptions& opt) {
  Plan plan;
  plan.width = skel.total_slots();
  plan.chains = {Chain{}};
  for (size_t i = 0; i < skel.factors.size(); ++i) {
    const SymmetrySpec* spec = tab.symmetry_of(skel.factors[i].first);
    if (!spec) continue;
    detail::FactorProjector fp = detail::factor_projector(*spec, skel.offset(i));
    plan.normalization *= fp.denominator;
    std::vector<Chain> next;
    for (const auto& base : plan.chains)
      for (const auto& add : fp.chains) {
        Chain c;
        c.stages = base.stages;
        c.stages.insert(c.stages.end(), add.stages.begin(), add.stages.end());
        c.weight = base.weight * add.weight;
        next.push_back(std::move(c));
      }
    plan.chains = std::move(next);
  }
  if (opt.block_symmetrize) {
    std::vector<bool> used(skel.factors.size(), false);
    for (size_t i = 0; i < skel.factors.size(); ++i) {
      if (used[i] || skel.factors[i].second == 0) continue;
      Stage st;
      st.kind = Stage::Kind::block_symmetrize;
      st.block_width = skel.factors[i].second;
      st.blocks = {skel.offset(i)};
      for (size_t j = i + 1; j < skel.factors.size(); ++j)
        if (!used[j] && skel.factors[j] == skel.factors[i]) {
          used[j] = true;
          st.blocks.push_back(skel.offset(j));
        }
      if (st.blocks.size() >= 2) {
        plan.normalization *= factorial(static_cast<int>(st.blocks.size()));
        for (auto& ch : plan.chains) ch.stages.push_back(st);
      }
    }
  }
  if (opt.optimize) {
    for (auto& ch : plan.chains) {
      detail::reorder_commuting(ch);
      detail::absorb_contracted(ch, inputs);
    }
    detail::sort_isolated(plan.chains, inputs);
  }
  return plan;
}

}  // namespace meld
