// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "meld/adjform.hpp"
#include "meld/expr.hpp"
#include "meld/lindep.hpp"
#include "meld/projector.hpp"

// The core pass.  Every term is Young-projected into adjacency form and
// handed to the shared basis of its group; a term whose projection is a
// linear combination of earlier projections folds its coefficient into the
// terms it combines from and disappears.  What survives is the expression
// over the first-seen independent forms, with all symmetries of the declared
// tableaux accounted for exactly.

namespace meld {

struct MeldOptions {
  size_t max_rows = 10'000'000;
  bool optimize = true;
  unsigned threads = 1;  // projections are pure; >1 maps them over a pool
};

struct MeldStats {
  size_t terms_in = 0;
  size_t terms_out = 0;
  size_t groups = 0;
  size_t basis_members = 0;       // k: independent projections kept
  size_t distinct_rows = 0;       // n: distinct adjacency rows across all bases
  size_t max_projection_rows = 0;
  unsigned long long total_projection_rows = 0;
  unsigned long long projection_ns = 0;
  unsigned long long solve_ns = 0;
};

namespace detail {

// Trace terms are invariant under cyclic rotation of the factors past the
// sorted commuting prefix; pick the rotation with the smallest (skeleton,
// row) pair so equivalent traces land in one group with identical rows.
inline void normalize_trace_rotation(Skeleton& skel, std::vector<int16_t>& row,
                                     const SymbolTable& tab) {
  size_t n = skel.factors.size();
  size_t s = 0;
  while (s < n && !tab.is_non_commuting(skel.factors[s].first)) ++s;
  if (n - s < 2) return;
  const int width = skel.total_slots();
  Skeleton best = skel;
  std::vector<int16_t> best_row = row;
  for (size_t r = 1; r < n - s; ++r) {
    Skeleton cand;
    cand.trace = skel.trace;
    std::vector<size_t> order;  // old factor index in new position order
    for (size_t i = 0; i < s; ++i) order.push_back(i);
    for (size_t i = s + r; i < n; ++i) order.push_back(i);
    for (size_t i = s; i < s + r; ++i) order.push_back(i);
    for (size_t i : order) cand.factors.push_back(skel.factors[i]);
    std::vector<int16_t> sigma(static_cast<size_t>(width));
    int pos = 0;
    for (size_t i : order) {
      int off = skel.offset(i);
      for (int j = 0; j < skel.factors[i].second; ++j)
        sigma[static_cast<size_t>(off + j)] = static_cast<int16_t>(pos++);
    }
    std::vector<int16_t> cand_row(static_cast<size_t>(width));
    permute_row(row, sigma, cand_row.data());
    if (std::tie(cand.factors, cand_row) < std::tie(best.factors, best_row)) {
      best = std::move(cand);
      best_row = std::move(cand_row);
    }
  }
  skel = std::move(best);
  row = std::move(best_row);
}

inline void validate_common_free_set(const Expression& e) {
  if (e.terms.size() < 2) return;
  auto first = free_index_names(e.terms.front());
  for (size_t j = 1; j < e.terms.size(); ++j)
    if (free_index_names(e.terms[j]) != first)
      throw Error(ErrorCode::mismatched_free_indices,
                  "terms carry different free index sets");
}

}  // namespace detail

inline Expression meld(const Expression& input, const SymbolTable& tab,
                       const MeldOptions& opt = {}, MeldStats* stats = nullptr) {
  Expression e = input;
  sort_product(e, tab);
  detail::validate_common_free_set(e);
  const std::vector<std::string> free_names = free_names_in_order(e);
  const size_t nterms = e.terms.size();

  struct Group {
    Skeleton skel;
    RowSet inputs;
    Plan plan;
    ProjectionBasis basis;
    std::vector<size_t> owner;  // basis member -> term index
  };
  std::vector<Group> groups;
  std::map<Skeleton, size_t> gindex;
  std::vector<std::pair<size_t, std::vector<int16_t>>> work(nterms);

  for (size_t j = 0; j < nterms; ++j) {
    const Monomial& m = e.terms[j];
    Skeleton skel = skeleton_of(m);
    std::vector<int16_t> row = single_row(m, free_names).row_vector(0);
    if (m.trace) detail::normalize_trace_rotation(skel, row, tab);
    auto it = gindex.find(skel);
    if (it == gindex.end()) {
      it = gindex.emplace(skel, groups.size()).first;
      groups.push_back(Group{skel, RowSet(skel.total_slots()), Plan{}, ProjectionBasis{}, {}});
    }
    groups[it->second].inputs.push_row(row, Int(1));
    work[j] = {it->second, std::move(row)};
  }
  for (auto& g : groups) {
    g.inputs.sort_merge();
    PlanOptions po;
    po.optimize = opt.optimize;
    po.block_symmetrize = true;
    g.plan = make_plan(g.skel, tab, g.inputs, po);
  }
  if (stats) {
    stats->terms_in = nterms;
    stats->groups = groups.size();
  }

  // The solve order is load-bearing (first-seen forms own the basis), but the
  // projections themselves are pure; with threads > 1 they are computed ahead
  // over a small pool and only the solves stay sequential.
  std::vector<std::optional<RowSet>> pre(nterms);
  const unsigned nthreads = std::max(1u, opt.threads);
  if (nthreads > 1 && nterms > 1) {
    auto p0 = std::chrono::steady_clock::now();
    std::atomic<size_t> cursor{0};
    std::exception_ptr fail;
    std::mutex fail_mx;
    auto worker = [&] {
      for (;;) {
        size_t j = cursor.fetch_add(1);
        if (j >= nterms) return;
        try {
          Group& g = groups[work[j].first];
          RowSet one(g.plan.width);
          one.push_row(work[j].second, Int(1));
          pre[j] = project(one, g.plan, opt.max_rows);
        } catch (...) {
          std::lock_guard<std::mutex> lk(fail_mx);
          if (!fail) fail = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (fail) std::rethrow_exception(fail);
    if (stats) {
      auto p1 = std::chrono::steady_clock::now();
      stats->projection_ns += static_cast<unsigned long long>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(p1 - p0).count());
    }
  }

  std::vector<Coefficient> out_coeff(nterms);
  std::vector<bool> survivor(nterms, false);
  for (size_t j = 0; j < nterms; ++j) {
    Group& g = groups[work[j].first];
    auto t0 = std::chrono::steady_clock::now();
    RowSet proj = [&] {
      if (pre[j]) return std::move(*pre[j]);
      RowSet one(g.plan.width);
      one.push_row(work[j].second, Int(1));
      return project(one, g.plan, opt.max_rows);
    }();
    auto t1 = std::chrono::steady_clock::now();
    if (stats) {
      stats->max_projection_rows = std::max(stats->max_projection_rows, proj.size());
      stats->total_projection_rows += proj.size();
      if (!pre[j])
        stats->projection_ns += static_cast<unsigned long long>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }
    ExpressOutcome res = g.basis.try_express_and_add(proj);
    if (stats) {
      auto t2 = std::chrono::steady_clock::now();
      stats->solve_ns += static_cast<unsigned long long>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t2 - t1).count());
    }
    if (res.independent) {
      g.owner.push_back(j);
      survivor[j] = true;
      out_coeff[j] += e.terms[j].coeff;
    } else {
      for (size_t i = 0; i < res.coeffs.size(); ++i) {
        if (res.coeffs[i] == 0) continue;
        Coefficient add = e.terms[j].coeff;
        add *= res.coeffs[i];
        out_coeff[g.owner[i]] += add;
      }
    }
  }
  if (stats)
    for (const auto& g : groups) {
      stats->basis_members += g.owner.size();
      stats->distinct_rows += g.basis.key_count();
    }

  Expression out;
  for (size_t j = 0; j < nterms; ++j) {
    if (!survivor[j] || out_coeff[j].is_zero()) continue;
    Monomial m = e.terms[j];
    m.coeff = std::move(out_coeff[j]);
    out.terms.push_back(std::move(m));
  }
  if (stats) stats->terms_out = out.terms.size();
  return out;
}

// Expands every term into its explicit Young-projected form, exactly
// normalized, including the average over identical factor blocks.  Plans are
// deliberately unoptimized here so the rendered result is the projector
// itself; melding first never changes this expansion.
inline Expression young_project(const Expression& input, const SymbolTable& tab,
                                const MeldOptions& opt = {}) {
  Expression e = input;
  sort_product(e, tab);
  const std::vector<std::string> free_names = free_names_in_order(e);
  Expression out;
  for (const Monomial& m : e.terms) {
    Skeleton skel = skeleton_of(m);
    std::vector<int16_t> row = single_row(m, free_names).row_vector(0);
    if (m.trace) detail::normalize_trace_rotation(skel, row, tab);
    RowSet one(skel.total_slots());
    one.push_row(row, Int(1));
    PlanOptions po;
    po.optimize = false;
    po.block_symmetrize = true;
    Plan plan = make_plan(skel, tab, one, po);
    RowSet proj = project(one, plan, opt.max_rows);
    Expression piece =
        to_expression(skel, proj, Rational(1, plan.normalization), free_names, m.coeff);
    out.terms.insert(out.terms.end(), piece.terms.begin(), piece.terms.end());
  }
  return collect_terms(out);
}

// delta heads of arity two contract away: the partner occurrence of one of
// the two indices is renamed to the other and the factor is dropped.  A
// self-contracted delta carries the dimension, which the engine does not
// know, so it stays put.
inline Expression eliminate_kronecker(const Expression& input) {
  Expression out = input;
  for (auto& m : out.terms) {
    bool changed = true;
    while (changed) {
      changed = false;
      auto occ = index_occurrences(m);
      for (size_t fi = 0; fi < m.factors.size() && !changed; ++fi) {
        const TensorFactor& f = m.factors[fi];
        if (f.head != "delta" || f.indices.size() != 2) continue;
        const std::string x = f.indices[0].name;
        const std::string y = f.indices[1].name;
        if (x == y) continue;
        std::string from, to;
        if (occ.at(x) == 2) {
          from = x;
          to = y;
        } else if (occ.at(y) == 2) {
          from = y;
          to = x;
        } else {
          continue;  // both free: nothing to contract
        }
        for (size_t gi = 0; gi < m.factors.size() && !changed; ++gi) {
          for (size_t k = 0; k < m.factors[gi].indices.size(); ++k) {
            if (gi == fi) continue;
            if (m.factors[gi].indices[k].name == from) {
              m.factors[gi].indices[k].name = to;
              m.factors.erase(m.factors.begin() + static_cast<long>(fi));
              changed = true;
              break;
            }
          }
        }
      }
    }
  }
  return collect_terms(out);
}

}  // namespace meld
