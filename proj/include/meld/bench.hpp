// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "meld/meld.hpp"
#include "meld/parser.hpp"

// Benchmark harness: deterministic expression generation per family, wall
// timings around meld only, CSV rows out.  Resource errors become failed rows
// and the sweep continues.

namespace meld {

struct BenchSpec {
  std::string family;  // terms-sweep | shape-sweep | dummy-fraction-sweep | polynomial-order-sweep
  int lo = 0;          // family-specific range; 0,0 selects the default range
  int hi = 0;
  int reps = 3;
  std::uint64_t seed = 1;
  MeldOptions opts;
};

struct BenchCase {
  std::string params;  // e.g. "terms=7", "shape=3+3+3", "dummy_pairs=2", "order=3"
  std::string decls;
  std::string expr;
};

struct BenchRow {
  std::string family;
  std::string params;
  int reps = 0;
  std::string status;  // "ok" or "failed:<error>"
  std::uint64_t wall_ns_min = 0;
  std::uint64_t wall_ns_median = 0;
  std::uint64_t projection_rows = 0;
  std::uint64_t basis_k = 0;
};

namespace detail {

inline std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) out += (i ? " " : "") + names[i];
  return out;
}

inline std::vector<std::vector<int>> partitions_of(int n) {
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int left, int cap) -> void {
    if (left == 0) {
      all.push_back(cur);
      return;
    }
    for (int part = std::min(left, cap); part >= 1; --part) {
      cur.push_back(part);
      self(self, left - part, part);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return all;
}

inline std::string tableau_decl(const std::string& head, const std::vector<int>& shape) {
  int cells = 0;
  for (int r : shape) cells += r;
  std::string decl = head + "_{";
  for (int s = 0; s < cells; ++s) decl += (s ? " i" : "i") + std::to_string(s);
  decl += "}::TableauSymmetry(rows=[";
  int slot = 0;
  for (size_t r = 0; r < shape.size(); ++r) {
    if (r) decl += ",";
    decl += "[";
    for (int c = 0; c < shape[r]; ++c) {
      if (c) decl += ",";
      decl += std::to_string(slot++);
    }
    decl += "]";
  }
  decl += "]);";
  return decl;
}

}  // namespace detail

// Generates the expression set for a spec.  Same spec (family, range, seed)
// always yields the same cases.
inline std::vector<BenchCase> bench_cases(const BenchSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> coeff(1, 4);
  std::vector<BenchCase> cases;

  if (spec.family == "terms-sweep") {
    int lo = spec.lo ? spec.lo : 1;
    int hi = spec.hi ? spec.hi : 32;
    std::vector<std::string> names = {"a", "b", "c", "d"};
    for (int terms = lo; terms <= hi; ++terms) {
      std::string src;
      for (int t = 0; t < terms; ++t) {
        std::vector<std::string> perm = names;
        std::shuffle(perm.begin(), perm.end(), rng);
        if (t) src += " + ";
        src += std::to_string(coeff(rng)) + " R_{" + detail::join_names(perm) + "}";
      }
      cases.push_back({"terms=" + std::to_string(terms),
                       "R_{a b c d}::RiemannTensor;", src});
    }
  } else if (spec.family == "shape-sweep") {
    int cells = spec.hi ? spec.hi : 9;
    std::vector<std::string> names;
    std::string body;
    for (int s = 0; s < cells; ++s) {
      names.push_back(std::string(1, static_cast<char>('a' + s)));
      body += (s ? " " : "") + names.back();
    }
    for (const auto& shape : detail::partitions_of(cells)) {
      std::string label = "shape=";
      for (size_t r = 0; r < shape.size(); ++r)
        label += (r ? "+" : "") + std::to_string(shape[r]);
      cases.push_back({label, detail::tableau_decl("T", shape), "T_{" + body + "}"});
    }
  } else if (spec.family == "dummy-fraction-sweep") {
    int lo = spec.lo;
    int hi = spec.hi ? spec.hi : 4;
    const int terms = 6;
    for (int pairs = lo; pairs <= hi; ++pairs) {
      std::vector<std::string> pool;
      for (int d = 0; d < pairs; ++d) {
        pool.push_back("p" + std::to_string(d + 1));
        pool.push_back("p" + std::to_string(d + 1));
      }
      for (int f = 0; f < 8 - 2 * pairs; ++f)
        pool.push_back(std::string(1, static_cast<char>('a' + f)));
      std::string src;
      for (int t = 0; t < terms; ++t) {
        std::vector<std::string> perm = pool;
        std::shuffle(perm.begin(), perm.end(), rng);
        if (t) src += " + ";
        src += std::to_string(coeff(rng)) + " T_{" + detail::join_names(perm) + "}";
      }
      cases.push_back({"dummy_pairs=" + std::to_string(pairs),
                       detail::tableau_decl("T", {4, 4}), src});
    }
  } else if (spec.family == "polynomial-order-sweep") {
    int lo = spec.lo ? spec.lo : 1;
    int hi = spec.hi ? spec.hi : 3;
    const int terms = 3;
    for (int order = lo; order <= hi; ++order) {
      std::string src;
      for (int t = 0; t < terms; ++t) {
        // a random perfect matching of the 4*order slots
        std::vector<int> slots(static_cast<size_t>(4 * order));
        for (size_t s = 0; s < slots.size(); ++s) slots[s] = static_cast<int>(s);
        std::shuffle(slots.begin(), slots.end(), rng);
        std::vector<std::string> names(slots.size());
        for (size_t p = 0; p < slots.size(); p += 2) {
          std::string d = "d" + std::to_string(p / 2 + 1);
          names[static_cast<size_t>(slots[p])] = d;
          names[static_cast<size_t>(slots[p + 1])] = d;
        }
        if (t) src += " + ";
        src += std::to_string(coeff(rng));
        for (int f = 0; f < order; ++f) {
          std::vector<std::string> block(names.begin() + 4 * f, names.begin() + 4 * (f + 1));
          src += " R_{" + detail::join_names(block) + "}";
        }
      }
      cases.push_back({"order=" + std::to_string(order),
                       "R_{a b c d}::RiemannTensor;", src});
    }
  } else {
    throw Error(ErrorCode::bad_script, "unknown bench family '" + spec.family + "'");
  }
  return cases;
}

inline std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  std::vector<BenchCase> cases = bench_cases(spec);
  std::vector<BenchRow> rows;
  rows.reserve(cases.size());
  for (const auto& c : cases) {
    BenchRow row;
    row.family = spec.family;
    row.params = c.params;
    row.reps = spec.reps;
    row.status = "ok";

    SymbolTable tab;
    Parser decls(c.decls, tab, nullptr);
    while (!decls.at_end()) decls.next_statement();
    Expression e = parse_expression(c.expr, tab);

    std::vector<std::uint64_t> times;
    for (int r = 0; r < spec.reps && row.status == "ok"; ++r) {
      MeldStats st;
      auto t0 = std::chrono::steady_clock::now();
      try {
        Expression out = meld(e, tab, spec.opts, &st);
        auto t1 = std::chrono::steady_clock::now();
        times.push_back(static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
        row.projection_rows = static_cast<std::uint64_t>(st.max_projection_rows);
        row.basis_k = static_cast<std::uint64_t>(st.basis_members);
      } catch (const Error& err) {
        row.status = std::string("failed:") + error_name(err.code());
      }
    }
    if (!times.empty()) {
      std::sort(times.begin(), times.end());
      row.wall_ns_min = times.front();
      row.wall_ns_median = times[times.size() / 2];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "family,params,reps,status,wall_ns_min,wall_ns_median,projection_rows,basis_k\n";
  for (const auto& r : rows) {
    out += r.family + "," + r.params + "," + std::to_string(r.reps) + "," + r.status + "," +
           std::to_string(r.wall_ns_min) + "," + std::to_string(r.wall_ns_median) + "," +
           std::to_string(r.projection_rows) + "," + std::to_string(r.basis_k) + "\n";
  }
  return out;
}

}  // namespace meld
