// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "meld/lindep.hpp"
#include "meld/parser.hpp"
#include "meld/projector.hpp"

using namespace meld;

namespace {

RowSet make_rows(int width, const std::vector<std::pair<std::vector<int16_t>, int>>& rows) {
  RowSet rs(width);
  for (const auto& [r, w] : rows) rs.push_row(r, Int(w));
  rs.sort_merge();
  return rs;
}

// Dense-by-key vector arithmetic used as the reference rank oracle.
using Vec = std::map<std::vector<int16_t>, Rational>;

Vec vec_of(const RowSet& rows) {
  Vec v;
  for (size_t i = 0; i < rows.size(); ++i) v[rows.row_vector(i)] = Rational(rows.weight(i));
  return v;
}

void vec_axpy(Vec& v, const Rational& q, const Vec& w) {
  for (const auto& [k, c] : w) {
    Rational& t = v[k];
    t += q * c;
    if (t == 0) v.erase(k);
  }
}

// Straightforward reduction against already-reduced vectors, keyed by their
// pivot so elimination proceeds in ascending key order and eliminated keys
// never reappear.  Reports only the independence verdict.
struct OracleBasis {
  std::map<std::vector<int16_t>, Vec> reduced;  // pivot -> vector

  bool add(Vec v) {
    for (const auto& [pivot, b] : reduced) {
      auto it = v.find(pivot);
      if (it == v.end()) continue;
      vec_axpy(v, -(it->second / b.begin()->second), b);
    }
    if (v.empty()) return false;
    auto pivot = v.begin()->first;
    reduced.emplace(std::move(pivot), std::move(v));
    return true;
  }

  size_t size() const { return reduced.size(); }
};

}  // namespace

TEST_CASE("the first nonzero projection is independent") {
  ProjectionBasis basis;
  RowSet rs = make_rows(2, {{{-1, -2}, 1}});
  ExpressOutcome out = basis.try_express_and_add(rs);
  REQUIRE(out.independent);
  REQUIRE(basis.size() == 1);
  REQUIRE(basis.key_count() == 1);
}

TEST_CASE("an identically vanishing projection is the empty combination") {
  ProjectionBasis basis;
  REQUIRE(basis.try_express_and_add(make_rows(2, {{{-1, -2}, 1}})).independent);
  ExpressOutcome out = basis.try_express_and_add(RowSet(2));
  REQUIRE(!out.independent);
  REQUIRE(out.coeffs == std::vector<Rational>{Rational(0)});
}

TEST_CASE("scaled copies report rational multiples") {
  ProjectionBasis basis;
  basis.try_express_and_add(make_rows(2, {{{-1, -2}, 3}, {{-2, -1}, 3}}));
  ExpressOutcome twice =
      basis.try_express_and_add(make_rows(2, {{{-1, -2}, 6}, {{-2, -1}, 6}}));
  REQUIRE(!twice.independent);
  REQUIRE(twice.coeffs == std::vector<Rational>{Rational(2)});
  ExpressOutcome third =
      basis.try_express_and_add(make_rows(2, {{{-1, -2}, 1}, {{-2, -1}, 1}}));
  REQUIRE(!third.independent);
  REQUIRE(third.coeffs == std::vector<Rational>{Rational(1, 3)});
  REQUIRE(basis.size() == 1);
}

TEST_CASE("combinations come back in append order") {
  ProjectionBasis basis;
  basis.try_express_and_add(make_rows(2, {{{-1, -2}, 1}}));
  basis.try_express_and_add(make_rows(2, {{{-2, -1}, 1}}));
  ExpressOutcome out = basis.try_express_and_add(
      make_rows(2, {{{-1, -2}, 2}, {{-2, -1}, -5}}));
  REQUIRE(!out.independent);
  REQUIRE(out.coeffs == std::vector<Rational>{Rational(2), Rational(-5)});
}

TEST_CASE("an unseen row key settles independence outright") {
  ProjectionBasis basis;
  basis.try_express_and_add(make_rows(2, {{{-1, -2}, 1}}));
  ExpressOutcome out =
      basis.try_express_and_add(make_rows(2, {{{-1, -2}, 1}, {{-2, -1}, 1}}));
  REQUIRE(out.independent);
  REQUIRE(basis.size() == 2);
  REQUIRE(basis.key_count() == 2);
}

TEST_CASE("the cyclic identity leaves two independent members") {
  SymbolTable tab;
  Parser p("R_{a b c d}::RiemannTensor;", tab, nullptr);
  p.next_statement();

  const char* terms[] = {"R_{a b c d}", "R_{a c d b}", "R_{a d b c}"};
  Expression all = parse_expression("R_{a b c d} + R_{a c d b} + R_{a d b c}", tab);
  std::vector<std::string> free_names = free_names_in_order(all);

  RowSet inputs(4);
  std::vector<RowSet> singles;
  for (const char* t : terms) {
    Expression e = parse_expression(t, tab);
    RowSet one = single_row(e.terms[0], free_names);
    inputs.push_row(one.row(0), one.weight(0));
    singles.push_back(std::move(one));
  }
  inputs.sort_merge();
  Plan plan = make_plan(skeleton_of(all.terms[0]), tab, inputs, PlanOptions{});

  ProjectionBasis basis;
  REQUIRE(basis.try_express_and_add(project(singles[0], plan, 1u << 22)).independent);
  REQUIRE(basis.try_express_and_add(project(singles[1], plan, 1u << 22)).independent);
  ExpressOutcome third = basis.try_express_and_add(project(singles[2], plan, 1u << 22));
  REQUIRE(!third.independent);
  REQUIRE(third.coeffs == std::vector<Rational>{Rational(-1), Rational(-1)});
  REQUIRE(basis.size() == 2);
}

TEST_CASE("verdicts and coefficients match a dense reference") {
  std::mt19937_64 rng(20260818);
  std::uniform_int_distribution<int> weight(-5, 5);
  std::uniform_int_distribution<int> nrows(1, 6);

  const int width = 4;
  std::vector<std::vector<int16_t>> keys;
  {
    std::vector<int16_t> base{-1, -2, -3, -4};
    std::sort(base.begin(), base.end());
    do keys.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
  }

  for (int trial = 0; trial < 100; ++trial) {
    ProjectionBasis basis;
    OracleBasis oracle;
    std::vector<Vec> members;

    for (int step = 0; step < 10; ++step) {
      RowSet rs(width);
      std::shuffle(keys.begin(), keys.end(), rng);
      int m = nrows(rng);
      for (int i = 0; i < m; ++i) {
        int w = weight(rng);
        if (w != 0) rs.push_row(keys[static_cast<size_t>(i)], Int(w));
      }
      rs.sort_merge();

      Vec v = vec_of(rs);
      ExpressOutcome out = basis.try_express_and_add(rs);
      bool want_independent = oracle.add(v);
      REQUIRE(out.independent == want_independent);
      if (out.independent) {
        members.push_back(std::move(v));
      } else {
        REQUIRE(out.coeffs.size() == members.size());
        Vec sum;
        for (size_t i = 0; i < members.size(); ++i)
          vec_axpy(sum, out.coeffs[i], members[i]);
        REQUIRE(sum == v);
      }
    }
    REQUIRE(basis.size() == oracle.size());
  }
}
