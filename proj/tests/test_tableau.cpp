// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "meld/tableau.hpp"

using namespace meld;

TEST_CASE("diagram validation") {
  REQUIRE(Diagram::make({5, 4, 1}).cells() == 10);
  REQUIRE_THROWS_AS(Diagram::make({}), Error);
  REQUIRE_THROWS_AS(Diagram::make({2, 3}), Error);
  REQUIRE_THROWS_AS(Diagram::make({2, 0}), Error);
}

TEST_CASE("column profile conjugates the shape") {
  REQUIRE(column_profile(Diagram::make({5, 4, 1})).rows == std::vector<int>({3, 2, 2, 2, 1}));
  REQUIRE(column_profile(Diagram::make({2, 2})).rows == std::vector<int>({2, 2}));
  for (int n = 1; n <= 8; ++n)
    for (const Diagram& d : partitions(n)) REQUIRE(column_profile(column_profile(d)) == d);
}

TEST_CASE("hook normalization") {
  REQUIRE(hook_normalization(Diagram::make({5, 4, 1})) == 12600);
  REQUIRE(hook_normalization(Diagram::make({1})) == 1);
  REQUIRE(hook_normalization(Diagram::make({2, 2})) == 12);
  REQUIRE(hook_normalization(Diagram::make({3})) == 6);
  REQUIRE(hook_normalization(Diagram::make({1, 1, 1})) == 6);
  REQUIRE(hook_normalization(Diagram::make({2, 1})) == 3);
}

TEST_CASE("filled tableau slots are unique and shapes validate") {
  FilledTableau t = FilledTableau::make({{0, 2}, {1, 3}});
  REQUIRE(t.cells() == 4);
  REQUIRE(t.slots() == std::vector<int>({0, 2, 1, 3}));
  REQUIRE(t.columns() == std::vector<std::vector<int>>({{0, 1}, {2, 3}}));
  REQUIRE_THROWS_AS(FilledTableau::make({{0, 1}, {1}}), Error);
  REQUIRE_THROWS_AS(FilledTableau::make({{0}, {1, 2}}), Error);
}

TEST_CASE("row major filling and offsets") {
  FilledTableau t = FilledTableau::row_major(Diagram::make({2, 2}));
  REQUIRE(t.rows == std::vector<std::vector<int>>({{0, 1}, {2, 3}}));
  REQUIRE(t.offset(4).rows == std::vector<std::vector<int>>({{4, 5}, {6, 7}}));
}

TEST_CASE("standard tableaux enumeration") {
  auto syt21 = standard_tableaux(Diagram::make({2, 1}));
  REQUIRE(syt21.size() == 2);
  REQUIRE(syt21[0].rows == std::vector<std::vector<int>>({{0, 1}, {2}}));
  REQUIRE(syt21[1].rows == std::vector<std::vector<int>>({{0, 2}, {1}}));

  REQUIRE(standard_tableaux(Diagram::make({2, 2})).size() == 2);
  REQUIRE(standard_tableaux(Diagram::make({3, 1})).size() == 3);
  REQUIRE(standard_tableaux(Diagram::make({1, 1, 1})).size() == 1);
  REQUIRE(standard_tableaux(Diagram::make({4})).size() == 1);
  REQUIRE(standard_tableaux(Diagram::make({3, 2})).size() == 5);
  REQUIRE(standard_tableaux(Diagram::make({3, 3})).size() == 5);
}

TEST_CASE("tableau count matches the hook length formula") {
  for (int n = 1; n <= 7; ++n)
    for (const Diagram& d : partitions(n)) {
      Int expect = factorial(n) / hook_normalization(d);
      REQUIRE(Int(standard_tableaux(d).size()) == expect);
    }
}

TEST_CASE("squares of tableau counts sum to the group order") {
  for (int n = 1; n <= 6; ++n) {
    Int sum = 0;
    for (const Diagram& d : partitions(n)) {
      Int f = Int(standard_tableaux(d).size());
      sum += f * f;
    }
    REQUIRE(sum == factorial(n));
  }
}

TEST_CASE("partition enumeration") {
  REQUIRE(partitions(3).size() == 3);
  REQUIRE(partitions(4).size() == 5);
  REQUIRE(partitions(5).size() == 7);
  REQUIRE(partitions(6).size() == 11);
  REQUIRE(partitions(9).size() == 30);
  auto p3 = partitions(3);
  REQUIRE(p3[0].rows == std::vector<int>({3}));
  REQUIRE(p3[1].rows == std::vector<int>({2, 1}));
  REQUIRE(p3[2].rows == std::vector<int>({1, 1, 1}));
}

TEST_CASE("hermitian chains peel the largest label symmetrically") {
  FilledTableau t = FilledTableau::make({{0, 2}, {1}});
  REQUIRE(strip_last_cell(t).rows == std::vector<std::vector<int>>({{0}, {1}}));

  auto chain = hermitian_chain(t);
  REQUIRE(chain.size() == 3);
  REQUIRE(chain[0].rows == std::vector<std::vector<int>>({{0}, {1}}));
  REQUIRE(chain[1] == t);
  REQUIRE(chain[2] == chain[0]);

  // palindromic growth: one extra cell doubles the chain around the middle
  FilledTableau t4 = FilledTableau::make({{0, 2, 3}, {1}});
  REQUIRE(hermitian_chain(t4).size() == 7);
  FilledTableau t5 = FilledTableau::make({{0, 2, 3}, {1, 4}});
  auto c5 = hermitian_chain(t5);
  REQUIRE(c5.size() == 15);
  for (size_t i = 0; i < c5.size(); ++i) REQUIRE(c5[i] == c5[c5.size() - 1 - i]);

  // a filling whose largest label does not sit at a removable corner
  FilledTableau bad = FilledTableau::make({{0, 3}, {1, 2}});
  REQUIRE_THROWS_AS(strip_last_cell(bad), Error);
}

TEST_CASE("work bounds") {
  FilledTableau riemann = FilledTableau::make({{0, 2}, {1, 3}});
  REQUIRE(tableau_work_bound(riemann) == 16);
  REQUIRE(term_count_bound(SymmetrySpec::single(riemann)) == 16);

  SymmetrySpec prod;
  prod.kind = SymmetrySpec::Kind::product;
  prod.members = {FilledTableau::make({{0}, {1}}), FilledTableau::make({{2}, {3}})};
  REQUIRE(term_count_bound(prod) == 4);

  SymmetrySpec herm;
  herm.kind = SymmetrySpec::Kind::hermitian_sum;
  herm.members = {FilledTableau::make({{0, 2}, {1}}), FilledTableau::make({{0}, {1}, {2}})};
  // member chains: 2*4*2 and 2*6*2 with the middle bounds 4 and 6
  REQUIRE(term_count_bound(herm) == 16 + 24);

  REQUIRE(tableau_work_bound(FilledTableau::row_major(Diagram::make({5, 4, 1}))) == 138240);
}
