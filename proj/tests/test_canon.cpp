// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "meld/canon.hpp"
#include "meld/meld.hpp"
#include "meld/parser.hpp"
#include "meld/printer.hpp"

using namespace meld;

namespace {

SymbolTable parse_decls(const std::string& src) {
  SymbolTable tab;
  Parser p(src, tab, nullptr);
  while (!p.at_end()) p.next_statement();
  return tab;
}

void check_canon(const std::string& decls, const std::string& expr,
                 const std::string& expect) {
  SymbolTable tab = parse_decls(decls);
  Expression got = canonicalise(parse_expression(expr, tab), tab);
  INFO(print_expression(got, tab));
  REQUIRE(equivalent(got, parse_expression(expect, tab)));
}

}  // namespace

TEST_CASE("riemann arrangements reduce to the least spelling") {
  check_canon("R_{a b c d}::RiemannTensor;", "R_{c d b a}", "- R_{a b c d}");
}

TEST_CASE("antisymmetric terms collect after canonicalisation") {
  check_canon("A_{a b c}::AntiSymmetric;", "A_{b a c} + A_{c b a}", "-2 A_{a b c}");
}

TEST_CASE("the cyclic sum keeps three distinct representatives") {
  check_canon("R_{a b c d}::RiemannTensor;",
              "R_{a b c d} + R_{a c d b} + R_{a d b c}",
              "R_{a b c d} - R_{a c b d} + R_{a d b c}");
}

TEST_CASE("the 24 riemann arrangements split into three classes of eight") {
  SymbolTable tab = parse_decls("R_{a b c d}::RiemannTensor;");
  std::vector<std::string> names = {"a", "b", "c", "d"};
  std::map<std::string, int> classes;
  int total = 0;
  do {
    std::string src = "R_{" + names[0] + " " + names[1] + " " + names[2] + " " + names[3] + "}";
    Expression got = canonicalise(parse_expression(src, tab), tab);
    REQUIRE(got.terms.size() == 1);
    std::string key;
    for (const auto& ix : got.terms[0].factors[0].indices) key += ix.name;
    ++classes[key];
    ++total;
  } while (std::next_permutation(names.begin(), names.end()));
  REQUIRE(total == 24);
  REQUIRE(classes.size() == 3);
  for (const auto& [key, count] : classes) {
    INFO(key);
    REQUIRE(count == 8);
  }
}

TEST_CASE("free indices rank ahead of dummies") {
  check_canon("S_{a b}::Symmetric;", "S_{p a} V_{p}", "S_{a p} V_{p}");
}

TEST_CASE("identical factors may trade places") {
  SymbolTable tab = parse_decls("W_{a b}::Symmetric;");
  Expression lhs = canonicalise(parse_expression("W_{c d} W_{a b}", tab), tab);
  Expression rhs = canonicalise(parse_expression("W_{a b} W_{c d}", tab), tab);
  REQUIRE(equivalent(lhs, rhs));
}

TEST_CASE("sign conflicts prove a term vanishes") {
  // an antisymmetric self-trace
  check_canon("A_{a b c}::AntiSymmetric;", "A_{a b a}", "0");
  // an antisymmetric pair contracted with a symmetric one; the conflict only
  // appears after dummy renaming
  check_canon("R_{a b c d}::RiemannTensor; S_{a b}::Symmetric;",
              "R_{p q c d} S_{p q}", "0");
}

TEST_CASE("the antisymmetric closure carries its polarities") {
  SymbolTable tab = parse_decls("A_{a b c}::AntiSymmetric;");
  Expression e = parse_expression("A_{a b c}", tab);
  std::vector<detail::SignedGen> gens = detail::canonical_generators(e.terms[0], tab);
  REQUIRE(gens.size() == 2);

  std::map<std::vector<int>, int> seen;
  std::vector<std::vector<int>> queue;
  seen[{0, 1, 2}] = 1;
  queue.push_back({0, 1, 2});
  while (!queue.empty()) {
    std::vector<int> cur = queue.back();
    queue.pop_back();
    int sign = seen.at(cur);
    for (const auto& g : gens) {
      std::vector<int> next(cur.size());
      for (size_t t = 0; t < cur.size(); ++t)
        next[static_cast<size_t>(g.image[t])] = cur[t];
      auto [it, fresh] = seen.emplace(next, sign * g.sign);
      REQUIRE(it->second == sign * g.sign);
      if (fresh) queue.push_back(next);
    }
  }
  REQUIRE(seen.size() == 6);
  int negative = 0;
  for (const auto& [perm, sign] : seen)
    if (sign < 0) ++negative;
  REQUIRE(negative == 3);
}

TEST_CASE("general tableau heads are rejected") {
  SymbolTable tab = parse_decls("T_{a b c d}::TableauSymmetry(rows=[[0,2],[1,3]]);");
  Expression e = parse_expression("T_{b a c d}", tab);
  try {
    canonicalise(e, tab);
    FAIL("expected an error");
  } catch (const Error& err) {
    REQUIRE(err.code() == ErrorCode::unsupported_tableau);
  }
}

TEST_CASE("the closure guard trips on oversized orbits") {
  SymbolTable tab = parse_decls("S_{a b c d e}::Symmetric;");
  Expression e = parse_expression("S_{e d c b a}", tab);
  try {
    canonicalise(e, tab, 100);
    FAIL("expected an error");
  } catch (const Error& err) {
    REQUIRE(err.code() == ErrorCode::closure_too_large);
  }
  // the default guard is far away for small orbits
  REQUIRE(canonicalise(e, tab).terms.size() == 1);
}

TEST_CASE("canonicalisation is idempotent and projection-safe") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> nterms(1, 4);

  std::vector<std::pair<std::string, int>> heads = {
      {"R_{a b c d}::RiemannTensor;", 4},
      {"A_{a b c}::AntiSymmetric;", 3},
      {"S_{a b c}::Symmetric;", 3}};

  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto& [decl, arity] = heads[trial % heads.size()];
    SymbolTable tab = parse_decls(decl);
    std::string head(1, decl[0]);

    std::vector<std::string> names;
    if (arity == 3)
      names = (trial % 2 == 0) ? std::vector<std::string>{"a", "b", "c"}
                               : std::vector<std::string>{"p", "p", "a"};
    else
      names = (trial % 2 == 0) ? std::vector<std::string>{"a", "b", "c", "d"}
                               : std::vector<std::string>{"p", "p", "a", "b"};

    std::string src;
    int m = nterms(rng);
    for (int t = 0; t < m; ++t) {
      int c = coeff(rng);
      if (c == 0) c = 1;
      std::vector<std::string> perm = names;
      std::shuffle(perm.begin(), perm.end(), rng);
      if (t) src += " + ";
      src += std::to_string(c) + " " + head + "_{";
      for (size_t i = 0; i < perm.size(); ++i) src += (i ? " " : "") + perm[i];
      src += "}";
    }

    Expression e = parse_expression(src, tab);
    Expression canon = canonicalise(e, tab);
    INFO(src << "  ->  " << print_expression(canon, tab));
    REQUIRE(equivalent(canonicalise(canon, tab), canon));
    REQUIRE(equivalent(young_project(canon, tab), young_project(e, tab)));
    ++checked;
  }
  REQUIRE(checked == 120);
}
