// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

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

Expression run_meld(const std::string& decls, const std::string& expr,
                    MeldStats* stats = nullptr) {
  SymbolTable tab = parse_decls(decls);
  return meld::meld(parse_expression(expr, tab), tab, {}, stats);
}

void check_meld(const std::string& decls, const std::string& expr,
                const std::string& expect) {
  SymbolTable tab = parse_decls(decls);
  Expression got = meld::meld(parse_expression(expr, tab), tab);
  INFO(print_expression(got, tab));
  REQUIRE(equivalent(got, parse_expression(expect, tab)));
}

}  // namespace

TEST_CASE("mono-term symmetries collapse to the first spelling seen") {
  check_meld("A_{a b c}::AntiSymmetric;", "A_{b a c} - A_{a b c}", "2 A_{b a c}");
}

TEST_CASE("the cyclic identity is recognised") {
  check_meld("R_{a b c d}::RiemannTensor;", "R_{a b c d} + R_{a c d b} + R_{a d b c}", "0");
}

TEST_CASE("symbolic coefficients survive melding") {
  check_meld("R_{a b c d}::RiemannTensor; a_1::ScalarSymbol; a_2::ScalarSymbol;"
             " a_3::ScalarSymbol;",
             "a_1 R_{a b c d} + a_2 R_{a c d b} + a_3 R_{a d b c}",
             "(a_1 - a_3) R_{a b c d} + (a_2 - a_3) R_{a c d b}");
}

TEST_CASE("terms differing only by dummy relabelling cancel") {
  check_meld("\\epsilon^{m s n r}::AntiSymmetric;",
             "F^{a b}_{\\mu \\sigma} A^{b c}_{\\nu} A^{c a}_{\\rho}"
             " \\epsilon^{\\mu \\sigma \\nu \\rho}"
             " - F^{b c}_{\\mu \\sigma} A^{c a}_{\\nu} A^{a b}_{\\rho}"
             " \\epsilon^{\\mu \\sigma \\nu \\rho}",
             "0");
}

TEST_CASE("the combination order picks the surviving spelling") {
  check_meld("R_{a b c d}::RiemannTensor;",
             "R_{i j k l} R_{i j k l} + R_{i j k l} R_{i k j l}",
             "3/2 R_{i j k l} R_{i j k l}");
  check_meld("R_{a b c d}::RiemannTensor;",
             "R_{i j k l} R_{i k j l} + R_{i j k l} R_{i j k l}",
             "3 R_{i j k l} R_{i k j l}");
  // the hidden two-term relation behind both lines
  check_meld("R_{a b c d}::RiemannTensor;",
             "R_{i j k l} R_{i j k l} - 2 R_{i j k l} R_{i k j l}", "0");
}

TEST_CASE("hook tableaux satisfy their cyclic identities") {
  // cycling the column pair {0,2} plus the row cell 1
  check_meld("T_{a b c d}::TableauSymmetry(rows=[[0,1,3],[2]]);",
             "T_{a b c d} + T_{b c a d} + T_{c a b d}", "0");
  check_meld("T_{a b c d}::TableauSymmetry(rows=[[0,1,3],[2]]);",
             "T_{a b c d} + T_{c a d b} + T_{d c a b}", "0");
  // five cells, columns {1,3} and {2,4}, the hook tail in slot 0
  check_meld("T_{a b c d e}::TableauSymmetry(rows=[[1,2,0],[3,4]]);",
             "T_{a b c d e} + T_{a b d e c} + T_{b a e c d} + T_{c a d b e}", "0");
}

TEST_CASE("melding reports its statistics") {
  MeldStats st;
  Expression out = run_meld("R_{a b c d}::RiemannTensor;",
                            "R_{a b c d} + R_{a c d b} + R_{a d b c}", &st);
  REQUIRE(out.terms.empty());
  REQUIRE(st.terms_in == 3);
  REQUIRE(st.terms_out == 0);
  REQUIRE(st.groups == 1);
  REQUIRE(st.basis_members == 2);
  REQUIRE(st.distinct_rows > 0);
  REQUIRE(st.max_projection_rows > 0);
}

TEST_CASE("traces are compared up to cyclic rotation") {
  const std::string decls = "Tr{#}::Trace;";
  check_meld(decls, "Tr(M_{a b} N_{b c} P_{c a}) - Tr(N_{b c} P_{c a} M_{a b})", "0");
  check_meld(decls, "Tr(M_{a b} N_{b a}) + Tr(N_{a b} M_{b a})",
             "2 Tr(M_{a b} N_{b a})");
}

TEST_CASE("kronecker deltas contract away") {
  SymbolTable tab = parse_decls("T_{a b}::Symmetric;");
  Expression e = parse_expression("\\delta_{a b} T_{b c}", tab);
  Expression out = eliminate_kronecker(e);
  REQUIRE(equivalent(out, parse_expression("T_{a c}", tab)));

  // a self-contracted delta is a dimension factor and must stay
  Expression kept = eliminate_kronecker(parse_expression("\\delta_{a a} T_{b c}", tab));
  REQUIRE(equivalent(kept, parse_expression("\\delta_{a a} T_{b c}", tab)));
  // an uncontracted delta also stays
  Expression both = eliminate_kronecker(parse_expression("\\delta_{a b}", tab));
  REQUIRE(equivalent(both, parse_expression("\\delta_{a b}", tab)));
  // chains collapse fully
  Expression chain =
      eliminate_kronecker(parse_expression("\\delta_{a b} \\delta_{b c} T_{c d}", tab));
  REQUIRE(equivalent(chain, parse_expression("T_{a d}", tab)));
}

TEST_CASE("a projection pool changes nothing but the wall clock") {
  SymbolTable tab = parse_decls("R_{a b c d}::RiemannTensor;");
  Expression e = parse_expression(
      "R_{a b c d} + R_{a c d b} + R_{a d b c} + 2 R_{b a c d} - R_{c d a b}", tab);
  MeldOptions pooled;
  pooled.threads = 3;
  REQUIRE(equivalent(meld::meld(e, tab, pooled), meld::meld(e, tab)));

  MeldOptions capped;
  capped.threads = 3;
  capped.max_rows = 2;
  try {
    meld::meld(e, tab, capped);
    FAIL("expected an error");
  } catch (const Error& err) {
    REQUIRE(err.code() == ErrorCode::row_limit);
  }
}

TEST_CASE("terms must share one free index set") {
  SymbolTable tab = parse_decls("T_{a b}::Symmetric;");
  Expression e = parse_expression("T_{a b} + T_{a c}", tab);
  try {
    meld::meld(e, tab);
    FAIL("expected an error");
  } catch (const Error& err) {
    REQUIRE(err.code() == ErrorCode::mismatched_free_indices);
  }
}

TEST_CASE("melding is a projection of the input span") {
  // young_project(meld(e)) must equal young_project(e), and melding twice
  // must change nothing: the two properties that make the result a faithful
  // simplification of the input.
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> nterms(1, 4);

  std::vector<std::string> shapes = {
      "TableauSymmetry(rows=[[0,1,2]])",  "TableauSymmetry(rows=[[0,1],[2]])",
      "TableauSymmetry(rows=[[0,2],[1]])", "TableauSymmetry(rows=[[0],[1],[2]])",
      "TableauSymmetry(rows=[[0,2],[1,3]])", "TableauSymmetry(rows=[[0,1,3],[2]])"};

  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::string& shape = shapes[trial % shapes.size()];
    int arity = (trial % shapes.size() < 4) ? 3 : 4;
    SymbolTable tab;
    {
      std::string head = (arity == 4) ? "T_{a b c d}" : "T_{a b c}";
      std::string decl = head + "::" + shape + ";";
      Parser p(decl, tab, nullptr);
      p.next_statement();
    }

    std::vector<std::string> names;
    if (arity == 3)
      names = {"a", "b", "c"};
    else if (trial % 2 == 0)
      names = {"a", "b", "c", "d"};
    else
      names = {"p", "p", "a", "b"};  // one contracted pair

    std::string src;
    int m = nterms(rng);
    for (int t = 0; t < m; ++t) {
      int c = coeff(rng);
      if (c == 0) c = 1;
      std::vector<std::string> perm = names;
      std::shuffle(perm.begin(), perm.end(), rng);
      if (t) src += " + ";
      src += std::to_string(c) + " T_{";
      for (size_t i = 0; i < perm.size(); ++i) src += (i ? " " : "") + perm[i];
      src += "}";
    }

    Expression e = parse_expression(src, tab);
    Expression melded = meld::meld(e, tab);
    INFO(shape << "  " << src << "  ->  " << print_expression(melded, tab));
    REQUIRE(equivalent(young_project(melded, tab), young_project(e, tab)));
    REQUIRE(equivalent(meld::meld(melded, tab), melded));
    ++checked;
  }
  REQUIRE(checked == 200);
}

TEST_CASE("plan optimizations never change the result") {
  std::mt19937_64 rng(1414);
  std::uniform_int_distribution<int> coeff(-3, 3);

  MeldOptions plain;
  plain.optimize = false;

  std::vector<std::pair<std::string, std::string>> cases = {
      {"R_{a b c d}::RiemannTensor; F_{a b}::AntiSymmetric;",
       "R_{m n r l} F_{m n} + R_{m r n l} F_{m n}"},
      {"R_{a b c d}::RiemannTensor; \\epsilon_{i j k l}::AntiSymmetric;",
       "R_{a b c d} \\epsilon_{p q r s} - R_{b a c d} \\epsilon_{q p r s}"},
      {"A_{a b c}::AntiSymmetric; S_{a b c}::Symmetric;",
       "A_{a b c} S_{p q r} + A_{b c a} S_{q p r}"},
      {"T_{a b c d}::TableauSymmetry(rows=[[0,2],[1,3]]); F_{a b}::AntiSymmetric;",
       "T_{a b m n} F_{m n} - T_{b a m n} F_{m n}"}};

  for (const auto& [decls, expr] : cases) {
    SymbolTable tab = parse_decls(decls);
    Expression e = parse_expression(expr, tab);
    Expression fast = meld::meld(e, tab);
    Expression slow = meld::meld(e, tab, plain);
    INFO(expr);
    REQUIRE(equivalent(fast, slow));
  }

  // randomized: fully contracted products so every term shares one free set
  SymbolTable tab = parse_decls(
      "R_{a b c d}::RiemannTensor; F_{a b}::AntiSymmetric; G_{a b}::AntiSymmetric;");
  std::vector<std::string> pool = {"m", "n", "r", "l"};
  for (int trial = 0; trial < 30; ++trial) {
    std::string src;
    for (int t = 0; t < 2; ++t) {
      std::vector<std::string> perm = pool;
      std::shuffle(perm.begin(), perm.end(), rng);
      int c = coeff(rng);
      if (c == 0) c = 2;
      if (t) src += " + ";
      src += std::to_string(c) + " R_{" + perm[0] + " " + perm[1] + " " + perm[2] +
             " " + perm[3] + "} F_{" + perm[0] + " " + perm[1] + "} G_{" + perm[2] +
             " " + perm[3] + "}";
    }
    Expression e = parse_expression(src, tab);
    INFO(src);
    REQUIRE(equivalent(meld::meld(e, tab), meld::meld(e, tab, plain)));
  }
}

TEST_CASE("four riemann monomials reduce to zero") {
  check_meld("R_{m n p q}::RiemannTensor;",
             "R_{p q r s} R_{p t r u} R_{t v q w} R_{u v s w}"
             " - R_{p q r s} R_{p q t u} R_{r v t w} R_{s v u w}"
             " - R_{m n a b} R_{n p b c} R_{m s c d} R_{s p d a}"
             " + (1/4) R_{m n a b} R_{p s b a} R_{m p c d} R_{n s d c}",
             "0");
}
