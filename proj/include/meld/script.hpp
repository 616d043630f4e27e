// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include "meld/canon.hpp"
#include "meld/meld.hpp"
#include "meld/parser.hpp"
#include "meld/printer.hpp"

namespace meld {

struct SessionOutput {
  std::string name;
  std::string text;
  int line = 0;
};

// Executes scripts statement by statement against one symbol table and one
// map of named expressions.  Statements ending in ';' echo the affected
// expression; ':' and '.' stay silent.  meld statistics accumulate across
// calls; heads melded without a declaration pass through untouched but are
// reported in warnings.
class Session {
 public:
  SymbolTable tab;
  Parser::Env env;
  MeldOptions opts;
  MeldStats stats;
  std::vector<std::string> warnings;

  std::vector<SessionOutput> run(std::string_view script) {
    std::vector<SessionOutput> out;
    Parser p(script, tab, &env);
    while (!p.at_end()) {
      Statement st = p.next_statement();
      switch (st.kind) {
        case Statement::Kind::decl:
          break;  // applied by the parser
        case Statement::Kind::assign:
          env[st.name] = std::move(st.expr);
          if (st.echo)
            out.push_back({st.name, print_expression(env.at(st.name), tab), st.line});
          break;
        case Statement::Kind::command:
          apply(st.name, st.arg);
          if (st.echo)
            out.push_back({st.arg, print_expression(env.at(st.arg), tab), st.line});
          break;
      }
    }
    return out;
  }

  void apply(const std::string& verb, const std::string& arg) {
    auto it = env.find(arg);
    if (it == env.end())
      throw Error(ErrorCode::bad_script, "unknown expression '" + arg + "'");
    Expression& ex = it->second;
    if (verb == "meld") {
      warn_undeclared(ex);
      MeldStats s;
      ex = meld(ex, tab, opts, &s);
      merge(s);
    } else if (verb == "canonicalise" || verb == "canonicalize") {
      ex = canonicalise(ex, tab);
    } else if (verb == "project") {
      ex = young_project(ex, tab, opts);
    } else if (verb == "sort_product") {
      sort_product(ex, tab);
    } else if (verb == "eliminate_kronecker") {
      ex = eliminate_kronecker(ex);
    } else {
      throw Error(ErrorCode::bad_script, "unknown command '" + verb + "'");
    }
  }

 private:
  void warn_undeclared(const Expression& ex) {
    std::set<std::string> seen;
    for (const auto& m : ex.terms)
      for (const auto& f : m.factors) {
        if (tab.find(f.head) || !seen.insert(f.head).second) continue;
        warnings.push_back("no symmetry declared for '" + f.head +
                           "'; factor passes through unprojected");
      }
  }

  void merge(const MeldStats& s) {
    stats.terms_in += s.terms_in;
    stats.terms_out += s.terms_out;
    stats.groups += s.groups;
    stats.basis_members += s.basis_members;
    stats.distinct_rows += s.distinct_rows;
    stats.max_projection_rows = std::max(stats.max_projection_rows, s.max_projection_rows);
    stats.total_projection_rows += s.total_projection_rows;
    stats.projection_ns += s.projection_ns;
    stats.solve_ns += s.solve_ns;
  }
};

}  // namespace meld
