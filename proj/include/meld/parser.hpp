// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meld/errors.hpp"
#include "meld/expr.hpp"

// Script grammar, one statement per terminator (';' echoes, ':' and '.' are silent):
//
//   R_{a b c d} :: RiemannTensor;
//   T_{a b c d} :: TableauSymmetry(rows=[[0,1,3],[2]]);
//   W_{a b c d} :: TableauSymmetry(rows=[[0],[1]]) * TableauSymmetry(rows=[[2],[3]]);
//   a_1 :: ScalarSymbol;   Tr :: Trace;   A :: NonCommuting;
//   ex := a_1 R_{a b c d} + 1/4 R_{a c d b};
//   meld(ex);
//
// Identifiers may carry a leading backslash, which is stripped, so listings
// written with \mu or \delta parse unchanged. '#' starts a line comment.

namespace meld {

struct Statement {
  enum class Kind { decl, assign, command };
  Kind kind = Kind::assign;
  std::string name;  // declared head / assignment target / command verb
  std::string arg;   // command argument
  Expression expr;   // assignment payload
  bool echo = true;
  int line = 1;
};

namespace detail {

struct Token {
  enum class Kind { ident, number, punct, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_space();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = Token{Token::Kind::end, "", line_, col_};
      return;
    }
    char c = src_[pos_];
    if (c == '\\' || std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      if (c == '\\') bump();  // strip the escape, keep the name
      if (pos_ >= src_.size() || !std::isalpha(static_cast<unsigned char>(src_[pos_])))
        throw SyntaxError("dangling '\\'", line_, col_);
      std::string name;
      while (pos_ < src_.size()) {
        char d = src_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d))) {
          name += d;
          bump();
        } else if (d == '_' && pos_ + 1 < src_.size() &&
                   std::isalnum(static_cast<unsigned char>(src_[pos_ + 1]))) {
          name += d;  // underscore joins only when part of a name like a_1
          bump();
        } else {
          break;
        }
      }
      (void)start;
      tok_ = Token{Token::Kind::ident, std::move(name), tok_.line, tok_.col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        num += src_[pos_];
        bump();
      }
      tok_ = Token{Token::Kind::number, std::move(num), tok_.line, tok_.col};
      return;
    }
    // multi-char punctuation first
    if (c == ':' && pos_ + 1 < src_.size()) {
      char d = src_[pos_ + 1];
      if (d == ':' || d == '=') {
        bump();
        bump();
        tok_ = Token{Token::Kind::punct, std::string(1, c) + d, tok_.line, tok_.col};
        return;
      }
    }
    // the flexible-arity marker, lexed whole so '#' never reads as a comment
    if (c == '{' && pos_ + 2 < src_.size() && src_[pos_ + 1] == '#' && src_[pos_ + 2] == '}') {
      bump();
      bump();
      bump();
      tok_ = Token{Token::Kind::punct, "{#}", tok_.line, tok_.col};
      return;
    }
    static const std::string singles = "_^{}()[]+-*/,=:;.";
    if (singles.find(c) == std::string::npos)
      throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
    bump();
    tok_ = Token{Token::Kind::punct, std::string(1, c), tok_.line, tok_.col};
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

}  // namespace detail

class Parser {
 public:
  using Env = std::map<std::string, Expression>;

  Parser(std::string_view src, SymbolTable& tab, const Env* env = nullptr)
      : lex_(src), tab_(tab), env_(env) {}

  bool at_end() { return peek().kind == detail::Token::Kind::end; }

  // Parses one statement; declarations take effect immediately so later
  // statements in the same script see them.
  Statement next_statement() {
    Statement st;
    st.line = peek().line;
    detail::Token head = expect_ident("statement head");
    st.name = head.text;

    if (is_punct("_") || is_punct("^")) {
      // a declaration pattern; arity comes from the index blocks
      std::vector<IndexToken> pattern = parse_index_blocks();
      expect_punct("::");
      apply_declaration(st, static_cast<int>(pattern.size()));
      return st;
    }
    if (is_punct("{#}")) {
      // flexible-arity pattern, e.g. Tr{#}::Trace
      take();
      expect_punct("::");
      apply_declaration_body(st, -1, false);
      return st;
    }
    if (is_punct("::")) {
      take();
      apply_declaration_body(st, 0, false);
      return st;
    }
    if (is_punct(":=")) {
      take();
      st.kind = Statement::Kind::assign;
      st.expr = parse_expression_body();
      st.echo = expect_terminator();
      return st;
    }
    if (is_punct("(")) {
      take();
      st.kind = Statement::Kind::command;
      st.arg = expect_ident("command argument").text;
      expect_punct(")");
      st.echo = expect_terminator();
      return st;
    }
    throw SyntaxError("expected '::', ':=' or '(' after '" + st.name + "'", peek().line, peek().col);
  }

  Expression parse_expression_only() {
    Expression e = parse_expression_body();
    if (!at_end()) throw SyntaxError("trailing input after expression", peek().line, peek().col);
    return e;
  }

 private:
  // ---- declarations ----

  void apply_declaration(Statement& st, int arity) {
    apply_declaration_body(st, arity, true);
  }

  void apply_declaration_body(Statement& st, int arity, bool had_indices) {
    st.kind = Statement::Kind::decl;
    PropertyDecl d;
    d.head = st.name;
    d.arity = arity;

    struct Atom {
      std::string keyword;
      std::optional<FilledTableau> tableau;
    };
    std::vector<Atom> atoms;
    char joiner = 0;
    for (;;) {
      detail::Token kw = expect_ident("property");
      Atom a{kw.text, std::nullopt};
      if (kw.text == "TableauSymmetry") a.tableau = parse_tableau_args();
      atoms.push_back(std::move(a));
      if (is_punct("*") || is_punct("+")) {
        char j = take().text[0];
        if (joiner && joiner != j)
          throw SyntaxError("cannot mix '*' and '+' in one declaration", peek().line, peek().col);
        joiner = j;
        continue;
      }
      break;
    }
    st.echo = expect_terminator();

    if (atoms.size() == 1 && !atoms[0].tableau) {
      const std::string& kw = atoms[0].keyword;
      if (kw == "Symmetric")
        d.kind = PropKind::symmetric;
      else if (kw == "AntiSymmetric")
        d.kind = PropKind::anti_symmetric;
      else if (kw == "RiemannTensor")
        d.kind = PropKind::riemann;
      else if (kw == "Trace")
        d.kind = PropKind::trace;
      else if (kw == "NonCommuting")
        d.kind = PropKind::non_commuting;
      else if (kw == "ScalarSymbol")
        d.kind = PropKind::scalar_symbol;
      else
        throw SyntaxError("unknown property '" + kw + "'", st.line, 1);
      if (d.kind == PropKind::trace || d.kind == PropKind::non_commuting) {
        if (!had_indices) d.arity = -1;  // flexible arity
      }
      if (d.kind == PropKind::scalar_symbol && had_indices)
        throw SyntaxError("scalar symbol '" + d.head + "' cannot take indices", st.line, 1);
    } else {
      for (const auto& a : atoms)
        if (!a.tableau)
          throw SyntaxError("'*' and '+' combine TableauSymmetry terms only", st.line, 1);
      d.kind = PropKind::tableau;
      SymmetrySpec s;
      s.kind = atoms.size() == 1           ? SymmetrySpec::Kind::single
               : joiner == '*'             ? SymmetrySpec::Kind::product
                                           : SymmetrySpec::Kind::hermitian_sum;
      for (auto& a : atoms) s.members.push_back(std::move(*a.tableau));
      d.symmetry = std::move(s);
    }
    tab_.declare(std::move(d));
  }

  FilledTableau parse_tableau_args() {
    expect_punct("(");
    detail::Token kw = expect_ident("rows");
    if (kw.text != "rows") throw SyntaxError("expected 'rows='", kw.line, kw.col);
    expect_punct("=");
    expect_punct("[");
    std::vector<std::vector<int>> rows;
    for (;;) {
      expect_punct("[");
      std::vector<int> row;
      for (;;) {
        detail::Token n = take();
        if (n.kind != detail::Token::Kind::number)
          throw SyntaxError("expected slot number", n.line, n.col);
        row.push_back(std::stoi(n.text));
        if (is_punct(",")) {
          take();
          continue;
        }
        break;
      }
      expect_punct("]");
      rows.push_back(std::move(row));
      if (is_punct(",")) {
        take();
        continue;
      }
      break;
    }
    expect_punct("]");
    expect_punct(")");
    return FilledTableau::make(std::move(rows));
  }

  // ---- expressions ----

  Expression parse_expression_body() {
    Expression e;
    bool first = true;
    for (;;) {
      int sign = 1;
      bool saw_sign = false;
      while (is_punct("+") || is_punct("-")) {
        if (take().text == "-") sign = -sign;
        saw_sign = true;
      }
      if (!saw_sign && !first) break;
      parse_term(e, sign);
      first = false;
      if (is_punct("+") || is_punct("-")) continue;
      break;
    }
    return e;
  }

  void parse_term(Expression& out, int sign) {
    Coefficient coeff = Coefficient(Rational(sign));
    std::vector<TensorFactor> factors;
    std::optional<std::string> ref;
    bool trace = false;
    bool got_anything = false;

    for (;;) {
      const detail::Token& t = peek();
      if (t.kind == detail::Token::Kind::number) {
        got_anything = true;
        coeff *= parse_rational();
      } else if (t.kind == detail::Token::Kind::punct && t.text == "(") {
        got_anything = true;
        take();
        Expression sub = parse_expression_body();
        expect_punct(")");
        Coefficient c;
        for (const auto& m : sub.terms) {
          if (!m.factors.empty() || m.trace)
            throw SyntaxError("parenthesised subexpressions must be scalar", t.line, t.col);
          c += m.coeff;
        }
        coeff = coeff * c;
      } else if (t.kind == detail::Token::Kind::ident) {
        got_anything = true;
        parse_named(coeff, factors, ref, trace);
      } else {
        break;
      }
      if (is_punct("*")) {
        take();
        continue;
      }
      if (peek().kind == detail::Token::Kind::number ||
          peek().kind == detail::Token::Kind::ident || is_punct("("))
        continue;
      break;
    }

    if (!got_anything)
      throw SyntaxError("expected a term", peek().line, peek().col);
    if (ref) {
      if (!factors.empty() || trace)
        throw SyntaxError("a named expression can only appear as a whole term", peek().line,
                          peek().col);
      const Expression* sub = env_ ? (env_->count(*ref) ? &env_->at(*ref) : nullptr) : nullptr;
      if (!sub) throw SyntaxError("unknown expression '" + *ref + "'", peek().line, peek().col);
      Expression scaled = scale(*sub, coeff);
      out.terms.insert(out.terms.end(), scaled.terms.begin(), scaled.terms.end());
      return;
    }
    if (coeff.is_zero()) return;
    Monomial m;
    m.coeff = std::move(coeff);
    m.factors = std::move(factors);
    m.trace = trace;
    for (const auto& f : m.factors) check_arity(f);
    index_occurrences(m);  // rejects triple occurrences early
    out.terms.push_back(std::move(m));
  }

  void parse_named(Coefficient& coeff, std::vector<TensorFactor>& factors,
                   std::optional<std::string>& ref, bool& trace) {
    detail::Token t = take();
    const std::string& name = t.text;

    if (tab_.is_trace_head(name) && is_punct("(")) {
      take();
      if (trace) throw SyntaxError("nested trace", t.line, t.col);
      trace = true;
      while (!is_punct(")")) {
        const detail::Token& u = peek();
        if (u.kind == detail::Token::Kind::number) {
          coeff *= parse_rational();
        } else if (u.kind == detail::Token::Kind::ident) {
          detail::Token v = take();
          if (tab_.is_scalar_symbol(v.text)) {
            coeff = coeff * Coefficient::symbol(v.text);
          } else {
            factors.push_back(TensorFactor{v.text, parse_index_blocks()});
          }
        } else if (u.kind == detail::Token::Kind::punct && u.text == "*") {
          take();
        } else {
          throw SyntaxError("unexpected token in trace", u.line, u.col);
        }
      }
      take();  // ')'
      return;
    }

    if (is_punct("_") || is_punct("^")) {
      factors.push_back(TensorFactor{name, parse_index_blocks()});
      return;
    }
    if (tab_.is_scalar_symbol(name)) {
      coeff = coeff * Coefficient::symbol(name);
      return;
    }
    if (env_ && env_->count(name)) {
      if (ref) throw SyntaxError("two expression names in one term", t.line, t.col);
      ref = name;
      return;
    }
    factors.push_back(TensorFactor{name, {}});  // bare head, arity 0
  }

  std::vector<IndexToken> parse_index_blocks() {
    std::vector<IndexToken> out;
    while (is_punct("_") || is_punct("^")) {
      IndexPos pos = take().text == "_" ? IndexPos::lower : IndexPos::upper;
      expect_punct("{");
      while (!is_punct("}")) {
        detail::Token n = expect_ident("index name");
        out.push_back(IndexToken{n.text, pos});
      }
      take();  // '}'
    }
    return out;
  }

  Rational parse_rational() {
    detail::Token n = take();
    Int num(n.text);
    if (is_punct("/")) {
      take();
      detail::Token d = take();
      if (d.kind != detail::Token::Kind::number)
        throw SyntaxError("expected denominator", d.line, d.col);
      return Rational(num, Int(d.text));
    }
    return Rational(num);
  }

  void check_arity(const TensorFactor& f) const {
    const PropertyDecl* d = tab_.find(f.head);
    if (!d) return;
    if (d->kind == PropKind::scalar_symbol)
      throw Error(ErrorCode::unknown_symbol_arity,
                  "scalar symbol '" + f.head + "' used as a tensor");
    if (d->arity >= 0 && d->arity != f.arity())
      throw Error(ErrorCode::unknown_symbol_arity,
                  "'" + f.head + "' declared with arity " + std::to_string(d->arity) +
                      " but used with " + std::to_string(f.arity()));
  }

  // ---- token helpers ----

  const detail::Token& peek() { return lex_.peek(); }
  detail::Token take() { return lex_.take(); }
  bool is_punct(const std::string& p) {
    return peek().kind == detail::Token::Kind::punct && peek().text == p;
  }
  detail::Token expect_ident(const std::string& what) {
    detail::Token t = take();
    if (t.kind != detail::Token::Kind::ident)
      throw SyntaxError("expected " + what, t.line, t.col);
    return t;
  }
  void expect_punct(const std::string& p) {
    detail::Token t = take();
    if (t.kind != detail::Token::Kind::punct || t.text != p)
      throw SyntaxError("expected '" + p + "'", t.line, t.col);
  }
  bool expect_terminator() {
    detail::Token t = take();
    if (t.kind == detail::Token::Kind::punct && t.text == ";") return true;
    if (t.kind == detail::Token::Kind::punct && (t.text == ":" || t.text == "."))
      return false;
    throw SyntaxError("expected ';', ':' or '.'", t.line, t.col);
  }

  detail::Lexer lex_;
  SymbolTable& tab_;
  const Env* env_;
};

inline Expression parse_expression(std::string_view text, SymbolTable& tab,
                                   const Parser::Env* env = nullptr) {
  Parser p(text, tab, env);
  return p.parse_expression_only();
}

}  // namespace meld
