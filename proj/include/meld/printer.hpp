// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sstream>
#include <string>

#include "meld/expr.hpp"

namespace meld {

namespace detail {

inline std::string rational_str(const Rational& q) {
  std::ostringstream os;
  os << q;  // boost prints p/q in lowest terms, q omitted when 1
  return os.str();
}

// One product term of a coefficient: rational part times scalar symbols.
inline std::string coeff_product_str(const std::vector<std::string>& syms, const Rational& q,
                                     bool* negative) {
  Rational mag = q < 0 ? Rational(-q) : q;
  if (negative) *negative = q < 0;
  std::string out;
  if (mag != 1 || syms.empty()) out = rational_str(mag);
  for (const auto& s : syms) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

}  // namespace detail

// Renders a coefficient without a leading sign; *negative reports whether the
// whole coefficient had one pulled out (only for rationals and single
// products; sums keep their internal signs and are parenthesised).
inline std::string print_coefficient(const Coefficient& c, bool* negative) {
  if (negative) *negative = false;
  const auto& terms = c.terms();
  if (terms.empty()) return "0";
  if (terms.size() == 1)
    return detail::coeff_product_str(terms.begin()->first, terms.begin()->second, negative);
  std::string out = "(";
  bool first = true;
  for (const auto& [syms, q] : terms) {
    bool neg = false;
    std::string piece = detail::coeff_product_str(syms, q, &neg);
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    out += piece;
    first = false;
  }
  out += ")";
  return out;
}

inline std::string print_factor(const TensorFactor& f) {
  std::string out = f.head;
  size_t i = 0;
  while (i < f.indices.size()) {
    IndexPos pos = f.indices[i].pos;
    out += pos == IndexPos::lower ? "_{" : "^{";
    bool first = true;
    while (i < f.indices.size() && f.indices[i].pos == pos) {
      if (!first) out += ' ';
      out += f.indices[i].name;
      first = false;
      ++i;
    }
    out += '}';
  }
  return out;
}

inline std::string print_monomial(const Monomial& m, const SymbolTable& tab, bool* negative) {
  bool neg = false;
  std::string c = print_coefficient(m.coeff, &neg);
  if (negative) *negative = neg;
  std::string body;
  for (const auto& f : m.factors) {
    if (!body.empty()) body += ' ';
    body += print_factor(f);
  }
  if (m.trace) body = tab.trace_head_or_default() + "(" + body + ")";
  if (body.empty()) return c;
  if (c == "1") return body;
  return c + " " + body;
}

inline std::string print_expression(const Expression& e, const SymbolTable& tab) {
  if (e.terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& m : e.terms) {
    bool neg = false;
    std::string piece = print_monomial(m, tab, &neg);
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    out += piece;
    first = false;
  }
  return out;
}

}  // namespace meld
