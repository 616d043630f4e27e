// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace meld {

enum class ErrorCode {
  syntax,                    // bad token / malformed statement (carries line:col)
  unknown_symbol_arity,      // head used with an arity different from its declaration
  index_triple_occurrence,   // an index name appears three or more times in a monomial
  mismatched_free_indices,   // terms of one expression disagree on the free-index set
  free_index_not_in_map,     // adjacency conversion met a free name missing from the map
  skeleton_mismatch,         // projection offered to a basis built over another skeleton
  overlapping_tableau_slots, // tableau slots repeat within a declaration or product
  unsupported_tableau,       // canonicalise on a head with only a general tableau
  closure_too_large,         // signed-permutation closure exceeded its cap
  row_limit,                 // projection would exceed the configured row cap
  bad_script,                // semantic script error (unknown command, missing name)
};

inline bool is_resource_error(ErrorCode c) {
  return c == ErrorCode::closure_too_large || c == ErrorCode::row_limit;
}

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::syntax: return "syntax";
    case ErrorCode::unknown_symbol_arity: return "unknown_symbol_arity";
    case ErrorCode::index_triple_occurrence: return "index_triple_occurrence";
    case ErrorCode::mismatched_free_indices: return "mismatched_free_indices";
    case ErrorCode::free_index_not_in_map: return "free_index_not_in_map";
    case ErrorCode::skeleton_mismatch: return "skeleton_mismatch";
    case ErrorCode::overlapping_tableau_slots: return "overlapping_tableau_slots";
    case ErrorCode::unsupported_tableau: return "unsupported_tableau";
    case ErrorCode::closure_too_large: return "closure_too_large";
    case ErrorCode::row_limit: return "row_limit";
    case ErrorCode::bad_script: return "bad_script";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::string msg, int line, int col)
      : Error(ErrorCode::syntax,
              "line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace meld
