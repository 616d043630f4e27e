// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace meld {

// Exact arithmetic everywhere: row weights are arbitrary-precision integers,
// solver coefficients are exact rationals. No floating point in the engine.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int factorial(int n) {
  Int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Parity of the permutation sorting `v` ascending: +1 even, -1 odd.
// Quadratic inversion count; the vectors involved are tiny.
template <typename T>
int sort_parity(const std::vector<T>& v) {
  int inversions = 0;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (v[j] < v[i]) ++inversions;
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace meld
