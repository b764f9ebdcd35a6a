#pragma once

// Seeded random differential polynomials for property tests.

#include <algorithm>
#include <cstdint>
#include <random>

#include "diffpoly.hpp"

namespace kdvh {

struct RandomPolyShape {
  int max_order = 5;
  int max_degree = 4;
  int max_terms = 6;
  int max_numerator = 20;
  int max_denominator = 6;
};

/// Nonzero-coefficient polynomial with 1..max_terms monomials (may include a
/// constant term).
inline DiffPoly random_diff_poly(std::mt19937_64& rng, const RandomPolyShape& shape = {}) {
  auto uniform = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  DiffPoly p;
  const int terms = uniform(1, shape.max_terms);
  for (int t = 0; t < terms; ++t) {
    DiffPoly::key_type key;
    const int d = uniform(0, shape.max_degree);
    for (int i = 0; i < d; ++i) key.push_back(uniform(0, shape.max_order));
    std::sort(key.begin(), key.end());
    int num = 0;
    while (num == 0) num = uniform(-shape.max_numerator, shape.max_numerator);
    p.add_term(std::move(key), Rational(num, uniform(1, shape.max_denominator)));
  }
  if (p.is_zero()) p.add_term({0}, 1);
  return p;
}

}  // namespace kdvh
