#pragma once

#include <vector>

#include "stackel/phase_poly.hpp"
#include "stackel/sampling.hpp"

namespace stackel::testing {

inline PhasePoly random_poly(Rng& rng, int dof, int max_degree, int terms) {
  PhasePoly r(dof);
  for (int t = 0; t < terms; ++t) {
    PhasePoly::Exponent e{};
    const int deg = static_cast<int>(rng.uniform_int(0, max_degree));
    for (int k = 0; k < deg; ++k) ++e[rng.uniform_int(0, 2 * dof - 1)];
    r.add_term(e, rng.small_rational(5, 3));
  }
  return r;
}

inline std::vector<Rational> rationals(std::initializer_list<long> v) {
  return {v.begin(), v.end()};
}

}  // namespace stackel::testing
