#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "stackel/rational.hpp"

namespace stackel {

/// Seeded generator with portable draws (std distributions are not
/// reproducible across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi], by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1).
  double uniform01();
  /// num/den with |num| <= num_bound and 1 <= den <= den_bound.
  Rational small_rational(std::int64_t num_bound, std::int64_t den_bound);
  /// Independent child stream for the k-th task of a parallel sweep.
  Rng split(std::uint64_t k) const;

 private:
  std::mt19937_64 engine_;
};

struct ConstrainedPoint {
  std::vector<Rational> q;
  std::vector<Rational> p;
};

/// Exact point of T*S^n: rational stereographic image for q, tangent
/// projection of a random rational vector for p.  With `nonvanishing`,
/// resamples until every q_a is nonzero.
ConstrainedPoint sample_constrained_point(std::uint64_t seed, int n, bool nonvanishing = false);
ConstrainedPoint stereographic_point(std::span<const Rational> u, std::span<const Rational> w);

/// x^i = a_{i-1} + (a_i - a_{i-1}) m / 10^4 with m uniform in [1000, 9000].
std::vector<Rational> sample_chart_point(Rng& rng, std::span<const Rational> a);

}  // namespace stackel
