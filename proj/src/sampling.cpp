#include "stackel/sampling.hpp"

#include <stdexcept>

namespace stackel {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do draw = engine_();
  while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

Rational Rng::small_rational(std::int64_t num_bound, std::int64_t den_bound) {
  const std::int64_t num = uniform_int(-num_bound, num_bound);
  const std::int64_t den = uniform_int(1, den_bound);
  return Rational(static_cast<long>(num), static_cast<long>(den));
}

Rng Rng::split(std::uint64_t k) const {
  std::mt19937_64 copy = engine_;
  const std::uint64_t base = copy();
  return Rng(base ^ (0x9E3779B97F4A7C15ULL * (k + 1)));
}

ConstrainedPoint stereographic_point(std::span<const Rational> u, std::span<const Rational> w) {
  const std::size_t n = u.size();
  if (w.size() != n + 1) throw std::invalid_argument("tangent seed has wrong length");
  Rational norm2(0);
  for (const auto& ui : u) norm2 += ui * ui;
  const Rational den = norm2 + Rational(1);
  ConstrainedPoint pt;
  pt.q.reserve(n + 1);
  for (const auto& ui : u) pt.q.push_back(Rational(2) * ui / den);
  pt.q.push_back((norm2 - Rational(1)) / den);
  Rational wq(0);
  for (std::size_t k = 0; k <= n; ++k) wq += w[k] * pt.q[k];
  for (std::size_t k = 0; k <= n; ++k) pt.p.push_back(w[k] - wq * pt.q[k]);
  return pt;
}

ConstrainedPoint sample_constrained_point(std::uint64_t seed, int n, bool nonvanishing) {
  if (n < 2) throw std::invalid_argument("constrained sampling needs n >= 2");
  Rng rng(seed);
  for (;;) {
    std::vector<Rational> u, w;
    for (int i = 0; i < n; ++i) u.push_back(rng.small_rational(9, 7));
    for (int i = 0; i <= n; ++i) w.push_back(rng.small_rational(9, 7));
    ConstrainedPoint pt = stereographic_point(u, w);
    if (!nonvanishing) return pt;
    bool ok = true;
    for (const auto& qa : pt.q) ok = ok && !qa.is_zero();
    if (ok) return pt;
  }
}

std::vector<Rational> sample_chart_point(Rng& rng, std::span<const Rational> a) {
  std::vector<Rational> x;
  for (std::size_t i = 1; i < a.size(); ++i) {
    const Rational m(static_cast<long>(rng.uniform_int(1000, 9000)), 10000L);
    x.push_back(a[i - 1] + (a[i] - a[i - 1]) * m);
  }
  return x;
}

}  // namespace stackel
