#include "stackel/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace stackel {
namespace {

void enumerate(int dim, int var, int remaining, MultiIndex& current, int degree,
               std::vector<MultiIndex>& out) {
  if (var == dim) {
    if (remaining == 0) out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = static_cast<std::uint8_t>(e);
    enumerate(dim, var + 1, remaining - e, current, degree, out);
  }
  current[var] = 0;
}

}  // namespace

JetLayout::JetLayout(int dim) : dim_(dim) {
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    MultiIndex m{};
    enumerate(dim, 0, d, m, d, indices_);
    prefix_[d] = indices_.size();
  }
  degrees_.resize(indices_.size());
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    int d = 0;
    for (int v = 0; v < dim; ++v) d += indices_[k][v];
    degrees_[k] = d;
  }

  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> per(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    for (std::size_t j = 0; j < indices_.size(); ++j) {
      if (degrees_[i] + degrees_[j] > kMaxJetOrder) continue;
      MultiIndex s{};
      for (int v = 0; v < dim; ++v) s[v] = static_cast<std::uint8_t>(indices_[i][v] + indices_[j][v]);
      per[find(s)].emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
  }
  product_offsets_.push_back(0);
  for (auto& list : per) {
    products_.insert(products_.end(), list.begin(), list.end());
    product_offsets_.push_back(products_.size());
  }

  raise_.assign(static_cast<std::size_t>(dim) * indices_.size(), npos);
  for (int v = 0; v < dim; ++v) {
    for (std::size_t k = 0; k < indices_.size(); ++k) {
      if (degrees_[k] >= kMaxJetOrder) continue;
      MultiIndex m = indices_[k];
      ++m[v];
      raise_[v * indices_.size() + k] = find(m);
    }
  }
}

std::size_t JetLayout::find(const MultiIndex& m) const {
  int d = 0;
  for (int v = 0; v < dim_; ++v) d += m[v];
  for (int v = dim_; v < kMaxJetDim; ++v)
    if (m[v] != 0) return npos;
  if (d > kMaxJetOrder) return npos;
  const std::size_t lo = d == 0 ? 0 : prefix_[d - 1];
  const std::size_t hi = prefix_[d];
  // Within one degree the indices are sorted in descending lexicographic order.
  auto first = indices_.begin() + static_cast<std::ptrdiff_t>(lo);
  auto last = indices_.begin() + static_cast<std::ptrdiff_t>(hi);
  auto it = std::lower_bound(first, last, m, [](const MultiIndex& a, const MultiIndex& b) {
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  });
  if (it == last || *it != m) return npos;
  return static_cast<std::size_t>(it - indices_.begin());
}

const JetLayout& JetLayout::get(int dim) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[dim];
  if (!slot) slot.reset(new JetLayout(dim));
  return *slot;
}

std::vector<RJet> coordinate_jets(std::span<const Rational> base, int order) {
  const int n = static_cast<int>(base.size());
  auto shared = std::make_shared<const std::vector<Rational>>(base.begin(), base.end());
  std::vector<RJet> x;
  x.reserve(base.size());
  for (int v = 0; v < n; ++v) x.push_back(RJet::variable(n, order, v, base[v], shared));
  return x;
}

RJet jet_lift(const JetFunction& f, std::span<const Rational> base, int order) {
  const std::vector<RJet> x = coordinate_jets(base, order);
  return f(x);
}

}  // namespace stackel
