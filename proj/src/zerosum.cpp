#include "zslab/zerosum.hpp"

#include <algorithm>
#include <vector>

namespace zslab {

bool is_zero_sum(const Sequence& s) { return s.sum_index() == 0; }

bool is_zero_sum_free(const Sequence& s) {
  // Sigma(S) grows by S' -> S' u (S' + g) u {g}; only the union matters here.
  ElementSet sums(s.group());
  for (Index g : s.terms()) {
    if (g == 0) return false;
    ElementSet next = sums;
    next.merge_translated(sums, g);
    next.insert(g);
    if (next.contains(0)) return false;
    sums = std::move(next);
  }
  return true;
}

bool is_minimal_zero_sum(const SubsumTable& table) {
  const std::size_t n = table.max_k();
  if (n == 0) return false;
  if (!table.layer(n).contains(0)) return false;
  return table.first_layer_containing(0, 1, n) == static_cast<long>(n);
}

bool is_minimal_zero_sum(const Sequence& s) {
  if (s.empty() || !is_zero_sum(s)) return false;
  // S = T*g with T zero-sum free and sigma(S) = 0 is minimal: a proper
  // zero-sum part containing g leaves a zero-sum complement inside T.
  return is_zero_sum_free(s.without(s.terms().back()));
}

namespace {

struct Residual {
  const std::vector<std::pair<Index, int>>* counts;
  std::vector<int> remaining;
};

// Is -partial a sum of t terms drawn from positions >= start of the residual
// multiset, for some t with lo <= len + t <= hi and len + t >= 1?
bool completable(const GroupSpec& group, const Residual& r, std::size_t start, Index partial,
                 std::size_t len, std::size_t lo, std::size_t hi) {
  if (len > hi) return false;
  const std::size_t max_t = hi - len;
  const Index target = group.neg(partial);
  std::vector<ElementSet> layers(1, ElementSet::singleton(group, 0));
  auto satisfied = [&] {
    for (std::size_t t = 0; t < layers.size(); ++t) {
      const std::size_t total = len + t;
      if (total >= lo && total >= 1 && total <= hi && layers[t].contains(target)) return true;
    }
    return false;
  };
  if (satisfied()) return true;
  for (std::size_t i = start; i < r.counts->size(); ++i) {
    const Index g = (*r.counts)[i].first;
    for (int c = 0; c < r.remaining[i]; ++c) {
      if (layers.size() <= max_t) layers.emplace_back(group);
      for (std::size_t t = layers.size() - 1; t >= 1; --t) layers[t].merge_translated(layers[t - 1], g);
    }
  }
  return satisfied();
}

}  // namespace

std::optional<ZeroSumWitness> find_zero_sum_subsequence(const Sequence& s, std::size_t min_length,
                                                        std::size_t max_length) {
  const GroupSpec& group = s.group();
  min_length = std::max<std::size_t>(min_length, 1);
  max_length = std::min(max_length, s.length());
  if (min_length > max_length) return std::nullopt;

  const auto counts = s.counts();
  Residual residual{&counts, {}};
  for (const auto& c : counts) residual.remaining.push_back(c.second);

  if (!completable(group, residual, 0, 0, 0, min_length, max_length)) return std::nullopt;

  std::vector<Index> chosen;
  Index partial = 0;
  std::size_t cursor = 0;
  while (!(partial == 0 && chosen.size() >= min_length && !chosen.empty())) {
    bool advanced = false;
    for (std::size_t i = cursor; i < counts.size() && !advanced; ++i) {
      if (residual.remaining[i] == 0) continue;
      --residual.remaining[i];
      const Index next = group.add(partial, counts[i].first);
      if (completable(group, residual, i, next, chosen.size() + 1, min_length, max_length)) {
        chosen.push_back(counts[i].first);
        partial = next;
        cursor = i;
        advanced = true;
      } else {
        ++residual.remaining[i];
      }
    }
    if (!advanced) return std::nullopt;  // unreachable when the first check passed
  }
  return ZeroSumWitness{Sequence(group, std::move(chosen))};
}

}  // namespace zslab
