#pragma once

#include <cstddef>
#include <optional>

#include "zslab/sequence.hpp"

namespace zslab {

bool is_zero_sum(const Sequence& s);
/// 0 is not a sum of any nonempty subsequence.
bool is_zero_sum_free(const Sequence& s);
/// Nonempty, zero-sum, and every proper nonempty subsequence is zero-sum free.
bool is_minimal_zero_sum(const Sequence& s);

/// Minimal zero-sum test from a precomputed table of s: 0 occurs in
/// Sigma_k(s) only for k = |s|.
bool is_minimal_zero_sum(const SubsumTable& table);

struct ZeroSumWitness {
  Sequence subsequence;
};

/// Lexicographically least (on sorted term lists) zero-sum subsequence T | s
/// with min_length <= |T| <= max_length, if any.
std::optional<ZeroSumWitness> find_zero_sum_subsequence(const Sequence& s, std::size_t min_length,
                                                        std::size_t max_length);

}  // namespace zslab
