#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zslab/group.hpp"

namespace zslab {

/// A finite multiset of group elements, stored as its non-decreasing list of
/// element indices. The empty sequence is the unit of the free monoid.
class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(const GroupSpec& group) : group_(group) {}
  Sequence(const GroupSpec& group, std::vector<Index> terms);
  Sequence(const GroupSpec& group, std::span<const std::pair<GroupElement, int>> counts);

  static Sequence of(std::initializer_list<GroupElement> terms);
  static Sequence power(const GroupElement& g, int k);

  const GroupSpec& group() const noexcept { return group_; }
  std::span<const Index> terms() const noexcept { return terms_; }
  std::size_t length() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  int multiplicity(Index x) const noexcept;
  int multiplicity(const GroupElement& g) const;
  int height() const noexcept;
  ElementSet support() const;
  Index sum_index() const noexcept;
  GroupElement sum() const { return group_.element(sum_index()); }

  /// (element index, multiplicity) pairs in increasing index order.
  std::vector<std::pair<Index, int>> counts() const;

  /// Product in the free monoid.
  Sequence operator*(const Sequence& other) const;
  /// other^{-1} * this; other must divide this.
  Sequence without(const Sequence& other) const;
  Sequence without(Index x) const;
  Sequence with(Index x) const;

  std::string to_string() const;

  friend bool operator==(const Sequence& x, const Sequence& y) {
    return x.group_ == y.group_ && x.terms_ == y.terms_;
  }
  /// Lexicographic on the sorted term lists.
  friend std::strong_ordering operator<=>(const Sequence& x, const Sequence& y) {
    return x.terms_ <=> y.terms_;
  }

 private:
  GroupSpec group_;
  std::vector<Index> terms_;
};

struct SequenceStats {
  std::size_t length = 0;
  int height = 0;
  ElementSet support;
  GroupElement sum;
};

SequenceStats sequence_stats(const Sequence& s);

bool divides(const Sequence& divisor, const Sequence& s);
Sequence seq_gcd(const Sequence& s, const Sequence& t);
Sequence map_sequence(const Homomorphism& h, const Sequence& s);
/// Applies an index permutation (e.g. from AutGroup::permutations).
Sequence permute(const Sequence& s, std::span<const Index> permutation);

/// Grammar: term := "(" int "," int ")" ["^" int]; sequence := term*.
Sequence parse_sequence(const GroupSpec& group, std::string_view text);
std::string format_sequence(const Sequence& s);

inline constexpr std::size_t kDefaultSubsumCap = 4096;

/// Layers Sigma_k(S) for k = 0..|S|.
class SubsumTable {
 public:
  explicit SubsumTable(std::vector<ElementSet> layers) : layers_(std::move(layers)) {}

  std::size_t max_k() const noexcept { return layers_.size() - 1; }
  const ElementSet& layer(std::size_t k) const { return layers_.at(k); }
  const std::vector<ElementSet>& layers() const noexcept { return layers_; }

  /// Union of layers lo..hi, clamped to 1..|S| for lo and to |S| for hi.
  ElementSet range(std::size_t lo, std::size_t hi) const;
  ElementSet at_most(std::size_t k) const { return range(1, k); }
  ElementSet at_least(std::size_t k) const { return range(k, max_k()); }
  /// Sigma(S).
  ElementSet all() const { return range(1, max_k()); }

  /// Smallest k in [lo, hi] with x in Sigma_k, or -1.
  long first_layer_containing(Index x, std::size_t lo, std::size_t hi) const;

 private:
  std::vector<ElementSet> layers_;
};

SubsumTable subsum_table(const Sequence& s, std::size_t cap = kDefaultSubsumCap);

}  // namespace zslab
