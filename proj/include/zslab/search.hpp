#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "zslab/sequence.hpp"

namespace zslab {

enum class Mode { fast, audit };

/// Budget and parallelism shared by every search and check.
struct SearchOptions {
  unsigned threads = 1;
  /// 0 disables the node cap.
  std::uint64_t node_cap = 0;
  /// 0 disables the time cap.
  std::chrono::milliseconds time_cap{0};
  /// audit disables every pruning rule that is not part of the definition.
  Mode mode = Mode::audit;
};

enum class Constraint {
  all,
  zero_sum_free,
  minimal_zero_sum,
  /// No zero-sum subsequence with length in [1, bound].
  no_short_zero_sum,
  /// No zero-sum subsequence with length >= bound.
  no_long_zero_sum,
};

struct EnumSpec {
  GroupSpec group;
  std::size_t length = 0;
  Constraint constraint = Constraint::all;
  std::size_t bound = 0;
  bool up_to_aut = false;
  /// Restrict terms to elements of exactly this order.
  std::optional<int> order_filter;
};

struct OrbitRep {
  Sequence representative;
  std::uint64_t orbit_size = 1;

  friend bool operator==(const OrbitRep&, const OrbitRep&) = default;
};

struct EnumResult {
  /// Sorted by representative.
  std::vector<OrbitRep> items;
  std::uint64_t nodes = 0;

  /// Number of sequences covered, counting each orbit with its size.
  std::uint64_t total_sequences() const;
};

/// Exhaustive DFS over non-decreasing index lists. When up_to_aut is set each
/// Aut(G)-orbit is emitted once through its lexicographically least member.
EnumResult enumerate(const EnumSpec& spec, const SearchOptions& options = {});

/// First sequence found matching spec (search order, not sorted order).
std::optional<Sequence> find_any(const EnumSpec& spec, const SearchOptions& options = {});

/// Sequence satisfies the constraint of spec (length and order filter included).
bool satisfies(const Sequence& s, const EnumSpec& spec);

/// min over alpha in Aut(G) of sorted(alpha(S)).
Sequence canonical_form(const Sequence& s);
std::uint64_t orbit_size(const Sequence& s);

struct DavenportResult {
  int value = 0;
  int closed_form = 0;
  std::vector<OrbitRep> witnesses;
  /// Number of minimal zero-sum orbits per length 1..value.
  std::vector<std::size_t> orbits_per_length;
  bool matches_closed_form() const { return value == closed_form; }
};

DavenportResult davenport(const GroupSpec& group, const SearchOptions& options = {});

struct EtaResult {
  int value = 0;
  int closed_form = 0;
  std::vector<OrbitRep> extremal_witnesses;
  bool matches_closed_form() const { return value == closed_form; }
};

EtaResult eta(const GroupSpec& group, const SearchOptions& options = {});

/// Every sequence of the given length, in increasing term-list order.
void for_each_sequence(const GroupSpec& group, std::size_t length,
                       const std::function<void(const Sequence&)>& visit);

/// Number of multisets of `length` elements drawn from `kinds` kinds.
std::uint64_t multiset_count(std::uint64_t kinds, std::uint64_t length);

}  // namespace zslab
