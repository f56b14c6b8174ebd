#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zslab/errors.hpp"

namespace zslab {

/// Position of an element in the dense numbering a*n2 + b of C_{n1} + C_{n2}.
using Index = std::uint32_t;

/// Hard upper bound on |G| for anything that allocates one bit per element.
inline constexpr std::uint32_t kMaxGroupOrder = 1u << 16;

class GroupElement;

/// The group C_{n1} + C_{n2} with n1 | n2, written additively. Cyclic groups
/// are C_1 + C_n.
class GroupSpec {
 public:
  GroupSpec() = default;
  GroupSpec(int n1, int n2);

  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  int exponent() const noexcept { return n2_; }
  int rank() const noexcept { return (n1_ > 1 ? 1 : 0) + (n2_ > 1 ? 1 : 0); }
  std::uint32_t order() const noexcept {
    return static_cast<std::uint32_t>(n1_) * static_cast<std::uint32_t>(n2_);
  }

  Index index(int a, int b) const noexcept {
    return static_cast<Index>(a) * static_cast<Index>(n2_) + static_cast<Index>(b);
  }
  int first(Index i) const noexcept { return static_cast<int>(i / static_cast<Index>(n2_)); }
  int second(Index i) const noexcept { return static_cast<int>(i % static_cast<Index>(n2_)); }

  GroupElement element(Index i) const;
  GroupElement element(long long a, long long b) const;

  Index add(Index x, Index y) const noexcept {
    int a = first(x) + first(y);
    int b = second(x) + second(y);
    if (a >= n1_) a -= n1_;
    if (b >= n2_) b -= n2_;
    return index(a, b);
  }
  Index neg(Index x) const noexcept {
    const int a = first(x), b = second(x);
    return index(a == 0 ? 0 : n1_ - a, b == 0 ? 0 : n2_ - b);
  }
  Index sub(Index x, Index y) const noexcept { return add(x, neg(y)); }
  Index smul(long long k, Index x) const noexcept;
  int order_of(Index x) const noexcept;

  /// "C{n1}xC{n2}"; a bare "C{n}" is accepted by parse() as C1xC{n}.
  std::string to_string() const;
  static GroupSpec parse(std::string_view text);

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  int n1_ = 1;
  int n2_ = 1;
};

GroupSpec make_group(int n1, int n2);

/// An element a*e1 + b*e2 together with the group it lives in.
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(const GroupSpec& group, int a, int b);

  const GroupSpec& group() const noexcept { return group_; }
  int a() const noexcept { return a_; }
  int b() const noexcept { return b_; }
  Index index() const noexcept { return group_.index(a_, b_); }
  bool is_zero() const noexcept { return a_ == 0 && b_ == 0; }

  std::string to_string() const;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  GroupSpec group_;
  int a_ = 0;
  int b_ = 0;
};

GroupElement operator+(const GroupElement& x, const GroupElement& y);
GroupElement operator-(const GroupElement& x);
GroupElement operator-(const GroupElement& x, const GroupElement& y);
GroupElement operator*(long long k, const GroupElement& x);

int order(const GroupElement& g);

/// Parses "(a,b)"; residues must already be reduced.
GroupElement parse_element(const GroupSpec& group, std::string_view text);

/// A homomorphism out of C_{n1} + C_{n2}, fixed by the images of e1 and e2.
class Homomorphism {
 public:
  Homomorphism(GroupSpec domain, GroupElement image_e1, GroupElement image_e2);

  static Homomorphism identity(const GroupSpec& group);
  static Homomorphism multiplication(const GroupSpec& group, int m);

  const GroupSpec& domain() const noexcept { return domain_; }
  const GroupSpec& codomain() const noexcept { return image_e1_.group(); }
  const GroupElement& image_e1() const noexcept { return image_e1_; }
  const GroupElement& image_e2() const noexcept { return image_e2_; }

  Index apply(Index x) const noexcept;
  GroupElement operator()(const GroupElement& x) const;

  bool is_bijective() const;

  /// (this o other): first other, then this.
  Homomorphism compose(const Homomorphism& other) const;

  friend bool operator==(const Homomorphism& x, const Homomorphism& y) {
    return x.domain_ == y.domain_ && x.image_e1_ == y.image_e1_ && x.image_e2_ == y.image_e2_;
  }

 private:
  GroupSpec domain_;
  GroupElement image_e1_;
  GroupElement image_e2_;
};

using AutMap = Homomorphism;

/// Aut(G) together with the permutation each map induces on indices.
struct AutGroup {
  GroupSpec group;
  std::vector<AutMap> maps;
  std::vector<std::vector<Index>> permutations;
  /// Smallest index in the Aut-orbit of each element.
  std::vector<Index> orbit_min;
};

inline constexpr std::uint32_t kDefaultAutCap = 10'000;

/// Cached per group; safe to call from several threads.
const AutGroup& automorphism_group(const GroupSpec& group, std::uint32_t cap = kDefaultAutCap);
std::vector<AutMap> automorphisms(const GroupSpec& group, std::uint32_t cap = kDefaultAutCap);

bool is_independent(std::span<const GroupElement> tuple);
bool is_basis(const GroupElement& g, const GroupElement& h);

/// Fixed-width indicator over the elements of a group.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(const GroupSpec& group);

  static ElementSet full(const GroupSpec& group);
  static ElementSet singleton(const GroupSpec& group, Index x);
  static ElementSet of(const GroupSpec& group, std::span<const GroupElement> elements);

  const GroupSpec& group() const noexcept { return group_; }

  bool contains(Index x) const noexcept { return (words_[x >> 6] >> (x & 63)) & 1u; }
  bool contains(const GroupElement& g) const;
  void insert(Index x) noexcept { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void insert(const GroupElement& g);
  void erase(Index x) noexcept { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }
  void clear() noexcept;

  std::size_t size() const noexcept;
  bool empty() const noexcept;

  /// A + g.
  ElementSet translated(Index g) const;
  /// Adds (other + g) into this set.
  void merge_translated(const ElementSet& other, Index g);

  ElementSet& operator|=(const ElementSet& other);
  ElementSet& operator&=(const ElementSet& other);
  friend ElementSet operator|(ElementSet x, const ElementSet& y) { return x |= y; }
  friend ElementSet operator&(ElementSet x, const ElementSet& y) { return x &= y; }
  friend bool operator==(const ElementSet&, const ElementSet&) = default;

  std::vector<Index> indices() const;
  std::vector<GroupElement> elements() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = __builtin_ctzll(bits);
        f(static_cast<Index>(w * 64 + static_cast<std::size_t>(bit)));
        bits &= bits - 1;
      }
    }
  }

  std::string to_string() const;

 private:
  GroupSpec group_;
  std::vector<std::uint64_t> words_;
};

ElementSet sumset(const ElementSet& a, const ElementSet& b);
ElementSet difference(const ElementSet& a, const ElementSet& b);
ElementSet stabilizer(const ElementSet& a);
bool is_periodic(const ElementSet& a);

/// The cyclic subgroup <g>.
ElementSet cyclic_subgroup(const GroupElement& g);
/// The subgroup generated by g and h.
ElementSet generated_subgroup(const GroupElement& g, const GroupElement& h);

/// (g, h) is a basis of the subgroup H: independent and H = <g> + <h>.
bool is_basis_of(const ElementSet& subgroup, const GroupElement& g, const GroupElement& h);

}  // namespace zslab
