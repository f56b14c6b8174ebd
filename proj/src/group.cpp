#include "zslab/group.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace zslab {

namespace {

long long mod(long long x, long long n) {
  const long long r = x % n;
  return r < 0 ? r + n : r;
}

void require_same(const GroupSpec& x, const GroupSpec& y) {
  if (!(x == y)) {
    throw GroupMismatch("elements of " + x.to_string() + " and " + y.to_string() + " mixed");
  }
}

int parse_int(std::string_view text, std::size_t& pos, std::size_t offset) {
  while (pos < text.size() && text[pos] == ' ') ++pos;
  int value = 0;
  const char* begin = text.data() + pos;
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{}) throw ParseError("expected integer", offset + pos);
  pos = static_cast<std::size_t>(ptr - text.data());
  while (pos < text.size() && text[pos] == ' ') ++pos;
  return value;
}

}  // namespace

// GroupSpec ---------------------------------------------------------------

GroupSpec::GroupSpec(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 1 || n2 < 1) {
    throw DivisibilityError("group orders must be positive, got C" + std::to_string(n1) + "xC" +
                            std::to_string(n2));
  }
  if (n2 % n1 != 0) {
    throw DivisibilityError("n1 must divide n2, got C" + std::to_string(n1) + "xC" +
                            std::to_string(n2));
  }
  if (static_cast<long long>(n1) * n2 > kMaxGroupOrder) {
    throw CapExceeded("group order exceeds " + std::to_string(kMaxGroupOrder));
  }
}

GroupSpec make_group(int n1, int n2) { return GroupSpec(n1, n2); }

GroupElement GroupSpec::element(Index i) const { return GroupElement(*this, first(i), second(i)); }

GroupElement GroupSpec::element(long long a, long long b) const {
  return GroupElement(*this, static_cast<int>(mod(a, n1_)), static_cast<int>(mod(b, n2_)));
}

Index GroupSpec::smul(long long k, Index x) const noexcept {
  const long long a = mod(k % n1_ * first(x), n1_);
  const long long b = mod(k % n2_ * second(x), n2_);
  return index(static_cast<int>(a), static_cast<int>(b));
}

int GroupSpec::order_of(Index x) const noexcept {
  const int a = first(x), b = second(x);
  const int oa = n1_ / std::gcd(a, n1_);
  const int ob = n2_ / std::gcd(b, n2_);
  return std::lcm(oa, ob);
}

std::string GroupSpec::to_string() const {
  return "C" + std::to_string(n1_) + "xC" + std::to_string(n2_);
}

GroupSpec GroupSpec::parse(std::string_view text) {
  std::size_t pos = 0;
  auto expect_c = [&] {
    if (pos >= text.size() || (text[pos] != 'C' && text[pos] != 'c')) {
      throw ParseError("expected 'C' in group literal", pos);
    }
    ++pos;
  };
  expect_c();
  const int first = parse_int(text, pos, 0);
  if (pos == text.size()) return GroupSpec(1, first);
  if (text[pos] != 'x' && text[pos] != 'X') throw ParseError("expected 'x' in group literal", pos);
  ++pos;
  expect_c();
  const int second = parse_int(text, pos, 0);
  if (pos != text.size()) throw ParseError("trailing characters in group literal", pos);
  return GroupSpec(first, second);
}

// GroupElement --------------------------------------------------------------

GroupElement::GroupElement(const GroupSpec& group, int a, int b) : group_(group), a_(a), b_(b) {
  if (a < 0 || a >= group.n1() || b < 0 || b >= group.n2()) {
    throw DomainError("residue pair (" + std::to_string(a) + "," + std::to_string(b) +
                      ") out of range for " + group.to_string());
  }
}

std::string GroupElement::to_string() const {
  return "(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
}

GroupElement operator+(const GroupElement& x, const GroupElement& y) {
  require_same(x.group(), y.group());
  return x.group().element(x.group().add(x.index(), y.index()));
}

GroupElement operator-(const GroupElement& x) { return x.group().element(x.group().neg(x.index())); }

GroupElement operator-(const GroupElement& x, const GroupElement& y) { return x + (-y); }

GroupElement operator*(long long k, const GroupElement& x) {
  return x.group().element(x.group().smul(k, x.index()));
}

int order(const GroupElement& g) { return g.group().order_of(g.index()); }

GroupElement parse_element(const GroupSpec& group, std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == ' ') ++pos;
  if (pos >= text.size() || text[pos] != '(') throw ParseError("expected '('", pos);
  ++pos;
  const int a = parse_int(text, pos, 0);
  if (pos >= text.size() || text[pos] != ',') throw ParseError("expected ','", pos);
  ++pos;
  const int b = parse_int(text, pos, 0);
  if (pos >= text.size() || text[pos] != ')') throw ParseError("expected ')'", pos);
  if (a < 0 || a >= group.n1() || b < 0 || b >= group.n2()) {
    throw ParseError("residue out of range for " + group.to_string(), 0);
  }
  return GroupElement(group, a, b);
}

// Homomorphism --------------------------------------------------------------

Homomorphism::Homomorphism(GroupSpec domain, GroupElement image_e1, GroupElement image_e2)
    : domain_(domain), image_e1_(image_e1), image_e2_(image_e2) {
  require_same(image_e1.group(), image_e2.group());
  if (!(static_cast<long long>(domain.n1()) * image_e1).is_zero() ||
      !(static_cast<long long>(domain.n2()) * image_e2).is_zero()) {
    throw DomainError("images " + image_e1.to_string() + ", " + image_e2.to_string() +
                      " do not define a homomorphism on " + domain.to_string());
  }
}

Homomorphism Homomorphism::identity(const GroupSpec& group) {
  return Homomorphism(group, group.element(1 % group.n1(), 0), group.element(0, 1 % group.n2()));
}

Homomorphism Homomorphism::multiplication(const GroupSpec& group, int m) {
  return Homomorphism(group, group.element(m, 0), group.element(0, m));
}

Index Homomorphism::apply(Index x) const noexcept {
  const GroupSpec& cod = codomain();
  const Index p = cod.smul(domain_.first(x), image_e1_.index());
  const Index q = cod.smul(domain_.second(x), image_e2_.index());
  return cod.add(p, q);
}

GroupElement Homomorphism::operator()(const GroupElement& x) const {
  require_same(x.group(), domain_);
  return codomain().element(apply(x.index()));
}

bool Homomorphism::is_bijective() const {
  if (!(codomain() == domain_)) return false;
  std::vector<bool> seen(domain_.order(), false);
  for (Index i = 0; i < domain_.order(); ++i) {
    const Index j = apply(i);
    if (seen[j]) return false;
    seen[j] = true;
  }
  return true;
}

Homomorphism Homomorphism::compose(const Homomorphism& other) const {
  require_same(other.codomain(), domain_);
  return Homomorphism(other.domain_, (*this)(other.image_e1_), (*this)(other.image_e2_));
}

// Automorphisms -------------------------------------------------------------

namespace {

std::vector<AutMap> compute_automorphisms(const GroupSpec& g) {
  std::vector<Index> order1, order2;
  for (Index i = 0; i < g.order(); ++i) {
    const int o = g.order_of(i);
    if (o == g.n1()) order1.push_back(i);
    if (o == g.n2()) order2.push_back(i);
  }
  std::vector<AutMap> maps;
  std::vector<int> mark(g.order(), -1);
  int stamp = 0;
  for (Index x : order1) {
    ++stamp;
    Index p = 0;
    for (int k = 0; k < g.n1(); ++k, p = g.add(p, x)) mark[p] = stamp;
    for (Index y : order2) {
      // <x> and <y> meet trivially and have orders n1, n2, so x, y span G.
      bool trivial = true;
      Index q = y;
      for (int k = 1; k < g.n2(); ++k, q = g.add(q, y)) {
        if (mark[q] == stamp) {
          trivial = false;
          break;
        }
      }
      if (trivial) maps.emplace_back(g, g.element(x), g.element(y));
    }
  }
  return maps;
}

}  // namespace

const AutGroup& automorphism_group(const GroupSpec& group, std::uint32_t cap) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<AutGroup>> cache;
  if (group.order() > cap) {
    throw CapExceeded("|G| = " + std::to_string(group.order()) + " exceeds automorphism cap " +
                      std::to_string(cap));
  }
  const auto key = std::make_pair(group.n1(), group.n2());
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto result = std::make_unique<AutGroup>();
  result->group = group;
  result->maps = compute_automorphisms(group);
  result->permutations.reserve(result->maps.size());
  result->orbit_min.resize(group.order());
  std::iota(result->orbit_min.begin(), result->orbit_min.end(), Index{0});
  for (const auto& alpha : result->maps) {
    std::vector<Index> perm(group.order());
    for (Index i = 0; i < group.order(); ++i) {
      perm[i] = alpha.apply(i);
      result->orbit_min[i] = std::min(result->orbit_min[i], perm[i]);
    }
    result->permutations.push_back(std::move(perm));
  }
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(result));
  return *it->second;
}

std::vector<AutMap> automorphisms(const GroupSpec& group, std::uint32_t cap) {
  return automorphism_group(group, cap).maps;
}

// Independence and bases --------------------------------------------------

bool is_independent(std::span<const GroupElement> tuple) {
  if (tuple.empty()) return false;
  const GroupSpec& g = tuple.front().group();
  std::vector<int> orders;
  for (const auto& e : tuple) {
    require_same(e.group(), g);
    if (e.is_zero()) return false;
    orders.push_back(order(e));
  }
  // Every relation sum m_i e_i = 0 with 0 <= m_i < ord(e_i) must be trivial.
  std::vector<int> coeff(tuple.size(), 0);
  while (true) {
    std::size_t pos = 0;
    while (pos < coeff.size() && ++coeff[pos] == orders[pos]) coeff[pos++] = 0;
    if (pos == coeff.size()) return true;
    Index total = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      total = g.add(total, g.smul(coeff[i], tuple[i].index()));
    }
    if (total == 0) return false;
  }
}

bool is_basis(const GroupElement& g, const GroupElement& h) {
  return is_basis_of(ElementSet::full(g.group()), g, h);
}

bool is_basis_of(const ElementSet& subgroup, const GroupElement& g, const GroupElement& h) {
  require_same(g.group(), h.group());
  require_same(g.group(), subgroup.group());
  if (!subgroup.contains(g) || !subgroup.contains(h)) return false;
  if (static_cast<std::size_t>(order(g)) * static_cast<std::size_t>(order(h)) != subgroup.size()) {
    return false;
  }
  const GroupElement pair[] = {g, h};
  return is_independent(pair);
}

// ElementSet ----------------------------------------------------------------

ElementSet::ElementSet(const GroupSpec& group)
    : group_(group), words_((group.order() + 63) / 64, 0) {}

ElementSet ElementSet::full(const GroupSpec& group) {
  ElementSet s(group);
  for (Index i = 0; i < group.order(); ++i) s.insert(i);
  return s;
}

ElementSet ElementSet::singleton(const GroupSpec& group, Index x) {
  ElementSet s(group);
  s.insert(x);
  return s;
}

ElementSet ElementSet::of(const GroupSpec& group, std::span<const GroupElement> elements) {
  ElementSet s(group);
  for (const auto& e : elements) s.insert(e);
  return s;
}

bool ElementSet::contains(const GroupElement& g) const {
  require_same(g.group(), group_);
  return contains(g.index());
}

void ElementSet::insert(const GroupElement& g) {
  require_same(g.group(), group_);
  insert(g.index());
}

void ElementSet::clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

std::size_t ElementSet::size() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
  return n;
}

bool ElementSet::empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

ElementSet ElementSet::translated(Index g) const {
  ElementSet out(group_);
  out.merge_translated(*this, g);
  return out;
}

void ElementSet::merge_translated(const ElementSet& other, Index g) {
  other.for_each([&](Index x) { insert(group_.add(x, g)); });
}

ElementSet& ElementSet::operator|=(const ElementSet& other) {
  require_same(group_, other.group_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

ElementSet& ElementSet::operator&=(const ElementSet& other) {
  require_same(group_, other.group_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

std::vector<Index> ElementSet::indices() const {
  std::vector<Index> out;
  for_each([&](Index x) { out.push_back(x); });
  return out;
}

std::vector<GroupElement> ElementSet::elements() const {
  std::vector<GroupElement> out;
  for_each([&](Index x) { out.push_back(group_.element(x)); });
  return out;
}

std::string ElementSet::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for_each([&](Index x) {
    if (!first) os << ' ';
    first = false;
    os << group_.element(x).to_string();
  });
  os << '}';
  return os.str();
}

ElementSet sumset(const ElementSet& a, const ElementSet& b) {
  require_same(a.group(), b.group());
  if (a.empty() || b.empty()) throw EmptySet("sumset of an empty set");
  ElementSet out(a.group());
  b.for_each([&](Index y) { out.merge_translated(a, y); });
  return out;
}

ElementSet difference(const ElementSet& a, const ElementSet& b) {
  require_same(a.group(), b.group());
  if (a.empty() || b.empty()) throw EmptySet("difference of an empty set");
  ElementSet out(a.group());
  b.for_each([&](Index y) { out.merge_translated(a, a.group().neg(y)); });
  return out;
}

ElementSet stabilizer(const ElementSet& a) {
  if (a.empty()) throw EmptySet("stabilizer of an empty set");
  const GroupSpec& g = a.group();
  ElementSet out(g);
  for (Index x = 0; x < g.order(); ++x) {
    if (a.translated(x) == a) out.insert(x);
  }
  return out;
}

bool is_periodic(const ElementSet& a) { return stabilizer(a).size() > 1; }

ElementSet cyclic_subgroup(const GroupElement& g) {
  const GroupSpec& group = g.group();
  ElementSet out(group);
  Index p = 0;
  do {
    out.insert(p);
    p = group.add(p, g.index());
  } while (p != 0);
  return out;
}

ElementSet generated_subgroup(const GroupElement& g, const GroupElement& h) {
  require_same(g.group(), h.group());
  return sumset(cyclic_subgroup(g), cyclic_subgroup(h));
}

}  // namespace zslab
