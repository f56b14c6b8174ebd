#include "zslab/sequence.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace zslab {

namespace {

void require_same(const GroupSpec& x, const GroupSpec& y) {
  if (!(x == y)) {
    throw GroupMismatch("sequences over " + x.to_string() + " and " + y.to_string() + " mixed");
  }
}

}  // namespace

Sequence::Sequence(const GroupSpec& group, std::vector<Index> terms)
    : group_(group), terms_(std::move(terms)) {
  for (Index x : terms_) {
    if (x >= group_.order()) throw DomainError("element index out of range");
  }
  std::sort(terms_.begin(), terms_.end());
}

Sequence::Sequence(const GroupSpec& group, std::span<const std::pair<GroupElement, int>> counts)
    : group_(group) {
  for (const auto& [g, k] : counts) {
    require_same(g.group(), group);
    if (k < 0) throw DomainError("negative multiplicity");
    terms_.insert(terms_.end(), static_cast<std::size_t>(k), g.index());
  }
  std::sort(terms_.begin(), terms_.end());
}

Sequence Sequence::of(std::initializer_list<GroupElement> terms) {
  if (terms.size() == 0) return Sequence();
  const GroupSpec group = terms.begin()->group();
  std::vector<Index> idx;
  for (const auto& g : terms) {
    require_same(g.group(), group);
    idx.push_back(g.index());
  }
  return Sequence(group, std::move(idx));
}

Sequence Sequence::power(const GroupElement& g, int k) {
  return Sequence(g.group(), std::vector<Index>(static_cast<std::size_t>(k), g.index()));
}

int Sequence::multiplicity(Index x) const noexcept {
  auto [lo, hi] = std::equal_range(terms_.begin(), terms_.end(), x);
  return static_cast<int>(hi - lo);
}

int Sequence::multiplicity(const GroupElement& g) const {
  require_same(g.group(), group_);
  return multiplicity(g.index());
}

int Sequence::height() const noexcept {
  int best = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    std::size_t j = i;
    while (j < terms_.size() && terms_[j] == terms_[i]) ++j;
    best = std::max(best, static_cast<int>(j - i));
    i = j;
  }
  return best;
}

ElementSet Sequence::support() const {
  ElementSet s(group_);
  for (Index x : terms_) s.insert(x);
  return s;
}

Index Sequence::sum_index() const noexcept {
  Index total = 0;
  for (Index x : terms_) total = group_.add(total, x);
  return total;
}

std::vector<std::pair<Index, int>> Sequence::counts() const {
  std::vector<std::pair<Index, int>> out;
  for (Index x : terms_) {
    if (!out.empty() && out.back().first == x) {
      ++out.back().second;
    } else {
      out.emplace_back(x, 1);
    }
  }
  return out;
}

Sequence Sequence::operator*(const Sequence& other) const {
  if (terms_.empty()) return Sequence(other.group_, other.terms_);
  if (!other.terms_.empty()) require_same(group_, other.group_);
  std::vector<Index> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  std::merge(terms_.begin(), terms_.end(), other.terms_.begin(), other.terms_.end(),
             std::back_inserter(merged));
  Sequence out(group_);
  out.terms_ = std::move(merged);
  return out;
}

Sequence Sequence::without(const Sequence& other) const {
  if (!divides(other, *this)) {
    throw DomainError(other.to_string() + " does not divide " + to_string());
  }
  std::vector<Index> rest;
  std::set_difference(terms_.begin(), terms_.end(), other.terms_.begin(), other.terms_.end(),
                      std::back_inserter(rest));
  Sequence out(group_);
  out.terms_ = std::move(rest);
  return out;
}

Sequence Sequence::without(Index x) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), x);
  if (it == terms_.end() || *it != x) throw DomainError("term not contained in sequence");
  Sequence out = *this;
  out.terms_.erase(out.terms_.begin() + (it - terms_.begin()));
  return out;
}

Sequence Sequence::with(Index x) const {
  Sequence out = *this;
  out.terms_.insert(std::upper_bound(out.terms_.begin(), out.terms_.end(), x), x);
  return out;
}

std::string Sequence::to_string() const { return format_sequence(*this); }

SequenceStats sequence_stats(const Sequence& s) {
  return SequenceStats{s.length(), s.height(), s.support(), s.sum()};
}

bool divides(const Sequence& divisor, const Sequence& s) {
  if (divisor.empty()) return true;
  require_same(divisor.group(), s.group());
  return std::includes(s.terms().begin(), s.terms().end(), divisor.terms().begin(),
                       divisor.terms().end());
}

Sequence seq_gcd(const Sequence& s, const Sequence& t) {
  require_same(s.group(), t.group());
  std::vector<Index> common;
  std::set_intersection(s.terms().begin(), s.terms().end(), t.terms().begin(), t.terms().end(),
                        std::back_inserter(common));
  return Sequence(s.group(), std::move(common));
}

Sequence map_sequence(const Homomorphism& h, const Sequence& s) {
  if (!s.empty()) require_same(h.domain(), s.group());
  std::vector<Index> image;
  image.reserve(s.length());
  for (Index x : s.terms()) image.push_back(h.apply(x));
  return Sequence(h.codomain(), std::move(image));
}

Sequence permute(const Sequence& s, std::span<const Index> permutation) {
  std::vector<Index> image;
  image.reserve(s.length());
  for (Index x : s.terms()) image.push_back(permutation[x]);
  return Sequence(s.group(), std::move(image));
}

Sequence parse_sequence(const GroupSpec& group, std::string_view text) {
  std::vector<Index> terms;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n')) {
      ++pos;
    }
  };
  auto read_int = [&]() -> long long {
    skip_ws();
    const std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    long long value = 0;
    const char* b = text.data() + start + (start < text.size() && text[start] == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(b, text.data() + pos, value);
    if (ec != std::errc{} || ptr != text.data() + pos) throw ParseError("expected integer", start);
    skip_ws();
    return value;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) {
      throw ParseError(std::string("expected '") + c + "'", pos);
    }
    ++pos;
  };
  skip_ws();
  while (pos < text.size()) {
    const std::size_t term_start = pos;
    expect('(');
    const long long a = read_int();
    expect(',');
    const long long b = read_int();
    expect(')');
    if (a < 0 || a >= group.n1() || b < 0 || b >= group.n2()) {
      throw ParseError("residue out of range for " + group.to_string(), term_start);
    }
    long long k = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      const std::size_t exp_start = pos;
      k = read_int();
      if (k < 0) throw ParseError("negative exponent", exp_start);
      if (k > 1'000'000) throw ParseError("exponent too large", exp_start);
    }
    terms.insert(terms.end(), static_cast<std::size_t>(k), group.index(static_cast<int>(a),
                                                                        static_cast<int>(b)));
    skip_ws();
  }
  return Sequence(group, std::move(terms));
}

std::string format_sequence(const Sequence& s) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [x, k] : s.counts()) {
    if (!first) os << ' ';
    first = false;
    os << s.group().element(x).to_string();
    if (k > 1) os << '^' << k;
  }
  return os.str();
}

// SubsumTable ---------------------------------------------------------------

ElementSet SubsumTable::range(std::size_t lo, std::size_t hi) const {
  ElementSet out(layers_.front().group());
  lo = std::max<std::size_t>(lo, 1);
  hi = std::min(hi, max_k());
  for (std::size_t k = lo; k <= hi; ++k) out |= layers_[k];
  return out;
}

long SubsumTable::first_layer_containing(Index x, std::size_t lo, std::size_t hi) const {
  hi = std::min(hi, max_k());
  for (std::size_t k = lo; k <= hi; ++k) {
    if (layers_[k].contains(x)) return static_cast<long>(k);
  }
  return -1;
}

SubsumTable subsum_table(const Sequence& s, std::size_t cap) {
  if (s.length() > cap) {
    throw CapExceeded("sequence length " + std::to_string(s.length()) + " exceeds subsum cap " +
                      std::to_string(cap));
  }
  const std::size_t n = s.length();
  std::vector<ElementSet> layers(n + 1, ElementSet(s.group()));
  layers[0].insert(0);
  std::size_t processed = 0;
  for (Index g : s.terms()) {
    ++processed;
    for (std::size_t k = processed; k >= 1; --k) layers[k].merge_translated(layers[k - 1], g);
  }
  return SubsumTable(std::move(layers));
}

}  // namespace zslab
