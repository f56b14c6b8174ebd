#include "zslab/search.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>

#include "zslab/zerosum.hpp"

namespace zslab {

std::uint64_t EnumResult::total_sequences() const {
  std::uint64_t total = 0;
  for (const auto& item : items) total += item.orbit_size;
  return total;
}

namespace {

using Clock = std::chrono::steady_clock;

// Lexicographic test of terms against every automorphic image. Returns the
// number of automorphisms fixing terms, or 0 when some image is smaller.
std::uint64_t canonical_stabilizer(std::span<const Index> terms, const AutGroup& aut,
                                   std::vector<Index>& scratch) {
  std::uint64_t fixing = 0;
  scratch.resize(terms.size());
  for (const auto& perm : aut.permutations) {
    for (std::size_t i = 0; i < terms.size(); ++i) scratch[i] = perm[terms[i]];
    std::sort(scratch.begin(), scratch.end());
    const auto cmp = std::lexicographical_compare_three_way(scratch.begin(), scratch.end(),
                                                            terms.begin(), terms.end());
    if (cmp < 0) return 0;
    if (cmp == 0) ++fixing;
  }
  return fixing;
}

struct SharedState {
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> abort{false};
  std::atomic<bool> cap_hit{false};
  std::atomic<bool> time_hit{false};
  std::atomic<std::size_t> next_shard{0};
  Clock::time_point start = Clock::now();
};

class Searcher {
 public:
  Searcher(const EnumSpec& spec, const SearchOptions& options, bool stop_at_first)
      : spec_(spec), options_(options), group_(spec.group), stop_at_first_(stop_at_first) {
    words_ = (group_.order() + 63) / 64;
    for (Index i = 0; i < group_.order(); ++i) {
      if (!spec.order_filter || group_.order_of(i) == *spec.order_filter) allowed_.push_back(i);
    }
    allowed_mask_.assign(group_.order(), false);
    for (Index i : allowed_) allowed_mask_[i] = true;
    if (spec.up_to_aut) aut_ = &automorphism_group(group_);
    prune_ = spec.up_to_aut && options.mode == Mode::fast;

    switch (spec.constraint) {
      case Constraint::all:
        layers_ = 0;
        break;
      case Constraint::zero_sum_free:
      case Constraint::minimal_zero_sum:
        layers_ = 1;  // union of all subsums
        break;
      case Constraint::no_short_zero_sum:
        layers_ = std::max<std::size_t>(1, std::min(spec.bound, spec.length));
        break;
      case Constraint::no_long_zero_sum:
        layers_ = std::max<std::size_t>(1, spec.length);
        break;
    }
    // Depths at which a free choice is made; minimal zero-sum fixes the last term.
    free_depth_ = spec.constraint == Constraint::minimal_zero_sum && spec.length > 0
                      ? spec.length - 1
                      : spec.length;
  }

  EnumResult run() {
    EnumResult result;
    if (spec_.constraint == Constraint::minimal_zero_sum && spec_.length == 0) return result;

    std::vector<std::pair<int, int>> shards;
    if (free_depth_ >= 2) {
      for (std::size_t i = 0; i < allowed_.size(); ++i) {
        for (std::size_t j = i; j < allowed_.size(); ++j) {
          shards.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
      }
    } else {
      shards.emplace_back(-1, -1);
    }

    SharedState shared;
    std::vector<std::vector<OrbitRep>> per_worker;
    const unsigned threads = std::max(1u, std::min<unsigned>(options_.threads,
                                                              static_cast<unsigned>(shards.size())));
    per_worker.resize(threads);
    std::vector<std::uint64_t> worker_nodes(threads, 0);
    auto work = [&](unsigned w) {
      Worker worker(*this, shared, per_worker[w]);
      while (!shared.abort.load(std::memory_order_relaxed)) {
        const std::size_t s = shared.next_shard.fetch_add(1);
        if (s >= shards.size()) break;
        worker.run_shard(shards[s]);
      }
      worker.flush();
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }

    for (auto& part : per_worker) {
      for (auto& item : part) result.items.push_back(std::move(item));
    }
    std::sort(result.items.begin(), result.items.end(),
              [](const OrbitRep& x, const OrbitRep& y) { return x.representative < y.representative; });
    result.nodes = shared.nodes.load();
    // Workers test the cap in batches; settle the remainder here.
    if (options_.node_cap != 0 && result.nodes > options_.node_cap) shared.cap_hit = true;
    if (shared.cap_hit) {
      throw CapExceeded("node cap of " + std::to_string(options_.node_cap) + " exceeded",
                        result.nodes, result.items.size());
    }
    if (shared.time_hit) {
      throw CapExceeded("time cap of " + std::to_string(options_.time_cap.count()) +
                            " ms exceeded",
                        result.nodes, result.items.size());
    }
    return result;
  }

 private:
  class Worker {
   public:
    Worker(const Searcher& s, SharedState& shared, std::vector<OrbitRep>& out)
        : s_(s), shared_(shared), out_(out) {
      const std::size_t depth_count = s.spec_.length + 2;
      state_.assign(depth_count * std::max<std::size_t>(1, s.layers_) * s.words_, 0);
      prefix_.reserve(s.spec_.length);
      sums_.assign(depth_count, 0);
    }

    void run_shard(std::pair<int, int> shard) {
      shard_ = shard;
      prefix_.clear();
      sums_[0] = 0;
      std::fill(layer_ptr(0), layer_ptr(0) + s_.layer_block(), 0);
      dfs(0, 0);
    }

    void flush() {
      shared_.nodes.fetch_add(local_nodes_);
      local_nodes_ = 0;
    }

   private:
    std::uint64_t* layer_ptr(std::size_t depth) {
      return state_.data() + depth * s_.layer_block();
    }

    bool tick() {
      if (++local_nodes_ < 1024) return !shared_.abort.load(std::memory_order_relaxed);
      const std::uint64_t total = shared_.nodes.fetch_add(local_nodes_) + local_nodes_;
      local_nodes_ = 0;
      if (s_.options_.node_cap != 0 && total > s_.options_.node_cap) {
        shared_.cap_hit = true;
        shared_.abort = true;
      }
      if (s_.options_.time_cap.count() > 0 &&
          Clock::now() - shared_.start > s_.options_.time_cap) {
        shared_.time_hit = true;
        shared_.abort = true;
      }
      return !shared_.abort.load(std::memory_order_relaxed);
    }

    // Builds the subsum state at depth+1 from depth by appending g and reports
    // whether the extended prefix still satisfies the hereditary constraint.
    bool extend_state(std::size_t depth, Index g) {
      const std::size_t layers = s_.layers_;
      if (layers == 0) return true;
      const GroupSpec& grp = s_.group_;
      const std::size_t words = s_.words_;
      std::uint64_t* src = layer_ptr(depth);
      std::uint64_t* dst = layer_ptr(depth + 1);
      std::copy(src, src + layers * words, dst);
      auto set_bit = [](std::uint64_t* layer, Index x) { layer[x >> 6] |= std::uint64_t{1} << (x & 63); };
      auto for_bits = [&](const std::uint64_t* layer, auto&& f) {
        for (std::size_t w = 0; w < words; ++w) {
          std::uint64_t bits = layer[w];
          while (bits) {
            const int b = __builtin_ctzll(bits);
            f(static_cast<Index>(w * 64 + static_cast<std::size_t>(b)));
            bits &= bits - 1;
          }
        }
      };
      if (s_.spec_.constraint == Constraint::zero_sum_free ||
          s_.spec_.constraint == Constraint::minimal_zero_sum) {
        for_bits(src, [&](Index x) { set_bit(dst, grp.add(x, g)); });
        set_bit(dst, g);
        return (dst[0] & 1u) == 0;
      }
      // Layer k (1-based) lives at offset (k-1)*words.
      for (std::size_t k = std::min(layers, depth + 1); k >= 2; --k) {
        for_bits(src + (k - 2) * words, [&](Index x) { set_bit(dst + (k - 1) * words, grp.add(x, g)); });
      }
      set_bit(dst, g);
      if (s_.spec_.constraint == Constraint::no_short_zero_sum) {
        for (std::size_t k = 1; k <= layers; ++k) {
          if (dst[(k - 1) * words] & 1u) return false;
        }
        return true;
      }
      // no_long_zero_sum
      for (std::size_t k = std::max<std::size_t>(1, s_.spec_.bound); k <= layers; ++k) {
        if (dst[(k - 1) * words] & 1u) return false;
      }
      return true;
    }

    bool passes_prune(std::size_t depth, Index g) const {
      if (!s_.prune_) return true;
      const auto& orbit_min = s_.aut_->orbit_min;
      if (depth == 0) return orbit_min[g] == g;
      return orbit_min[g] >= prefix_.front();
    }

    void emit() {
      if (s_.aut_ != nullptr) {
        const std::uint64_t fixing = canonical_stabilizer(prefix_, *s_.aut_, scratch_);
        if (fixing == 0) return;
        out_.push_back(OrbitRep{Sequence(s_.group_, prefix_),
                                s_.aut_->permutations.size() / fixing});
      } else {
        out_.push_back(OrbitRep{Sequence(s_.group_, prefix_), 1});
      }
      if (s_.stop_at_first_) shared_.abort = true;
    }

    void dfs(std::size_t depth, std::size_t start) {
      if (!tick()) return;
      const EnumSpec& spec = s_.spec_;
      if (depth == s_.free_depth_) {
        if (spec.constraint == Constraint::minimal_zero_sum) {
          const Index last = s_.group_.neg(sums_[depth]);
          if (!prefix_.empty() && last < prefix_.back()) return;
          if (!s_.allowed_mask_[last]) return;
          if (!passes_prune(depth, last)) return;
          prefix_.push_back(last);
          emit();
          prefix_.pop_back();
        } else {
          emit();
        }
        return;
      }
      const auto& allowed = s_.allowed_;
      for (std::size_t pos = start; pos < allowed.size(); ++pos) {
        if (depth == 0 && shard_.first >= 0 && static_cast<int>(pos) != shard_.first) continue;
        if (depth == 1 && shard_.second >= 0 && static_cast<int>(pos) != shard_.second) continue;
        const Index g = allowed[pos];
        if (!passes_prune(depth, g)) continue;
        if (!extend_state(depth, g)) continue;
        prefix_.push_back(g);
        sums_[depth + 1] = s_.group_.add(sums_[depth], g);
        dfs(depth + 1, pos);
        prefix_.pop_back();
        if (shared_.abort.load(std::memory_order_relaxed)) return;
      }
    }

    const Searcher& s_;
    SharedState& shared_;
    std::vector<OrbitRep>& out_;
    std::vector<std::uint64_t> state_;
    std::vector<Index> prefix_;
    std::vector<Index> sums_;
    std::vector<Index> scratch_;
    std::pair<int, int> shard_{-1, -1};
    std::uint64_t local_nodes_ = 0;
  };

  std::size_t layer_block() const { return std::max<std::size_t>(1, layers_) * words_; }

  const EnumSpec& spec_;
  const SearchOptions& options_;
  GroupSpec group_;
  bool stop_at_first_;
  std::size_t words_ = 1;
  std::size_t layers_ = 0;
  std::size_t free_depth_ = 0;
  std::vector<Index> allowed_;
  std::vector<bool> allowed_mask_;
  const AutGroup* aut_ = nullptr;
  bool prune_ = false;
};

}  // namespace

EnumResult enumerate(const EnumSpec& spec, const SearchOptions& options) {
  return Searcher(spec, options, false).run();
}

std::optional<Sequence> find_any(const EnumSpec& spec, const SearchOptions& options) {
  EnumSpec plain = spec;
  plain.up_to_aut = false;
  auto result = Searcher(plain, options, true).run();
  if (result.items.empty()) return std::nullopt;
  return result.items.front().representative;
}

bool satisfies(const Sequence& s, const EnumSpec& spec) {
  if (!(s.group() == spec.group) && !s.empty()) return false;
  if (s.length() != spec.length) return false;
  if (spec.order_filter) {
    for (Index x : s.terms()) {
      if (spec.group.order_of(x) != *spec.order_filter) return false;
    }
  }
  switch (spec.constraint) {
    case Constraint::all:
      return true;
    case Constraint::zero_sum_free:
      return is_zero_sum_free(s);
    case Constraint::minimal_zero_sum:
      return is_minimal_zero_sum(s);
    case Constraint::no_short_zero_sum:
      return !find_zero_sum_subsequence(s, 1, spec.bound).has_value();
    case Constraint::no_long_zero_sum:
      return !find_zero_sum_subsequence(s, std::max<std::size_t>(1, spec.bound), s.length())
                  .has_value();
  }
  return false;
}

Sequence canonical_form(const Sequence& s) {
  const AutGroup& aut = automorphism_group(s.group());
  std::vector<Index> best(s.terms().begin(), s.terms().end());
  std::vector<Index> image(s.length());
  for (const auto& perm : aut.permutations) {
    for (std::size_t i = 0; i < s.length(); ++i) image[i] = perm[s.terms()[i]];
    std::sort(image.begin(), image.end());
    if (image < best) best = image;
  }
  return Sequence(s.group(), std::move(best));
}

std::uint64_t orbit_size(const Sequence& s) {
  const AutGroup& aut = automorphism_group(s.group());
  std::uint64_t fixing = 0;
  std::vector<Index> image(s.length());
  for (const auto& perm : aut.permutations) {
    for (std::size_t i = 0; i < s.length(); ++i) image[i] = perm[s.terms()[i]];
    std::sort(image.begin(), image.end());
    if (std::equal(image.begin(), image.end(), s.terms().begin(), s.terms().end())) ++fixing;
  }
  return aut.permutations.size() / fixing;
}

DavenportResult davenport(const GroupSpec& group, const SearchOptions& options) {
  DavenportResult result;
  result.closed_form = group.n1() + group.n2() - 1;
  for (std::size_t length = 1;; ++length) {
    // A minimal zero-sum sequence of this length drops to a zero-sum free
    // sequence of length - 1; when none exists the search is complete.
    EnumSpec free_spec{group, length - 1, Constraint::zero_sum_free, 0, false, std::nullopt};
    if (!find_any(free_spec, options)) break;
    EnumSpec spec{group, length, Constraint::minimal_zero_sum, 0, true, std::nullopt};
    auto found = enumerate(spec, options);
    result.orbits_per_length.push_back(found.items.size());
    if (!found.items.empty()) {
      result.value = static_cast<int>(length);
      result.witnesses = std::move(found.items);
    }
  }
  return result;
}

EtaResult eta(const GroupSpec& group, const SearchOptions& options) {
  EtaResult result;
  result.closed_form = 2 * group.n1() + group.n2() - 2;
  const auto bound = static_cast<std::size_t>(group.exponent());
  std::vector<OrbitRep> last;
  for (std::size_t length = 0;; ++length) {
    EnumSpec spec{group, length, Constraint::no_short_zero_sum, bound, true, std::nullopt};
    auto found = enumerate(spec, options);
    if (found.items.empty()) {
      result.value = static_cast<int>(length);
      result.extremal_witnesses = std::move(last);
      break;
    }
    last = std::move(found.items);
  }
  return result;
}

void for_each_sequence(const GroupSpec& group, std::size_t length,
                       const std::function<void(const Sequence&)>& visit) {
  const Index order = group.order();
  std::vector<Index> terms(length, 0);
  for (;;) {
    visit(Sequence(group, terms));
    // Next non-decreasing index list.
    std::size_t i = length;
    while (i > 0 && terms[i - 1] + 1 == order) --i;
    if (i == 0) return;
    const Index next = terms[i - 1] + 1;
    for (std::size_t j = i - 1; j < length; ++j) terms[j] = next;
  }
}

std::uint64_t multiset_count(std::uint64_t kinds, std::uint64_t length) {
  // C(kinds + length - 1, length), exact for the small arguments used here.
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= length; ++i) r = r * (kinds + i - 1) / i;
  return r;
}

}  // namespace zslab
