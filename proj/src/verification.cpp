#include "zslab/verification.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "zslab/decomposition.hpp"
#include "zslab/structure.hpp"
#include "zslab/zerosum.hpp"

namespace zslab {

namespace {

// Node and time budget for the exhaustive loops below.
class Budget {
 public:
  explicit Budget(const SearchOptions& options)
      : options_(options), start_(std::chrono::steady_clock::now()) {}

  void step(std::uint64_t done) {
    ++nodes_;
    if (options_.node_cap != 0 && nodes_ > options_.node_cap) {
      throw CapExceeded("node cap of " + std::to_string(options_.node_cap) + " exceeded", nodes_,
                        done);
    }
    if (options_.time_cap.count() > 0 && (nodes_ & 255) == 0 &&
        std::chrono::steady_clock::now() - start_ > options_.time_cap) {
      throw CapExceeded("time cap exceeded", nodes_, done);
    }
  }

 private:
  SearchOptions options_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
};

std::string mode_name(Mode m) { return m == Mode::fast ? "fast" : "audit"; }

}  // namespace

// Erdos-Ginzburg-Ziv -------------------------------------------------------------

CheckReport check_egz(int n, int part, const SearchOptions& options) {
  if (n < 2) throw DomainError("EGZ needs n >= 2");
  if (part != 1 && part != 2) throw DomainError("EGZ part must be 1 or 2");
  CheckReport report;
  report.check = "egz";
  ReportTimer timer(report);
  Budget budget(options);
  const GroupSpec g(1, n);
  const auto un = static_cast<std::size_t>(n);
  const std::size_t length = part == 1 ? 2 * un - 1 : 2 * un - 2;
  std::uint64_t extremal = 0;

  for_each_sequence(g, length, [&](const Sequence& s) {
    budget.step(report.cases_examined);
    ++report.cases_examined;
    const bool zero = subsum_table(s).layer(un).contains(Index{0});
    if (part == 1) {
      if (!zero) report.fail(s);
      return;
    }
    if (zero) return;
    ++extremal;
    const auto counts = s.counts();
    const bool shape = counts.size() == 2 && counts[0].second == n - 1 &&
                       counts[1].second == n - 1 &&
                       g.order_of(g.sub(counts[0].first, counts[1].first)) == n;
    if (!shape) report.fail(s);
  });

  report.params = {{"n", n},
                   {"part", part},
                   {"group", g.to_string()},
                   {"length", length},
                   {"domain_size", multiset_count(un, length)}};
  if (part == 2) report.params["extremal_sequences"] = extremal;
  return report;
}

// Hamidoune ------------------------------------------------------------------------

namespace {

struct HamidouneTally {
  std::uint64_t vacuous = 0;
  std::uint64_t instances = 0;
};

// Returns false when some admissible k violates the bound.
bool hamidoune_holds(const Sequence& s, HamidouneTally& tally) {
  const auto order = static_cast<std::size_t>(s.group().order());
  const ElementSet layer = subsum_table(s).layer(order);
  if (layer.contains(Index{0})) {
    ++tally.vacuous;
    return true;
  }
  const long size = static_cast<long>(layer.size());
  const long len = static_cast<long>(s.length());
  const long g = static_cast<long>(order);
  const long supp = static_cast<long>(s.counts().size());
  bool ok = true;
  for (long k = 1; k <= supp; ++k) {
    if (s.height() > g - k + 2) continue;
    ++tally.instances;
    if (size < len - g + k - 1) ok = false;
  }
  return ok;
}

}  // namespace

CheckReport check_hamidoune(const GroupSpec& group, std::size_t size_cap,
                            const SearchOptions& options) {
  CheckReport report;
  report.check = "hamidoune";
  ReportTimer timer(report);
  Budget budget(options);
  HamidouneTally tally;
  const std::size_t lo = group.order() + 1;
  std::uint64_t domain = 0;
  for (std::size_t length = lo; length <= size_cap; ++length) {
    domain += multiset_count(group.order(), length);
    for_each_sequence(group, length, [&](const Sequence& s) {
      budget.step(report.cases_examined);
      ++report.cases_examined;
      if (!hamidoune_holds(s, tally)) report.fail(s);
    });
  }
  report.params = {{"group", group.to_string()},
                   {"min_length", lo},
                   {"size_cap", size_cap},
                   {"domain_size", domain},
                   {"vacuous", tally.vacuous},
                   {"admissible_k_instances", tally.instances},
                   {"randomized", false}};
  return report;
}

CheckReport check_hamidoune_random(const GroupSpec& group, std::size_t size_cap,
                                   std::uint64_t samples, std::uint64_t seed) {
  CheckReport report;
  report.check = "hamidoune";
  ReportTimer timer(report);
  HamidouneTally tally;
  const std::size_t lo = group.order() + 1;
  if (size_cap < lo) throw DomainError("size cap below |G| + 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len_dist(lo, size_cap);
  std::uniform_int_distribution<Index> elem(0, group.order() - 1);
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::vector<Index> terms(len_dist(rng));
    for (auto& t : terms) t = elem(rng);
    const Sequence s(group, std::move(terms));
    ++report.cases_examined;
    if (!hamidoune_holds(s, tally)) report.fail(s);
  }
  report.params = {{"group", group.to_string()},
                   {"min_length", lo},
                   {"size_cap", size_cap},
                   {"samples", samples},
                   {"seed", seed},
                   {"vacuous", tally.vacuous},
                   {"admissible_k_instances", tally.instances},
                   {"randomized", true}};
  return report;
}

// Exchange lemmas ------------------------------------------------------------------

namespace {

using Mask = std::uint64_t;

int popcount(Mask m) { return __builtin_popcountll(m); }

Mask mask_of(const ElementSet& s) {
  Mask m = 0;
  s.for_each([&](Index x) { m |= Mask{1} << x; });
  return m;
}

Mask difference_mask(const GroupSpec& g, Mask a, Mask b) {
  Mask out = 0;
  for (Index x = 0; x < g.order(); ++x) {
    if (!((a >> x) & 1)) continue;
    for (Index y = 0; y < g.order(); ++y) {
      if ((b >> y) & 1) out |= Mask{1} << g.sub(x, y);
    }
  }
  return out;
}

struct SeqInfo {
  Sequence seq;
  Mask supp = 0;
  Mask sigma2 = 0;
};

// S = g^{|S|} with g = the only support element, or nothing.
std::optional<Index> constant_term(const Sequence& s) {
  const auto c = s.counts();
  if (c.size() != 1) return std::nullopt;
  return c.front().first;
}

}  // namespace

CheckReport check_exchange_lemmas(const GroupSpec& group, std::size_t max_length,
                                  const SearchOptions& options) {
  if (group.order() > 64) throw CapExceeded("exchange check needs |G| <= 64");
  CheckReport report;
  report.check = "exchange";
  ReportTimer timer(report);
  Budget budget(options);
  const GroupSpec& g = group;

  std::vector<Index> elements_a;
  for (Index a = 0; a < g.order(); ++a) {
    if (g.order_of(a) > 2) elements_a.push_back(a);
  }
  if (elements_a.empty()) throw DomainError("no element of order > 2 in " + g.to_string());

  std::vector<SeqInfo> all;
  for (std::size_t len = 1; len <= max_length; ++len) {
    for_each_sequence(g, len, [&](const Sequence& s) {
      const SubsumTable t = subsum_table(s);
      all.push_back({s, mask_of(t.layer(1)), len >= 2 ? mask_of(t.layer(2)) : 0});
    });
  }

  std::map<std::string, std::uint64_t> hypothesis_hits;
  std::map<std::string, std::uint64_t> violations;
  auto fail = [&](const char* clause, const Sequence& s) {
    ++violations[clause];
    report.fail(s);
  };

  // Support-only statements: hypotheses and conclusions depend on supp(S)
  // and supp(T) alone, so each support pair is decided once and weighted.
  std::map<Mask, std::vector<std::size_t>> by_support;
  for (std::size_t i = 0; i < all.size(); ++i) by_support[all[i].supp].push_back(i);

  std::uint64_t pairs = 0;
  for (const auto& [sa, ia] : by_support) {
    for (const auto& [sb, ib] : by_support) {
      if (popcount(sa) < popcount(sb)) continue;
      const std::uint64_t weight = ia.size() * ib.size();
      pairs += weight;
      budget.step(report.cases_examined);
      const Mask d = difference_mask(g, sa, sb);
      // |A - B| >= |A|: the hypotheses force |A|, |B| <= 2 before any theory.
      if (d == Mask{1}) {
        hypothesis_hits["support_difference_zero"] += weight;
        if (!(popcount(sa) == 1 && sa == sb)) fail("support_difference_zero", all[ia.front()].seq);
      }
      for (Index a : elements_a) {
        const Mask allowed = Mask{1} | (Mask{1} << a);
        if ((d & ~allowed) != 0) continue;
        hypothesis_hits["support_difference_shift"] += weight;
        bool ok = popcount(sb) == 1;
        if (ok) {
          const Index gg = static_cast<Index>(__builtin_ctzll(sb));
          const Mask pair = (Mask{1} << gg) | (Mask{1} << g.add(gg, a));
          ok = (sa & ~pair) == 0;
        }
        if (!ok) fail("support_difference_shift", all[ia.front()].seq);
      }
    }
  }

  // Statement on the first two subsum layers: group by (Sigma_1, Sigma_2)
  // and only expand members for class pairs meeting the hypothesis.
  std::map<std::pair<Mask, Mask>, std::vector<std::size_t>> by_layers;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].seq.length() >= 2) by_layers[{all[i].supp, all[i].sigma2}].push_back(i);
  }
  for (const auto& [ks, is] : by_layers) {
    // |X - Y| >= |X| for each layer, so both layers need at most 2 elements.
    if (popcount(ks.first) > 2 || popcount(ks.second) > 2) continue;
    for (const auto& [kt, it] : by_layers) {
      if (popcount(ks.first) < popcount(kt.first)) continue;
      if (popcount(kt.first) > 2 || popcount(kt.second) > 2) continue;
      budget.step(report.cases_examined);
      const Mask d = difference_mask(g, ks.first, kt.first) |
                     difference_mask(g, ks.second, kt.second);
      for (Index a : elements_a) {
        const Mask allowed = Mask{1} | (Mask{1} << a);
        if ((d & ~allowed) != 0) continue;
        hypothesis_hits["layer_difference_shift"] += is.size() * it.size();
        for (std::size_t si : is) {
          const Sequence& s = all[si].seq;
          for (std::size_t ti : it) {
            const auto gt = constant_term(all[ti].seq);
            bool ok = false;
            if (gt) {
              const auto c = s.counts();
              const bool pure = c.size() == 1 && c[0].first == *gt;
              const bool shifted = c.size() == 2 && s.multiplicity(*gt) + 1 ==
                                                        static_cast<int>(s.length()) &&
                                   s.multiplicity(g.add(*gt, a)) == 1;
              ok = pure || shifted;
            }
            if (!ok) fail("layer_difference_shift", s);
          }
        }
      }
    }
  }
  const std::uint64_t triples = pairs * elements_a.size();

  // Single-sequence statements on Sigma_k.
  std::uint64_t sk_cases = 0;
  for (const auto& info : all) {
    const Sequence& s = info.seq;
    const std::size_t len = s.length();
    if (len < 2) continue;
    const SubsumTable t = subsum_table(s);
    const auto c = s.counts();
    for (std::size_t k = 1; k + 1 <= len; ++k) {
      budget.step(report.cases_examined);
      ++sk_cases;
      const ElementSet& layer = t.layer(k);
      const std::size_t size = layer.size();
      if (size <= 2) {
        hypothesis_hits["sigma_k_small"]++;
        if (c.size() > 2) fail("sigma_k_small", s);
      }
      if (k >= 2 && k + 2 <= len && size <= 2) {
        bool coset = false;
        if (size == 2) {
          const auto xs = layer.indices();
          coset = g.order_of(g.sub(xs[1], xs[0])) == 2;
        }
        if (!coset) {
          hypothesis_hits["sigma_k_non_coset"]++;
          const bool shape = c.size() == 1 ||
                             (c.size() == 2 && (c[0].second == 1 || c[1].second == 1));
          if (!shape) fail("sigma_k_non_coset", s);
        }
      }
      if (size <= 1) {
        hypothesis_hits["sigma_k_single"]++;
        if (c.size() != 1) fail("sigma_k_single", s);
      }
    }
  }

  report.cases_examined = triples + sk_cases;
  report.params = {{"group", g.to_string()},
                   {"max_length", max_length},
                   {"sequences", all.size()},
                   {"elements_a", elements_a.size()},
                   {"pair_triples", triples},
                   {"sigma_k_cases", sk_cases},
                   {"hypothesis_hits", hypothesis_hits},
                   {"violations", violations}};
  return report;
}

// Perturbation lemmas ---------------------------------------------------------------

PerturbationLemma parse_perturbation_lemma(std::string_view text) {
  if (text == "3.1" || text == "unique") return PerturbationLemma::unique;
  if (text == "3.2" || text == "nonunique") return PerturbationLemma::nonunique;
  if (text == "3.3" || text == "nonunique-strict") return PerturbationLemma::nonunique_strict;
  throw DomainError("unknown perturbation lemma '" + std::string(text) + "'");
}

namespace {

struct TermsHash {
  std::size_t operator()(const std::vector<Index>& v) const noexcept {
    std::size_t h = v.size();
    for (Index x : v) h = h * 1000003u ^ x;
    return h;
  }
};

// Per-thread memo of Upsilon classes of perturbed sequences.
class ClassMemo {
 public:
  UpsilonClass operator()(const Sequence& s) {
    std::vector<Index> key(s.terms().begin(), s.terms().end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const UpsilonClass c = upsilon_class(s);
    memo_.emplace(std::move(key), c);
    return c;
  }

 private:
  std::unordered_map<std::vector<Index>, UpsilonClass, TermsHash> memo_;
};

// S with the terms `out` replaced by the terms `in` (multiset swap).
Sequence perturb(const Sequence& s, std::initializer_list<Index> out, std::initializer_list<Index> in) {
  std::vector<Index> terms(s.terms().begin(), s.terms().end());
  for (Index x : out) terms.erase(std::find(terms.begin(), terms.end(), x));
  terms.insert(terms.end(), in.begin(), in.end());
  return Sequence(s.group(), std::move(terms));
}

bool in_cyclic(const GroupSpec& g, Index x, Index gen) {
  Index p = 0;
  for (int k = 0; k < g.order_of(gen); ++k, p = g.add(p, gen)) {
    if (p == x) return true;
  }
  return false;
}

struct ClauseTally {
  std::map<std::string, std::uint64_t> hits;
  std::map<std::string, std::uint64_t> violations;
  std::vector<Sequence> witnesses;
  std::vector<std::string> details;

  void merge(const ClauseTally& o) {
    for (const auto& [k, v] : o.hits) hits[k] += v;
    for (const auto& [k, v] : o.violations) violations[k] += v;
    witnesses.insert(witnesses.end(), o.witnesses.begin(), o.witnesses.end());
    details.insert(details.end(), o.details.begin(), o.details.end());
  }
};

// Sorted x-multisets of size m over [0, m) with sum = 1 mod m, each with the
// number of ordered tuples it stands for.
std::vector<std::pair<std::vector<int>, std::uint64_t>> x_vectors(int m) {
  std::vector<std::pair<std::vector<int>, std::uint64_t>> out;
  std::vector<int> cur;
  std::vector<std::uint64_t> fact(static_cast<std::size_t>(m) + 1, 1);
  for (int i = 1; i <= m; ++i) fact[i] = fact[i - 1] * static_cast<std::uint64_t>(i);
  auto rec = [&](auto&& self, int start, int left, int sum) -> void {
    if (left == 0) {
      if (sum % m != 1 % m) return;
      std::uint64_t ways = fact[m];
      for (std::size_t i = 0; i < cur.size();) {
        std::size_t j = i;
        while (j < cur.size() && cur[j] == cur[i]) ++j;
        ways /= fact[j - i];
        i = j;
      }
      out.emplace_back(cur, ways);
      return;
    }
    for (int v = start; v < m; ++v) {
      cur.push_back(v);
      self(self, v, left - 1, sum + v);
      cur.pop_back();
    }
  };
  rec(rec, 0, m, 0);
  return out;
}

void unique_case(const GroupSpec& k, Index f1, Index f2, ClassMemo& memo, ClauseTally& tally) {
  const int m = k.n2();
  for (const auto& [x, ways] : x_vectors(m)) {
    std::vector<Index> terms(static_cast<std::size_t>(m - 1), f1);
    std::vector<Index> lifted;
    for (int xv : x) lifted.push_back(k.add(k.smul(xv, f1), f2));
    terms.insert(terms.end(), lifted.begin(), lifted.end());
    const Sequence s(k, terms);
    if (memo(s) != UpsilonClass::u) continue;
    // Distinct x values with their position counts.
    std::vector<std::pair<int, int>> values;
    for (int xv : x) {
      if (!values.empty() && values.back().first == xv) {
        ++values.back().second;
      } else {
        values.emplace_back(xv, 1);
      }
    }
    auto record = [&](const char* clause, std::uint64_t weight, bool hyp, bool concl,
                      const Sequence& sp, Index g) {
      if (!hyp) return;
      tally.hits[clause] += weight;
      if (concl) return;
      tally.violations[clause] += weight;
      if (tally.witnesses.size() < kMaxCounterexamples) {
        tally.witnesses.push_back(sp);
        std::ostringstream os;
        os << clause << " f1=" << k.element(f1).to_string() << " f2=" << k.element(f2).to_string()
           << " g=" << k.element(g).to_string() << " S=" << format_sequence(s);
        tally.details.push_back(os.str());
      }
    };
    for (Index g = 0; g < k.order(); ++g) {
      {
        const Sequence sp = perturb(s, {f1, f1}, {k.add(f1, g), k.sub(f1, g)});
        record("f1_f1", ways, memo(sp) != UpsilonClass::not_in, g == 0, sp, g);
      }
      for (const auto& [xj, cj] : values) {
        const Index tj = k.add(k.smul(xj, f1), f2);
        const Sequence sp = perturb(s, {f1, tj}, {k.add(f1, g), k.sub(tj, g)});
        const Index alt = k.add(k.smul(xj - 1, f1), f2);
        record("f1_term", ways * static_cast<std::uint64_t>(cj), memo(sp) != UpsilonClass::not_in,
               g == 0 || g == alt, sp, g);
      }
      for (const auto& [xj, cj] : values) {
        for (const auto& [xk, ck] : values) {
          const int pairs = cj * (xj == xk ? ck - 1 : ck);
          if (pairs == 0) continue;
          const Index tj = k.add(k.smul(xj, f1), f2);
          const Index tk = k.add(k.smul(xk, f1), f2);
          const Sequence sp = perturb(s, {tj, tk}, {k.add(tj, g), k.sub(tk, g)});
          record("term_term", ways * static_cast<std::uint64_t>(pairs),
                 memo(sp) != UpsilonClass::not_in, in_cyclic(k, g, f1), sp, g);
        }
      }
    }
  }
}

void nonunique_case(const GroupSpec& k, Index f1, Index f2, bool strict, ClassMemo& memo,
                    ClauseTally& tally) {
  const int m = k.n2();
  const Index f12 = k.add(f1, f2);
  std::vector<Index> terms(static_cast<std::size_t>(m - 1), f1);
  terms.insert(terms.end(), static_cast<std::size_t>(m - 1), f2);
  terms.push_back(f12);
  const Sequence s(k, terms);
  if (memo(s) != UpsilonClass::nu) return;
  static const char* const kPairs[5] = {"f1_f1", "f2_f2", "f1_f2", "f1_f12", "f2_f12"};
  auto member = [&](const Sequence& sp) {
    const UpsilonClass c = memo(sp);
    return strict ? c == UpsilonClass::nu : c != UpsilonClass::not_in;
  };
  for (Index g = 0; g < k.order(); ++g) {
    const Index d = k.sub(f2, f1);
    const Sequence sp[5] = {
        perturb(s, {f1, f1}, {k.add(f1, g), k.sub(f1, g)}),
        perturb(s, {f2, f2}, {k.add(f2, g), k.sub(f2, g)}),
        perturb(s, {f1, f2}, {k.add(f1, g), k.sub(f2, g)}),
        perturb(s, {f1, f12}, {k.add(f1, g), k.sub(f12, g)}),
        perturb(s, {f2, f12}, {k.add(f2, g), k.sub(f12, g)}),
    };
    bool concl[5];
    if (strict) {
      concl[0] = g == 0;
      concl[1] = g == 0;
      concl[2] = g == 0 || g == d;
      concl[3] = g == 0 || g == f2;
      concl[4] = g == 0 || g == f1;
    } else {
      concl[0] = in_cyclic(k, g, f2);
      concl[1] = in_cyclic(k, g, f1);
      concl[2] = sp[2] == s && (g == 0 || g == d);
      concl[3] = in_cyclic(k, g, f2);
      concl[4] = in_cyclic(k, g, f1);
    }
    for (int c = 0; c < 5; ++c) {
      if (!member(sp[c])) continue;
      const std::string clause = kPairs[c];
      tally.hits[clause]++;
      if (concl[c]) continue;
      tally.violations[clause]++;
      if (tally.witnesses.size() < kMaxCounterexamples) {
        tally.witnesses.push_back(sp[c]);
        std::ostringstream os;
        os << clause << " f1=" << k.element(f1).to_string() << " f2=" << k.element(f2).to_string()
           << " g=" << k.element(g).to_string();
        tally.details.push_back(os.str());
      }
    }
  }
}

}  // namespace

CheckReport check_perturbation_lemmas(int m, PerturbationLemma which,
                                      const SearchOptions& options) {
  if (m < 4) throw DomainError("perturbation lemmas are stated for m >= 4");
  CheckReport report;
  report.check = "perturbation";
  ReportTimer timer(report);
  const GroupSpec k(m, m);
  const AutGroup& aut = automorphism_group(k);
  const std::size_t bases = aut.maps.size();

  const unsigned threads = std::max(1u, options.threads);
  std::vector<ClauseTally> tallies(threads);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> over{false};
  const auto start = std::chrono::steady_clock::now();
  auto worker = [&](unsigned id) {
    ClassMemo memo;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= bases || over) return;
      if (options.time_cap.count() > 0 &&
          std::chrono::steady_clock::now() - start > options.time_cap) {
        over = true;
        return;
      }
      const Index f1 = aut.maps[i].image_e1().index();
      const Index f2 = aut.maps[i].image_e2().index();
      if (which == PerturbationLemma::unique) {
        unique_case(k, f1, f2, memo, tallies[id]);
      } else {
        nonunique_case(k, f1, f2, which == PerturbationLemma::nonunique_strict, memo,
                       tallies[id]);
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }
  if (over) throw CapExceeded("time cap exceeded", next.load(), 0);

  ClauseTally total;
  for (const auto& t : tallies) total.merge(t);
  // Deterministic witness order regardless of scheduling.
  std::vector<std::pair<std::string, Sequence>> found;
  for (std::size_t i = 0; i < total.witnesses.size(); ++i) {
    found.emplace_back(total.details[i], total.witnesses[i]);
  }
  std::sort(found.begin(), found.end());
  nlohmann::json details = nlohmann::json::array();
  for (const auto& [d, w] : found) {
    report.fail(w);
    if (details.size() < 16) details.push_back(d);
  }

  const auto mm = static_cast<std::uint64_t>(m);
  std::uint64_t ordered_x = 1;
  for (int i = 0; i + 1 < m; ++i) ordered_x *= mm;  // m^m tuples, 1/m of them sum to 1
  const std::uint64_t domain =
      which == PerturbationLemma::unique ? bases * ordered_x * mm * mm : bases * mm * mm;
  report.cases_examined = domain;
  const char* names[] = {"unique", "nonunique", "nonunique-strict"};
  report.params["m"] = m;
  report.params["group"] = k.to_string();
  report.params["lemma"] = names[static_cast<int>(which)];
  report.params["bases"] = bases;
  report.params["hypothesis_hits"] = total.hits;
  report.params["violations"] = total.violations;
  report.params["violation_details"] = details;
  return report;
}

// Product decomposition lemma ----------------------------------------------------

bool splits_into_zero_sums(const Sequence& s, int parts) {
  if (parts <= 0) return false;
  if (s.length() < static_cast<std::size_t>(parts)) return false;
  if (parts == 1) return !s.empty() && s.sum_index() == 0;
  const GroupSpec& g = s.group();
  // The part holding the smallest term is a zero-sum subsequence through it.
  const Index first = s.terms().front();
  const Sequence rest = s.without(first);
  const auto counts = rest.counts();
  std::vector<int> pick(counts.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, Index sum) -> bool {
    if (i == counts.size()) {
      if (sum != 0) return false;
      std::vector<Index> part{first};
      for (std::size_t j = 0; j < counts.size(); ++j) {
        part.insert(part.end(), pick[j], counts[j].first);
      }
      const Sequence piece(g, part);
      return splits_into_zero_sums(s.without(piece), parts - 1);
    }
    Index acc = sum;
    for (int k = 0; k <= counts[i].second; ++k) {
      pick[i] = k;
      if (self(self, i + 1, acc)) return true;
      acc = g.add(acc, counts[i].first);
    }
    pick[i] = 0;
    return false;
  };
  return rec(rec, 0, first);
}

CheckReport check_lemma_2_5(int m, int n, const SearchOptions& options) {
  if (m < 2 || n < 2) throw DomainError("needs m, n >= 2");
  CheckReport report;
  report.check = "lemma-2-5";
  ReportTimer timer(report);
  const GroupSpec g(m * n, m * n);
  const MultByM phi(g, m);
  EnumSpec spec{g, static_cast<std::size_t>(2 * m * n - 1), Constraint::minimal_zero_sum, 0, true,
                std::nullopt};
  if (options.mode == Mode::fast) spec.order_filter = m * n;
  const auto found = enumerate(spec, options);

  std::map<std::string, std::uint64_t> violations;
  for (const auto& orbit : found.items) {
    const Sequence& s = orbit.representative;
    ++report.cases_examined;
    const Sequence image = phi.apply(s);
    bool ok = true;
    auto check = [&](const char* what, bool cond) {
      if (!cond) {
        ++violations[what];
        ok = false;
      }
    };
    const auto w = first_decomposition(s, m, DecompositionFilter::omega, options);
    check("decomposition_exists", w.has_value());
    if (w) {
      check("sigma_tilde_minimal", is_minimal_zero_sum(sigma_tilde(*w)));
      for (const auto& b : w->blocks) {
        check("block_images_minimal", is_minimal_zero_sum(phi.apply(b)));
      }
    }
    check("not_2m_zero_sums", !splits_into_zero_sums(image, 2 * m));
    const auto nu = static_cast<std::size_t>(n);
    check("short_zero_sums_have_length_n",
          n < 2 || !subsum_table(image).at_most(nu - 1).contains(Index{0}));
    check("zero_not_in_support", image.multiplicity(Index{0}) == 0);
    if (!ok) report.fail(s);
  }
  report.params = {{"m", m},
                   {"n", n},
                   {"group", g.to_string()},
                   {"mode", mode_name(options.mode)},
                   {"length", 2 * m * n - 1},
                   {"orbits", found.items.size()},
                   {"sequences", found.total_sequences()},
                   {"violations", violations}};
  return report;
}

}  // namespace zslab
