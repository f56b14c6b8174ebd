#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "zslab/errors.hpp"
#include "zslab/structure.hpp"
#include "zslab/verification.hpp"
#include "zslab/zerosum.hpp"

using namespace zslab;

namespace {

int sub(const oracle::Grp& g, int x, int y) { return g.add(x, g.mul(-1, y)); }

std::set<int> difference(const oracle::Grp& g, const std::set<int>& a, const std::set<int>& b) {
  std::set<int> out;
  for (int x : a) {
    for (int y : b) out.insert(sub(g, x, y));
  }
  return out;
}

bool is_power(const std::vector<int>& t, int g) {
  return std::all_of(t.begin(), t.end(), [&](int x) { return x == g; });
}

struct ExchangeTally {
  std::map<std::string, std::uint64_t> hits, violations;
  void record(const std::string& clause, bool ok) {
    ++hits[clause];
    if (!ok) ++violations[clause];
  }
};

// The exchange statements read literally, with subsums from index subsets.
ExchangeTally exchange_oracle(const oracle::Grp& g, std::size_t max_length) {
  struct Info {
    std::vector<int> t;
    std::set<int> supp;
    std::vector<std::set<int>> sums;
  };
  std::vector<Info> all;
  for (std::size_t len = 1; len <= max_length; ++len) {
    for (auto& t : oracle::multisets(g.order(), len)) {
      const auto sums = oracle::subset_sums(g, t);
      all.push_back({t, std::set<int>(t.begin(), t.end()), sums});
    }
  }
  std::vector<int> as;
  for (int a = 0; a < g.order(); ++a) {
    if (g.ord(a) > 2) as.push_back(a);
  }
  ExchangeTally out;
  for (const auto& s : all) {
    for (const auto& t : all) {
      if (s.supp.size() < t.supp.size()) continue;
      const std::set<int> d = difference(g, s.supp, t.supp);
      const int g0 = t.t.front();
      const bool t_power = is_power(t.t, g0);
      if (d == std::set<int>{0}) out.record("support_difference_zero", t_power && is_power(s.t, g0));
      for (int a : as) {
        const std::set<int> allowed{0, a};
        if (std::includes(allowed.begin(), allowed.end(), d.begin(), d.end())) {
          bool ok = t_power;
          for (int x : s.t) ok = ok && (x == g0 || x == g.add(g0, a));
          out.record("support_difference_shift", ok);
        }
        if (s.t.size() < 2 || t.t.size() < 2) continue;
        std::set<int> u = difference(g, s.sums[1], t.sums[1]);
        const std::set<int> u2 = difference(g, s.sums[2], t.sums[2]);
        u.insert(u2.begin(), u2.end());
        if (std::includes(allowed.begin(), allowed.end(), u.begin(), u.end())) {
          const auto shifted = std::count(s.t.begin(), s.t.end(), g.add(g0, a));
          const auto base = std::count(s.t.begin(), s.t.end(), g0);
          const bool ok = t_power && (is_power(s.t, g0) ||
                                      (shifted == 1 && base + 1 == static_cast<long>(s.t.size())));
          out.record("layer_difference_shift", ok);
        }
      }
    }
  }
  for (const auto& s : all) {
    const std::size_t len = s.t.size();
    std::map<int, int> mult;
    for (int x : s.t) ++mult[x];
    for (std::size_t k = 1; k + 1 <= len; ++k) {
      const auto& layer = s.sums[k];
      if (layer.size() <= 2) out.record("sigma_k_small", s.supp.size() <= 2);
      if (k >= 2 && k + 2 <= len && layer.size() <= 2) {
        const bool coset =
            layer.size() == 2 && g.ord(sub(g, *layer.rbegin(), *layer.begin())) == 2;
        if (!coset) {
          bool ok = mult.size() == 1;
          if (mult.size() == 2) ok = mult.begin()->second == 1 || mult.rbegin()->second == 1;
          out.record("sigma_k_non_coset", ok);
        }
      }
      if (layer.size() <= 1) out.record("sigma_k_single", s.supp.size() == 1);
    }
  }
  return out;
}

// Splitting by assigning each term a label.
bool splits_oracle(const std::vector<int>& t, int parts, const oracle::Grp& g) {
  std::vector<int> label(t.size(), 0);
  for (;;) {
    std::vector<int> sum(static_cast<std::size_t>(parts), 0), size(static_cast<std::size_t>(parts), 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      sum[label[i]] = g.add(sum[label[i]], t[i]);
      ++size[label[i]];
    }
    bool ok = true;
    for (int p = 0; p < parts; ++p) ok = ok && size[p] > 0 && sum[p] == 0;
    if (ok) return true;
    std::size_t i = 0;
    while (i < label.size() && ++label[i] == parts) label[i++] = 0;
    if (i == label.size()) return false;
  }
}

}  // namespace

TEST_CASE("Erdos-Ginzburg-Ziv examples") {
  const auto r = check_egz(3, 1);
  CHECK(r.holds());
  CHECK(r.cases_examined == 21);
  CHECK(r.params["domain_size"] == 21);
  CHECK(check_egz(2, 1).holds());

  const auto p2 = check_egz(3, 2);
  CHECK(p2.holds());
  const GroupSpec c3(1, 3);
  const Sequence s = parse_sequence(c3, "(0,1)^2 (0,2)^2");
  CHECK_FALSE(subsum_table(s).layer(3).contains(Index{0}));
  CHECK(subsum_table(s).layer(3).size() == 2);
  CHECK(p2.params["extremal_sequences"] == 3);  // 0^2 1^2, 0^2 2^2, 1^2 2^2

  CHECK_THROWS_AS(check_egz(3, 3), DomainError);
  CHECK_THROWS_AS(check_egz(1, 1), DomainError);
}

TEST_CASE("Erdos-Ginzburg-Ziv agrees with subset enumeration") {
  for (int n = 2; n <= 5; ++n) {
    const oracle::Grp o{1, n};
    const auto un = static_cast<std::size_t>(n);
    for (const auto& t : oracle::multisets(n, 2 * un - 1)) {
      CHECK(oracle::subset_sums(o, t)[un].count(0) == 1);
    }
    std::uint64_t extremal = 0;
    for (const auto& t : oracle::multisets(n, 2 * un - 2)) {
      if (oracle::subset_sums(o, t)[un].count(0) == 0) ++extremal;
    }
    const auto r = check_egz(n, 2);
    CHECK(r.holds());
    CHECK(r.params["extremal_sequences"] == extremal);
    // g^{n-1} h^{n-1} with g - h a generator: one per unordered pair.
    std::uint64_t pairs = 0;
    for (int x = 0; x < n; ++x) {
      for (int y = x + 1; y < n; ++y) pairs += o.ord(sub(o, x, y)) == n;
    }
    CHECK(extremal == pairs);
    CHECK(check_egz(n, 1).holds());
  }
}

TEST_CASE("Hamidoune bound") {
  const GroupSpec c3(1, 3);
  // Equality case and a vacuous case.
  const Sequence eq = parse_sequence(c3, "(0,1)^2 (0,2)^2");
  CHECK(subsum_table(eq).layer(3).size() == 2);
  CHECK(subsum_table(parse_sequence(c3, "(0,1)^4")).layer(3).contains(Index{0}));

  const auto r = check_hamidoune(GroupSpec(2, 2), 8);
  CHECK(r.holds());
  CHECK(r.params["min_length"] == 5);
  CHECK(r.cases_examined == multiset_count(4, 5) + multiset_count(4, 6) + multiset_count(4, 7) +
                                multiset_count(4, 8));

  for (const GroupSpec& g : {GroupSpec(2, 2), GroupSpec(1, 3), GroupSpec(1, 4), GroupSpec(1, 5)}) {
    const auto o = oracle::of(g);
    const int order = o.order();
    const std::size_t cap = static_cast<std::size_t>(order) + 3;
    std::uint64_t vacuous = 0, instances = 0, violations = 0;
    for (std::size_t len = static_cast<std::size_t>(order) + 1; len <= cap; ++len) {
      for (const auto& t : oracle::multisets(order, len)) {
        const std::set<int> layer = oracle::subset_sums(o, t)[static_cast<std::size_t>(order)];
        if (layer.count(0)) {
          ++vacuous;
          continue;
        }
        const int supp = static_cast<int>(std::set<int>(t.begin(), t.end()).size());
        const int h = oracle::max_multiplicity(t);
        for (int k = 1; k <= supp; ++k) {
          if (h > order - k + 2) continue;
          ++instances;
          violations += static_cast<long>(layer.size()) < static_cast<long>(len) - order + k - 1;
        }
      }
    }
    const auto rep = check_hamidoune(g, cap);
    CHECK(violations == 0);
    CHECK(rep.holds());
    CHECK(rep.params["vacuous"] == vacuous);
    CHECK(rep.params["admissible_k_instances"] == instances);
  }
}

TEST_CASE("randomized Hamidoune is labelled and reproducible") {
  const auto a = check_hamidoune_random(GroupSpec(2, 4), 14, 500, 7);
  const auto b = check_hamidoune_random(GroupSpec(2, 4), 14, 500, 7);
  CHECK(a.holds());
  CHECK(a.params["randomized"] == true);
  CHECK(a.cases_examined == 500);
  CHECK(to_json(a, false) == to_json(b, false));
  CHECK_THROWS_AS(check_hamidoune_random(GroupSpec(2, 4), 5, 1, 1), DomainError);
  CHECK(check_hamidoune(GroupSpec(1, 3), 7).params["randomized"] == false);
}

TEST_CASE("exchange statements") {
  const GroupSpec c5(1, 5);
  // Single supports differing by zero, and a constant Sigma_2.
  const Sequence s = parse_sequence(c5, "(0,2)^3"), t = parse_sequence(c5, "(0,2)^2");
  CHECK(s.counts().size() == 1);
  CHECK(t.counts().size() == 1);
  CHECK(subsum_table(parse_sequence(c5, "(0,3)^4")).layer(2).size() == 1);

  for (const GroupSpec& g : {GroupSpec(1, 5), GroupSpec(1, 7), GroupSpec(3, 3)}) {
    const auto r = check_exchange_lemmas(g, 6);
    CHECK(r.holds());
    CHECK(r.params["violations"].empty());
    CHECK(r.cases_examined == r.params["pair_triples"].get<std::uint64_t>() +
                                  r.params["sigma_k_cases"].get<std::uint64_t>());
  }
  CHECK_THROWS_AS(check_exchange_lemmas(GroupSpec(2, 2), 3), DomainError);
}

TEST_CASE("exchange statements agree with a literal reading") {
  for (auto [g, len] : {std::pair{GroupSpec(1, 5), std::size_t{4}}, {GroupSpec(1, 6), 3},
                        {GroupSpec(3, 3), 3}, {GroupSpec(2, 4), 3}}) {
    const auto expect = exchange_oracle(oracle::of(g), len);
    const auto r = check_exchange_lemmas(g, len);
    CHECK(expect.violations.empty());
    CHECK(r.holds());
    CHECK(r.params["hypothesis_hits"] == nlohmann::json(expect.hits));
  }
}

TEST_CASE("perturbation statements over C4 + C4") {
  const auto aut = automorphisms(GroupSpec(4, 4)).size();
  const auto u = check_perturbation_lemmas(4, PerturbationLemma::unique);
  CHECK(u.holds());
  CHECK(u.params["bases"] == aut);
  CHECK(u.cases_examined == aut * 64 * 16);
  CHECK(u.params["hypothesis_hits"].contains("f1_f1"));
  for (auto which : {PerturbationLemma::nonunique, PerturbationLemma::nonunique_strict}) {
    const auto r = check_perturbation_lemmas(4, which);
    CHECK(r.holds());
    CHECK(r.cases_examined == aut * 16);
    CHECK(r.params["violations"].empty());
  }
  CHECK_THROWS_AS(check_perturbation_lemmas(3, PerturbationLemma::unique), DomainError);
  CHECK(parse_perturbation_lemma("3.1") == PerturbationLemma::unique);
  CHECK(parse_perturbation_lemma("nonunique") == PerturbationLemma::nonunique);
  CHECK(parse_perturbation_lemma("3.3") == PerturbationLemma::nonunique_strict);
  CHECK_THROWS_AS(parse_perturbation_lemma("3.4"), DomainError);
}

TEST_CASE("perturbation hits match a literal count on one basis") {
  // Every basis gives an automorphic copy, so the hit count is |Aut| times the
  // count for the standard basis.
  const GroupSpec k(4, 4);
  const auto o = oracle::of(k);
  const int f1 = o.idx(1, 0), f2 = o.idx(0, 1), f12 = o.idx(1, 1);
  std::vector<int> s(3, f1);
  s.insert(s.end(), 3, f2);
  s.push_back(f12);
  std::uint64_t hits = 0;
  for (int g = 0; g < o.order(); ++g) {
    std::vector<int> sp = s;
    sp.erase(std::find(sp.begin(), sp.end(), f1));
    sp.erase(std::find(sp.begin(), sp.end(), f1));
    sp.push_back(o.add(f1, g));
    sp.push_back(sub(o, f1, g));
    std::sort(sp.begin(), sp.end());
    if (!oracle::in_upsilon(o, sp)) continue;
    ++hits;
    CHECK(o.a(g) == 0);  // g in <f2>
  }
  const auto r = check_perturbation_lemmas(4, PerturbationLemma::nonunique);
  CHECK(r.params["hypothesis_hits"]["f1_f1"] == hits * automorphisms(k).size());
}

TEST_CASE("perturbation statements over C5 + C5") {
  SearchOptions opts;
  opts.threads = 2;
  for (auto which : {PerturbationLemma::unique, PerturbationLemma::nonunique,
                     PerturbationLemma::nonunique_strict}) {
    const auto r = check_perturbation_lemmas(5, which, opts);
    CHECK(r.holds());
    CHECK(r.params["violations"].empty());
  }
}

TEST_CASE("product decomposition lemma at m = n = 2") {
  const auto r = check_lemma_2_5(2, 2);
  CHECK(r.holds());
  CHECK(r.params["sequences"] == 144);
  CHECK(r.params["orbits"] == 2);
  CHECK(r.params["violations"].empty());
  SearchOptions fast;
  fast.mode = Mode::fast;
  CHECK(check_lemma_2_5(2, 2, fast).params["sequences"] == 144);
  CHECK_THROWS_AS(check_lemma_2_5(1, 2), DomainError);
}

TEST_CASE("splitting into zero-sums agrees with label assignment") {
  const GroupSpec g(2, 4);
  const auto o = oracle::of(g);
  for (std::size_t len = 1; len <= 6; ++len) {
    for (const auto& t : oracle::multisets(o.order(), len)) {
      const Sequence s(g, std::vector<Index>(t.begin(), t.end()));
      for (int parts = 1; parts <= 3; ++parts) {
        CHECK(splits_into_zero_sums(s, parts) == splits_oracle(t, parts, o));
      }
    }
  }
  CHECK_FALSE(splits_into_zero_sums(Sequence(g), 0));
}

TEST_CASE("reports are deterministic") {
  SearchOptions one, two;
  two.threads = 2;
  CHECK(to_json(check_exchange_lemmas(GroupSpec(1, 5), 4), false) ==
        to_json(check_exchange_lemmas(GroupSpec(1, 5), 4), false));
  CHECK(to_json(check_perturbation_lemmas(4, PerturbationLemma::unique, one), false) ==
        to_json(check_perturbation_lemmas(4, PerturbationLemma::unique, two), false));
  CHECK(to_json(check_egz(4, 2), false) == to_json(check_egz(4, 2), false));
}

TEST_CASE("caps abort checks") {
  SearchOptions capped;
  capped.node_cap = 3;
  CHECK_THROWS_AS(check_egz(5, 1, capped), CapExceeded);
  CHECK_THROWS_AS(check_hamidoune(GroupSpec(2, 2), 8, capped), CapExceeded);
  CHECK_THROWS_AS(check_exchange_lemmas(GroupSpec(1, 5), 4, capped), CapExceeded);
}
