#include "zslab/structure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "zslab/zerosum.hpp"

namespace zslab {

namespace {

void require_square(const GroupSpec& g) {
  if (g.n1() != g.n2()) throw ShapeError("expected a group C_n x C_n, got " + g.to_string());
}

// Coefficient x in [0, limit) with d = x*g, or -1.
int coefficient_of(const GroupSpec& grp, Index d, Index g, int limit) {
  Index p = 0;
  for (int x = 0; x < limit; ++x, p = grp.add(p, g)) {
    if (p == d) return x;
  }
  return -1;
}

// All multisets of `size` values from [0, range) (as sorted vectors) with a
// sum accepted by `keep`.
template <typename Keep>
void for_each_multiset(int size, int range, Keep&& keep, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start, int left, long sum) -> void {
    if (left == 0) {
      if (keep(sum)) out.push_back(cur);
      return;
    }
    for (int v = start; v < range; ++v) {
      cur.push_back(v);
      self(self, v, left - 1, sum + v);
      cur.pop_back();
    }
  };
  rec(rec, 0, size, 0);
}

EnumSpec minimal_spec(const GroupSpec& g, std::size_t length, const SearchOptions& options,
                      int filter_order) {
  EnumSpec spec{g, length, Constraint::minimal_zero_sum, 0, true, std::nullopt};
  // All terms of a length-(2n-1) minimal zero-sum sequence over C_n + C_n
  // have order n; only used outside audit mode.
  if (options.mode == Mode::fast && filter_order > 0) spec.order_filter = filter_order;
  return spec;
}

std::string mode_name(Mode m) { return m == Mode::fast ? "fast" : "audit"; }

}  // namespace

Sequence upsilon_sequence(const GroupElement& e1, const GroupElement& e2, std::span<const int> x) {
  const GroupSpec& g = e1.group();
  std::vector<Index> terms(static_cast<std::size_t>(g.n2() - 1), e1.index());
  for (int xv : x) terms.push_back(g.add(g.smul(xv, e1.index()), e2.index()));
  return Sequence(g, std::move(terms));
}

std::optional<UpsilonWitness> upsilon_membership(const Sequence& s) {
  const GroupSpec& g = s.group();
  require_square(g);
  const int n = g.n2();
  if (n < 2 || s.length() != static_cast<std::size_t>(2 * n - 1)) return std::nullopt;

  const auto counts = s.counts();
  std::optional<UpsilonWitness> found;
  for (const auto& [e1, mult] : counts) {
    if (mult < n - 1 || g.order_of(e1) != n) continue;
    const Sequence rest = s.without(Sequence(g, std::vector<Index>(n - 1, e1)));
    // The n remaining terms must share one coset e2 + <e1> with (e1, e2) a
    // basis; the x-sum mod n does not depend on the representative e2.
    const Index t0 = rest.terms().front();
    bool same_coset = true;
    for (Index t : rest.terms()) {
      if (coefficient_of(g, g.sub(t, t0), e1, n) < 0) {
        same_coset = false;
        break;
      }
    }
    if (!same_coset) continue;
    const GroupElement ge1 = g.element(e1);
    std::optional<Index> e2;
    // Smallest index in the coset that completes e1 to a basis.
    std::vector<Index> coset;
    for (int x = 0; x < n; ++x) coset.push_back(g.sub(t0, g.smul(x, e1)));
    std::sort(coset.begin(), coset.end());
    for (Index cand : coset) {
      if (is_basis(ge1, g.element(cand))) {
        e2 = cand;
        break;
      }
    }
    if (!e2) continue;
    std::vector<int> xs;
    long total = 0;
    for (Index t : rest.terms()) {
      xs.push_back(coefficient_of(g, g.sub(t, *e2), e1, n));
      total += xs.back();
    }
    if (total % n != 1 % n) continue;
    std::sort(xs.begin(), xs.end());
    found = UpsilonWitness{ge1, g.element(*e2), std::move(xs)};
    break;
  }
  if (!found) return std::nullopt;
  // Membership also requires S in A(G).
  if (!is_minimal_zero_sum(s)) return std::nullopt;
  return found;
}

UpsilonClass upsilon_class(const Sequence& s) {
  if (!upsilon_membership(s)) return UpsilonClass::not_in;
  const int n = s.group().n2();
  int heavy = 0;
  for (const auto& [x, k] : s.counts()) {
    if (k == n - 1) ++heavy;
  }
  return heavy == 1 ? UpsilonClass::u : UpsilonClass::nu;
}

const char* to_string(UpsilonClass c) {
  switch (c) {
    case UpsilonClass::not_in:
      return "not_in";
    case UpsilonClass::u:
      return "u";
    case UpsilonClass::nu:
      return "nu";
  }
  return "?";
}

// Forms ----------------------------------------------------------------------

Sequence reconstruct(const FormMatch& m) {
  const GroupSpec& g = m.first.group();
  std::vector<Index> terms;
  if (m.form == Form::I) {
    const GroupElement& ej = m.j == 1 ? m.first : m.second;
    const GroupElement& ek = m.j == 1 ? m.second : m.first;
    terms.assign(static_cast<std::size_t>(order(ej) - 1), ej.index());
    for (int xv : m.x) terms.push_back(g.add(g.smul(xv, ej.index()), ek.index()));
  } else {
    terms.assign(static_cast<std::size_t>(m.s * g.n1() - 1), m.first.index());
    for (int xv : m.x) terms.push_back(g.add(g.smul(-xv, m.first.index()), m.second.index()));
  }
  return Sequence(g, std::move(terms));
}

namespace {

void require_rank_two(const GroupSpec& g) {
  if (g.n1() < 2) throw ShapeError("maximal-length forms need 1 < n1, got " + g.to_string());
}

bool generates(const GroupSpec& g, Index a, Index b) {
  return generated_subgroup(g.element(a), g.element(b)).size() == g.order();
}

bool form_two_allowed(const GroupSpec& g, int s, Index g1, Index g2) {
  if (g.order_of(g2) != g.n2()) return false;
  if (s > 1 && g.smul(g.n1(), g1) != g.smul(g.n2(), g2)) return false;
  return generates(g, g1, g2);
}

}  // namespace

std::vector<FormMatch> classify_maximal(const Sequence& s) {
  const GroupSpec& g = s.group();
  require_rank_two(g);
  const int n1 = g.n1(), n2 = g.n2();
  if (s.length() != static_cast<std::size_t>(n1 + n2 - 1)) {
    throw LengthError("classification needs |S| = D(G) = " + std::to_string(n1 + n2 - 1) +
                      ", got " + std::to_string(s.length()));
  }
  std::vector<FormMatch> matches;
  const bool minimal = is_minimal_zero_sum(s);
  auto accept = [&](FormMatch m) {
    if (!(reconstruct(m) == s)) return;
    m.minimal = minimal;
    matches.push_back(std::move(m));
  };

  // Form I over every basis with ord(e_i) = n_i.
  const AutGroup& aut = automorphism_group(g);
  for (const auto& alpha : aut.maps) {
    for (int j = 1; j <= 2; ++j) {
      const GroupElement ej = j == 1 ? alpha.image_e1() : alpha.image_e2();
      const GroupElement ek = j == 1 ? alpha.image_e2() : alpha.image_e1();
      const int oj = order(ej);
      if (s.multiplicity(ej.index()) < oj - 1) continue;
      const Sequence rest = s.without(Sequence(g, std::vector<Index>(oj - 1, ej.index())));
      std::vector<int> xs;
      long total = 0;
      bool ok = true;
      for (Index t : rest.terms()) {
        const int xv = coefficient_of(g, g.sub(t, ek.index()), ej.index(), oj);
        if (xv < 0) {
          ok = false;
          break;
        }
        xs.push_back(xv);
        total += xv;
      }
      if (!ok || total % oj != 1 % oj) continue;
      std::sort(xs.begin(), xs.end());
      accept(FormMatch{Form::I, alpha.image_e1(), alpha.image_e2(), j, 1, std::move(xs), false});
    }
  }

  // Form II over generating pairs {g1, g2} with ord(g2) = n2.
  for (int sv = 1; sv <= n2 / n1; ++sv) {
    const int reps = sv * n1 - 1;
    for (const auto& [g1, mult] : s.counts()) {
      if (mult < reps) continue;
      const Sequence rest = s.without(Sequence(g, std::vector<Index>(reps, g1)));
      for (Index g2 = 0; g2 < g.order(); ++g2) {
        std::vector<int> xs;
        long total = 0;
        bool ok = true;
        for (Index t : rest.terms()) {
          const int xv = coefficient_of(g, g.sub(g2, t), g1, n1);
          if (xv < 0) {
            ok = false;
            break;
          }
          xs.push_back(xv);
          total += xv;
        }
        if (!ok || total != n1 - 1) continue;
        if (!form_two_allowed(g, sv, g1, g2)) continue;
        std::sort(xs.begin(), xs.end());
        accept(FormMatch{Form::II, g.element(g1), g.element(g2), 1, sv, std::move(xs), false});
      }
    }
  }
  return matches;
}

std::vector<FormMatch> enumerate_forms(const GroupSpec& g) {
  require_rank_two(g);
  const int n1 = g.n1(), n2 = g.n2();
  std::vector<FormMatch> out;
  const AutGroup& aut = automorphism_group(g);
  for (const auto& alpha : aut.maps) {
    for (int j = 1; j <= 2; ++j) {
      const int oj = j == 1 ? n1 : n2;
      const int ok = j == 1 ? n2 : n1;
      std::vector<std::vector<int>> xs;
      for_each_multiset(ok, oj, [&](long sum) { return sum % oj == 1 % oj; }, xs);
      for (auto& x : xs) {
        FormMatch m{Form::I, alpha.image_e1(), alpha.image_e2(), j, 1, std::move(x), false};
        m.minimal = is_minimal_zero_sum(reconstruct(m));
        out.push_back(std::move(m));
      }
    }
  }
  for (int sv = 1; sv <= n2 / n1; ++sv) {
    std::vector<std::vector<int>> xs;
    for_each_multiset(n2 + (1 - sv) * n1, n1, [&](long sum) { return sum == n1 - 1; }, xs);
    for (Index g1 = 0; g1 < g.order(); ++g1) {
      for (Index g2 = 0; g2 < g.order(); ++g2) {
        if (!form_two_allowed(g, sv, g1, g2)) continue;
        for (const auto& x : xs) {
          FormMatch m{Form::II, g.element(g1), g.element(g2), 1, sv, x, false};
          m.minimal = is_minimal_zero_sum(reconstruct(m));
          out.push_back(std::move(m));
        }
      }
    }
  }
  return out;
}

// Checks ---------------------------------------------------------------------

CheckReport check_property_b(int n, const SearchOptions& options) {
  CheckReport report;
  report.check = "property-b";
  ReportTimer timer(report);
  const GroupSpec g(n, n);
  const auto found = enumerate(minimal_spec(g, 2 * n - 1, options, n), options);
  std::size_t in_upsilon = 0;
  for (const auto& orbit : found.items) {
    const Sequence& s = orbit.representative;
    ++report.cases_examined;
    const bool heavy = s.height() == n - 1;
    const bool member = upsilon_membership(s).has_value();
    if (member) ++in_upsilon;
    if (!heavy || !member) report.fail(s);
  }
  report.params = {{"n", n},
                   {"group", g.to_string()},
                   {"mode", mode_name(options.mode)},
                   {"length", 2 * n - 1},
                   {"orbits", found.items.size()},
                   {"sequences", found.total_sequences()},
                   {"orbits_in_upsilon", in_upsilon},
                   {"a_equals_upsilon", in_upsilon == found.items.size()}};
  return report;
}

CheckReport check_property_c(int n, const SearchOptions& options) {
  CheckReport report;
  report.check = "property-c";
  ReportTimer timer(report);
  const GroupSpec g(n, n);
  const std::size_t length = static_cast<std::size_t>(2 * n + n - 2 - 1);  // eta(G) - 1
  EnumSpec spec{g, length, Constraint::no_short_zero_sum, static_cast<std::size_t>(n), true,
                std::nullopt};
  const auto found = enumerate(spec, options);
  for (const auto& orbit : found.items) {
    const Sequence& s = orbit.representative;
    ++report.cases_examined;
    bool power = true;
    for (const auto& [x, k] : s.counts()) {
      if (k % (n - 1) != 0) power = false;
    }
    if (!power) report.fail(s);
  }
  report.params = {{"n", n},
                   {"group", g.to_string()},
                   {"mode", mode_name(options.mode)},
                   {"length", length},
                   {"orbits", found.items.size()},
                   {"sequences", found.total_sequences()}};
  return report;
}

CheckReport check_lemma_2_3_equivalence(int n, const SearchOptions& options) {
  CheckReport report;
  report.check = "lemma-2-3";
  ReportTimer timer(report);
  const GroupSpec g(n, n);
  const auto un = static_cast<std::size_t>(n);
  std::vector<Sequence> violations;

  auto run = [&](const EnumSpec& spec, auto&& holds_for) {
    bool all = true;
    const auto found = enumerate(spec, options);
    for (const auto& orbit : found.items) {
      ++report.cases_examined;
      if (!holds_for(orbit.representative)) {
        all = false;
        violations.push_back(orbit.representative);
      }
    }
    return std::make_pair(all, found.items.size());
  };

  // (a) |S| = 3n-3 without zero-sum subsequences of length >= n.
  const auto [a, a_count] = run(
      EnumSpec{g, 3 * un - 3, Constraint::no_long_zero_sum, un, true, std::nullopt},
      [&](const Sequence& s) {
        const int zeros = s.multiplicity(Index{0});
        if (zeros < n - 1) return false;
        for (const auto& [x, k] : s.counts()) {
          const int avail = x == 0 ? k - (n - 1) : k;
          if (avail >= n - 2) return true;
        }
        return n - 2 <= 0;
      });
  // (b) zero-sum free of length 2n-2.
  const auto [b, b_count] =
      run(EnumSpec{g, 2 * un - 2, Constraint::zero_sum_free, 0, true, std::nullopt},
          [&](const Sequence& s) { return s.height() >= n - 2; });
  // (c) and (d) over A(G) at length 2n-1.
  const EnumSpec minimal{g, 2 * un - 1, Constraint::minimal_zero_sum, 0, true, std::nullopt};
  const auto [c, c_count] = run(minimal, [&](const Sequence& s) { return s.height() >= n - 1; });
  const auto [d, d_count] =
      run(minimal, [&](const Sequence& s) { return upsilon_membership(s).has_value(); });

  const bool agree = (a == b) && (b == c) && (c == d);
  if (!agree) {
    for (const auto& s : violations) report.fail(s);
  }
  report.params = {{"n", n},
                   {"group", g.to_string()},
                   {"mode", mode_name(options.mode)},
                   {"statement_a", a},
                   {"statement_b", b},
                   {"statement_c", c},
                   {"statement_d", d},
                   {"orbits_a", a_count},
                   {"orbits_b", b_count},
                   {"orbits_cd", c_count},
                   {"all_agree", agree}};
  (void)d_count;
  return report;
}

CheckReport check_corollary(const GroupSpec& g, const SearchOptions& options) {
  CheckReport report;
  report.check = "corollary";
  ReportTimer timer(report);
  require_rank_two(g);
  const std::size_t length = static_cast<std::size_t>(g.n1() + g.n2() - 1);

  const auto found = enumerate(minimal_spec(g, length, options, 0), options);
  std::set<Sequence> minimal;
  for (const auto& orbit : found.items) minimal.insert(orbit.representative);

  std::set<Sequence> forms;
  std::set<Sequence> flagged;
  std::map<std::string, std::size_t> per_form;
  for (const auto& m : enumerate_forms(g)) {
    const Sequence canon = canonical_form(reconstruct(m));
    if (m.flagged()) {
      flagged.insert(canon);
      continue;
    }
    ++per_form[m.form == Form::I ? "I" : "II_s" + std::to_string(m.s)];
    forms.insert(canon);
  }

  // Minimal zero-sum => some form (via classify_maximal, which re-validates).
  for (const auto& s : minimal) {
    ++report.cases_examined;
    const auto matches = classify_maximal(s);
    const bool any = std::any_of(matches.begin(), matches.end(),
                                 [](const FormMatch& m) { return !m.flagged(); });
    if (!any || !forms.contains(s)) report.fail(s);
  }
  // Form => minimal zero-sum.
  for (const auto& s : forms) {
    ++report.cases_examined;
    if (!minimal.contains(s) || !is_minimal_zero_sum(s)) report.fail(s);
  }

  nlohmann::json flagged_list = nlohmann::json::array();
  for (const auto& s : flagged) {
    ++report.cases_examined;
    if (flagged_list.size() < 16) flagged_list.push_back(format_sequence(s));
  }
  report.params = {{"group", g.to_string()},
                   {"mode", mode_name(options.mode)},
                   {"length", length},
                   {"minimal_orbits", minimal.size()},
                   {"form_orbits", forms.size()},
                   {"form_parameterizations", per_form},
                   {"flagged_form_ii_orbits", flagged.size()},
                   {"flagged_form_ii_examples", flagged_list}};
  return report;
}

}  // namespace zslab
