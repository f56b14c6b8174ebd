#pragma once

#include <cstdint>
#include <string_view>

#include "zslab/report.hpp"
#include "zslab/search.hpp"

namespace zslab {

/// Part 1: every S over C_n with |S| = 2n-1 has 0 in Sigma_n(S).
/// Part 2: every S with |S| = 2n-2 and 0 not in Sigma_n(S) is g^{n-1} h^{n-1}
/// with ord(g - h) = n.
CheckReport check_egz(int n, int part, const SearchOptions& options = {});

/// |Sigma_{|G|}(S)| >= |S| - |G| + k - 1 for all S with |G|+1 <= |S| <= size_cap
/// and all k <= |supp(S)| with h(S) <= |G| - k + 2 and 0 not in Sigma_{|G|}(S).
CheckReport check_hamidoune(const GroupSpec& group, std::size_t size_cap,
                            const SearchOptions& options = {});
/// Same inequality on `samples` uniformly drawn sequences. Labeled randomized;
/// never part of the exhaustive suite.
CheckReport check_hamidoune_random(const GroupSpec& group, std::size_t size_cap,
                                   std::uint64_t samples, std::uint64_t seed);

/// The support/subsum exchange statements over all S, T with 1 <= |S|, |T| <=
/// max_length, every a with ord(a) > 2, and all k.
CheckReport check_exchange_lemmas(const GroupSpec& group, std::size_t max_length = 6,
                                  const SearchOptions& options = {});

enum class PerturbationLemma { unique, nonunique, nonunique_strict };

/// Perturbations S' of S in Upsilon(C_m + C_m) over every basis (f1, f2), every
/// x-vector (unique case) and every g. Requires m >= 4.
///   unique:           S = f1^{m-1} prod (x_v f1 + f2) in Upsilon_u
///   nonunique:        S = f1^{m-1} f2^{m-1} (f1 + f2), S' in Upsilon
///   nonunique_strict: same S, S' in Upsilon_nu
CheckReport check_perturbation_lemmas(int m, PerturbationLemma which,
                                      const SearchOptions& options = {});
PerturbationLemma parse_perturbation_lemma(std::string_view text);

/// Over A(C_{mn} + C_{mn}) at length 2mn-1: an Omega decomposition exists,
/// phi(S) is not a product of 2m zero-sum sequences, zero-sum subsequences of
/// phi(S) of length <= n have length n, and 0 is not in supp(phi(S)).
CheckReport check_lemma_2_5(int m, int n, const SearchOptions& options = {});

/// Whether s splits into `parts` nonempty zero-sum subsequences.
bool splits_into_zero_sums(const Sequence& s, int parts);

}  // namespace zslab
