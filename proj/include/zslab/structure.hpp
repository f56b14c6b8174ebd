#pragma once

#include <optional>
#include <vector>

#include "zslab/report.hpp"
#include "zslab/search.hpp"

namespace zslab {

/// S = e1^{n-1} prod (x_v e1 + e2) over C_n + C_n with sum x_v = 1 mod n.
struct UpsilonWitness {
  GroupElement e1;
  GroupElement e2;
  /// Sorted, each in [0, n-1].
  std::vector<int> x;
};

/// Builds e1^{n-1} prod (x_v e1 + e2).
Sequence upsilon_sequence(const GroupElement& e1, const GroupElement& e2, std::span<const int> x);

/// First witness in index order of (e1, e2), or nothing when S is not in
/// Upsilon(G). Requires a group C_n + C_n.
std::optional<UpsilonWitness> upsilon_membership(const Sequence& s);

enum class UpsilonClass { not_in, u, nu };

UpsilonClass upsilon_class(const Sequence& s);
const char* to_string(UpsilonClass c);

// Maximal-length classification over C_{n1} + C_{n2} ---------------------

enum class Form { I, II };

/// One parameterization of a length-D(G) sequence.
///   Form I:  e_j^{ord(e_j)-1} prod_{v=1}^{ord(e_k)} (x_v e_j + e_k), (e1, e2) a
///            basis with ord(e_i) = n_i, sum x_v = 1 mod ord(e_j).
///   Form II: g1^{s n1 - 1} prod_{v=1}^{n2+(1-s)n1} (-x_v g1 + g2), {g1, g2}
///            generating, ord(g2) = n2, sum x_v = n1 - 1, s in [1, n2/n1],
///            and s = 1 or n1 g1 = n2 g2.
struct FormMatch {
  Form form = Form::I;
  GroupElement first;   // e1 (Form I) or g1 (Form II)
  GroupElement second;  // e2 (Form I) or g2 (Form II)
  int j = 1;            // Form I: index of the repeated basis element
  int s = 1;            // Form II
  std::vector<int> x;   // sorted
  /// The reconstruction is a minimal zero-sum sequence (checked directly).
  bool minimal = false;

  /// A Form II parameterization with s > 1 that does not reconstruct a
  /// minimal zero-sum sequence; kept for manual review rather than dropped.
  bool flagged() const { return form == Form::II && s > 1 && !minimal; }
};

Sequence reconstruct(const FormMatch& match);

/// Every Form I and Form II parameterization of s, each re-validated by
/// reconstruction. Throws LengthError unless |s| = n1 + n2 - 1.
std::vector<FormMatch> classify_maximal(const Sequence& s);

/// Every sequence of Form I / Form II over the group, one entry per
/// parameterization (no deduplication).
std::vector<FormMatch> enumerate_forms(const GroupSpec& group);

// Exhaustive checks -------------------------------------------------------

CheckReport check_property_b(int n, const SearchOptions& options = {});
CheckReport check_property_c(int n, const SearchOptions& options = {});
CheckReport check_lemma_2_3_equivalence(int n, const SearchOptions& options = {});
CheckReport check_corollary(const GroupSpec& group, const SearchOptions& options = {});

}  // namespace zslab
