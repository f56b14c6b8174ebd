#include <doctest.h>

#include "oracles.hpp"
#include "zslab/errors.hpp"
#include "zslab/sequence.hpp"

using namespace zslab;

namespace {

Sequence seq(const GroupSpec& g, const char* text) { return parse_sequence(g, text); }

ElementSet set_of(const GroupSpec& g, std::vector<std::pair<int, int>> xs) {
  ElementSet s(g);
  for (auto [a, b] : xs) s.insert(g.index(a, b));
  return s;
}

}  // namespace

TEST_CASE("sequence statistics") {
  const GroupSpec k33(3, 3), k22(2, 2);
  const Sequence s = seq(k33, "(1,0)^2 (0,1)");
  const SequenceStats st = sequence_stats(s);
  CHECK(st.length == 3);
  CHECK(st.height == 2);
  CHECK(st.sum == GroupElement(k33, 2, 1));
  CHECK(s.multiplicity(GroupElement(k33, 1, 0)) == 2);
  CHECK(st.support.size() == 2);

  const SequenceStats empty = sequence_stats(Sequence(k33));
  CHECK(empty.length == 0);
  CHECK(empty.height == 0);
  CHECK(empty.sum.is_zero());

  const Sequence t = seq(k22, "(1,1)^4");
  CHECK(t.sum().is_zero());
  CHECK(t.height() == 4);
}

TEST_CASE("subsum table examples") {
  const GroupSpec k22(2, 2);
  const SubsumTable t = subsum_table(seq(k22, "(1,0)^2 (0,1)"));
  CHECK(t.layer(0) == set_of(k22, {{0, 0}}));
  CHECK(t.layer(1) == set_of(k22, {{1, 0}, {0, 1}}));
  CHECK(t.layer(2) == set_of(k22, {{0, 0}, {1, 1}}));
  CHECK(t.layer(3) == set_of(k22, {{0, 1}}));
  CHECK(t.all() == set_of(k22, {{1, 0}, {0, 1}, {0, 0}, {1, 1}}));

  const GroupSpec k55(5, 5);
  const GroupElement g(k55, 2, 3);
  const SubsumTable p = subsum_table(Sequence::power(g, 7));
  for (std::size_t j = 0; j <= 7; ++j) {
    CHECK(p.layer(j) == ElementSet::singleton(k55, (static_cast<long long>(j) * g).index()));
  }
  CHECK_THROWS_AS(subsum_table(Sequence::power(g, 30), 20), CapExceeded);
}

TEST_CASE("subsum table against subset enumeration on fixed inputs") {
  const GroupSpec g(2, 6);
  const Sequence s = seq(g, "(1,0) (1,3)^2 (0,2) (1,5) (0,1)^3 (1,1) (0,4) (1,2)");
  const auto o = oracle::subset_sums(oracle::of(g), oracle::terms_of(s));
  const SubsumTable t = subsum_table(s);
  for (std::size_t k = 0; k <= s.length(); ++k) {
    const auto idx = t.layer(k).indices();
    CHECK(std::set<int>(idx.begin(), idx.end()) == o[k]);
  }
  CHECK(t.layer(s.length()) == ElementSet::singleton(g, s.sum_index()));
  CHECK(t.layer(1) == s.support());
}

TEST_CASE("divisibility and gcd") {
  const GroupSpec g(3, 3);
  CHECK(divides(seq(g, "(1,0)"), seq(g, "(1,0)^2 (0,1)")));
  CHECK_FALSE(divides(seq(g, "(1,0)^3"), seq(g, "(1,0)^2 (0,1)")));
  CHECK(divides(Sequence(g), seq(g, "(1,0)^2 (0,1)")));
  CHECK(seq_gcd(seq(g, "(1,0)^2 (0,1)"), seq(g, "(1,0) (0,1)^3")) == seq(g, "(1,0) (0,1)"));
  const Sequence s = seq(g, "(1,2)^2 (2,2)");
  CHECK(seq_gcd(s, s) == s);
  CHECK(seq_gcd(seq(g, "(1,0)^2"), seq(g, "(0,1)^2")).empty());
  CHECK_THROWS_AS(divides(seq(g, "(1,0)"), seq(GroupSpec(2, 2), "(1,0)")), GroupMismatch);
  CHECK_THROWS_AS(seq_gcd(seq(g, "(1,0)"), seq(GroupSpec(2, 2), "(1,0)")), GroupMismatch);
  CHECK(s.without(seq(g, "(1,2)")) == seq(g, "(1,2) (2,2)"));
  CHECK_THROWS_AS(s.without(seq(g, "(0,1)")), DomainError);
  CHECK(seq(g, "(1,0)") * seq(g, "(0,1)") == seq(g, "(0,1) (1,0)"));
}

TEST_CASE("mapping sequences") {
  const GroupSpec g(4, 4);
  const Sequence s = seq(g, "(1,0) (0,1)");
  CHECK(map_sequence(AutMap::identity(g), s) == s);
  CHECK(map_sequence(Homomorphism::multiplication(g, 2), s) == seq(g, "(2,0) (0,2)"));
  const Sequence t = seq(g, "(1,0)^3 (0,1) (1,1)^2 (3,2)");
  for (const auto& a : automorphisms(g)) {
    const Sequence img = map_sequence(a, t);
    CHECK(img.support().size() == t.support().size());
    CHECK(img.length() == t.length());
    CHECK(img.sum() == a(t.sum()));
  }
}

TEST_CASE("parse and format") {
  const GroupSpec g(3, 3);
  const Sequence s = seq(g, "(1,0)^2 (0,1)");
  CHECK(s.multiplicity(GroupElement(g, 1, 0)) == 2);
  CHECK(s.multiplicity(GroupElement(g, 0, 1)) == 1);
  CHECK(seq(g, "").empty());
  CHECK(seq(g, "  ").empty());
  CHECK(parse_sequence(g, format_sequence(s)) == s);
  CHECK(format_sequence(s) == "(0,1) (1,0)^2");
  CHECK(seq(g, "(1,1)^0 (2,2)") == seq(g, "(2,2)"));
  CHECK_THROWS_AS(seq(g, "(3,0)"), ParseError);
  CHECK_THROWS_AS(seq(g, "(1,0"), ParseError);
  CHECK_THROWS_AS(seq(g, "(1,x)"), ParseError);
  CHECK_THROWS_AS(seq(g, "(1,0)^-1"), ParseError);
  try {
    seq(g, "(1,0) (0,5)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
  }
}

TEST_CASE("ordering and equality are on sorted term lists") {
  const GroupSpec g(2, 2);
  CHECK(seq(g, "(1,0) (0,1)") == seq(g, "(0,1) (1,0)"));
  CHECK(seq(g, "(0,1) (1,0)") < seq(g, "(0,1) (1,1)"));
}
