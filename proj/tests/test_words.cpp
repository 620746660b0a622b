#include <doctest.h>

#include <set>

#include "limitset/errors.hpp"
#include "limitset/words.hpp"

using namespace limitset;

namespace {

GeneratorSet triangle() {
  return GeneratorSet({"a", "b"}, {RationalMatrix::from_rows({{1, 1, 2}, {0, 1, 1}, {0, -3, -2}}),
                                   RationalMatrix::from_rows({{-2, 0, -1}, {-5, 1, -1}, {3, 0, 1}})});
}

GeneratorSet free_pair() {
  return GeneratorSet({"a", "b"}, {RationalMatrix::diagonal({9, 3, mpq_class(1, 27)}),
                                   RationalMatrix::from_rows({{2, 1, 1}, {1, 1, 0}, {1, 0, 2}})});
}

}  // namespace

TEST_CASE("word parsing and formatting") {
  const GeneratorSet g = triangle();
  const Word w = parse_word("a b^-1 a^{-1}", g);
  CHECK(format_word(w, g) == "a b^-1 a^-1");
  CHECK(parse_word("aB A", g) == w);
  CHECK(parse_word("ab^-1a⁻¹", g) == w);
  CHECK(parse_word("a^3", g).size() == 3);
  CHECK(parse_word("a a^-1 b", g) == parse_word("b", g));
  CHECK(parse_word("", g).empty());
  try {
    parse_word("a c", g);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
  CHECK_THROWS_AS(parse_word("a^", g), ParseError);
}

TEST_CASE("cyclic reduction and rotation") {
  const GeneratorSet g = triangle();
  const Word w = parse_word("b a b a^-1 b^-1", g);
  const auto [core, conj] = cyclic_reduce(w);
  CHECK(format_word(core, g) == "b");
  CHECK(format_word(conj, g) == "b a");
  CHECK(conj * core * conj.inverse() == w);
  const Word r = canonical_rotation(parse_word("b a b", g));
  CHECK(format_word(r, g) == "a b b");
}

TEST_CASE("non-dedup enumeration counts free words") {
  const GeneratorSet g = free_pair();
  for (int L = 0; L <= 5; ++L) {
    const EnumerationResult e = enumerate(g, L, false);
    CHECK(e.elements.size() == free_word_count(2, L));
  }
  CHECK(free_word_count(2, 3) == 1 + 4 + 12 + 36);
}

TEST_CASE("dedup enumeration matches a brute-force matrix set") {
  const GeneratorSet g = triangle();
  const int L = 6;
  const EnumerationResult e = enumerate(g, L, true);
  const EnumerationResult all = enumerate(g, L, false);
  std::set<std::string> seen;
  std::vector<std::size_t> fresh(L + 1, 0);
  for (const auto& el : all.elements)
    if (seen.insert(el.matrix.to_string()).second) ++fresh[el.word.size()];
  for (int k = 0; k <= L; ++k) CHECK(e.count_at_length(k) == fresh[k]);
}

TEST_CASE("triangle relations are detected") {
  const GeneratorSet g = triangle();
  const EnumerationResult e = enumerate(g, 3, true);
  bool a3 = false;
  for (const auto& r : e.relations) {
    const std::string s = format_word(r.relator, g);
    if (s == "a a a" || s == "a^-1 a^-1 a^-1") a3 = true;
  }
  CHECK(a3);
  CHECK(e.find(RationalMatrix::identity(3)).value() == 0);
}
